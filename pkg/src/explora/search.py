"""Clients for the two retrieval stages: a general web search used to focus
the query, and a Wikipedia-style document fetch returning a section tree
plus labeled images.

Both backends expose the same two calls:

    web_search(query, page)   -> up to 3 SearchHit per page
    fetch_document(title)     -> WikiDocument

``FixtureBackend`` reads a directory of JSON files and is bit-deterministic;
``LiveBackend`` talks to the public DuckDuckGo instant-answer endpoint and
the Wikipedia API. Clients are stateless after construction and safe for
concurrent use.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import requests

from explora.text import tokenize

PAGE_SIZE = 3


class SearchError(Exception):
    """Base class for gateway failures."""


class TransportError(SearchError):
    """Backend unreachable or misbehaving at the transport level; retriable."""


class NotFoundError(SearchError):
    """No document matches the requested title."""


class DecodeError(SearchError):
    """Backend payload (or fixture file) has an unexpected shape."""


@dataclass(frozen=True)
class SearchHit:
    title: str
    snippet: str
    source_url: str

    def __post_init__(self):
        if not self.title:
            raise ValueError("hit title must be nonempty")


@dataclass(frozen=True)
class WikiImage:
    label: str
    url: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("image label must be nonempty")


@dataclass(frozen=True)
class WikiSection:
    heading: str
    paragraph: str
    children: tuple[WikiSection, ...] = ()

    def __post_init__(self):
        if not self.heading:
            raise ValueError("section heading must be nonempty")


@dataclass(frozen=True)
class WikiDocument:
    title: str
    sections: tuple[WikiSection, ...]
    images: tuple[WikiImage, ...] = ()


def slugify(text: str) -> str:
    """Normalized lookup key: tokens joined with '-'."""
    return "-".join(tokenize(text))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DecodeError(message)


def hit_from_json(data: object) -> SearchHit:
    _require(isinstance(data, dict), "hit must be an object")
    _require(isinstance(data.get("title"), str) and data["title"] != "",
             "hit needs a nonempty title")
    try:
        return SearchHit(
            title=data["title"],
            snippet=str(data.get("snippet", "")),
            source_url=str(data.get("source_url", "")),
        )
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def section_from_json(data: object) -> WikiSection:
    _require(isinstance(data, dict), "section must be an object")
    _require(isinstance(data.get("heading"), str) and data["heading"] != "",
             "section needs a nonempty heading")
    children = data.get("children", [])
    _require(isinstance(children, list), "section children must be a list")
    return WikiSection(
        heading=data["heading"],
        paragraph=str(data.get("paragraph", "")),
        children=tuple(section_from_json(c) for c in children),
    )


def document_from_json(data: object) -> WikiDocument:
    _require(isinstance(data, dict), "document must be an object")
    _require(isinstance(data.get("title"), str) and data["title"] != "",
             "document needs a nonempty title")
    sections = data.get("sections", [])
    images = data.get("images", [])
    _require(isinstance(sections, list) and sections,
             "document needs at least one section")
    _require(isinstance(images, list), "document images must be a list")
    parsed_images = []
    for img in images:
        _require(isinstance(img, dict), "image must be an object")
        _require(isinstance(img.get("label"), str) and img["label"] != "",
                 "image needs a nonempty label")
        parsed_images.append(WikiImage(label=img["label"], url=str(img.get("url", ""))))
    return WikiDocument(
        title=data["title"],
        sections=tuple(section_from_json(s) for s in sections),
        images=tuple(parsed_images),
    )


class FixtureBackend:
    """Deterministic file-backed backend.

    Layout: ``searches/<slug>.json`` holds the full ranked hit list for a
    query; ``wiki/<slug>.json`` holds a document tree. Slugs come from
    :func:`slugify`. A missing search file means "no hits"; a missing wiki
    file is a not-found error.
    """

    def __init__(self, fixture_dir: str | Path):
        self.root = Path(fixture_dir)

    def _load(self, relative: str) -> object:
        path = self.root / relative
        if not path.is_file():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DecodeError(f"bad fixture {path}: {exc}") from exc

    def web_search(self, query: str, page: int = 0) -> list[SearchHit]:
        if not query.strip():
            raise ValueError("query must be nonempty")
        if page < 0:
            raise ValueError("page must be >= 0")
        data = self._load(f"searches/{slugify(query)}.json")
        if data is None:
            return []
        _require(isinstance(data, list), "search fixture must be an array")
        hits = [hit_from_json(h) for h in data]
        return hits[PAGE_SIZE * page : PAGE_SIZE * (page + 1)]

    def fetch_document(self, title: str) -> WikiDocument:
        if not title.strip():
            raise ValueError("title must be nonempty")
        data = self._load(f"wiki/{slugify(title)}.json")
        if data is None:
            raise NotFoundError(f"no document for {title!r}")
        return document_from_json(data)


# --- Live clients -----------------------------------------------------------

_DDG_URL = "https://api.duckduckgo.com/"
_WIKI_API_URL = "https://en.wikipedia.org/w/api.php"
_WIKI_MEDIA_URL = "https://en.wikipedia.org/api/rest_v1/page/media-list/{title}"
_HEADING_RE = re.compile(r"^(={2,6})\s*(.*?)\s*={2,6}\s*$")


class LiveBackend:
    """HTTP clients for the instant-answer search and the Wikipedia API.

    The instant-answer endpoint rarely returns 3 organic results, so
    related-topic entries are folded in after the abstract to fill the
    triple. Document structure comes from the plain-text extract (heading
    markers -> section tree) and image labels from the media list.
    """

    def __init__(self, timeout_ms: int = 10_000, session: requests.Session | None = None):
        self.timeout = timeout_ms / 1000.0
        self.http = session or requests.Session()
        self.http.headers.setdefault("User-Agent", "explora/0.1 (exploratory search)")

    def _get_json(self, url: str, params: dict | None = None) -> dict:
        last: Exception | None = None
        for _ in range(2):  # one retry on transport failure
            try:
                resp = self.http.get(url, params=params, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise TransportError(f"upstream {resp.status_code} from {url}")
                resp.raise_for_status()
                return resp.json()
            except TransportError as exc:
                last = exc
            except requests.RequestException as exc:
                last = TransportError(str(exc))
            except ValueError as exc:
                raise DecodeError(f"non-JSON payload from {url}") from exc
        raise last  # type: ignore[misc]

    def web_search(self, query: str, page: int = 0) -> list[SearchHit]:
        if not query.strip():
            raise ValueError("query must be nonempty")
        if page < 0:
            raise ValueError("page must be >= 0")
        data = self._get_json(
            _DDG_URL,
            params={
                "q": query,
                "format": "json",
                "no_html": 1,
                "skip_disambig": 1,
            },
        )
        hits: list[SearchHit] = []
        seen_urls: set[str] = set()

        def add(title: str, snippet: str, url: str) -> None:
            if not title or not url or url in seen_urls:
                return
            seen_urls.add(url)
            hits.append(SearchHit(title=title, snippet=snippet, source_url=url))

        if data.get("Heading") and data.get("AbstractURL"):
            add(data["Heading"], data.get("AbstractText", ""), data["AbstractURL"])
        for entry in self._flatten_topics(data.get("RelatedTopics", [])):
            text = entry.get("Text", "")
            title, _, snippet = text.partition(" - ")
            add(title.strip() or text, snippet.strip(), entry.get("FirstURL", ""))
        return hits[PAGE_SIZE * page : PAGE_SIZE * (page + 1)]

    @staticmethod
    def _flatten_topics(topics: list) -> list[dict]:
        flat: list[dict] = []
        for item in topics or []:
            if not isinstance(item, dict):
                continue
            if "Topics" in item:
                flat.extend(t for t in item["Topics"] if isinstance(t, dict))
            else:
                flat.append(item)
        return flat

    def fetch_document(self, title: str) -> WikiDocument:
        if not title.strip():
            raise ValueError("title must be nonempty")
        found = self._get_json(
            _WIKI_API_URL,
            params={
                "action": "query",
                "list": "search",
                "srsearch": title,
                "srlimit": 1,
                "format": "json",
            },
        )
        results = found.get("query", {}).get("search", [])
        if not results:
            raise NotFoundError(f"no document for {title!r}")
        page_title = results[0].get("title")
        _require(isinstance(page_title, str) and page_title != "",
                 "search result lacks a title")

        extract = self._get_json(
            _WIKI_API_URL,
            params={
                "action": "query",
                "prop": "extracts",
                "explaintext": 1,
                "redirects": 1,
                "titles": page_title,
                "format": "json",
            },
        )
        pages = extract.get("query", {}).get("pages", {})
        _require(isinstance(pages, dict) and pages, "extract payload lacks pages")
        page = next(iter(pages.values()))
        text = page.get("extract", "")
        _require(isinstance(text, str) and text.strip() != "", "empty page extract")

        sections = _sections_from_extract(text)
        if not sections:
            sections = (WikiSection(heading=page_title, paragraph=text.strip()),)
        return WikiDocument(
            title=page_title,
            sections=sections,
            images=self._fetch_images(page_title),
        )

    def _fetch_images(self, page_title: str) -> tuple[WikiImage, ...]:
        try:
            media = self._get_json(_WIKI_MEDIA_URL.format(title=page_title.replace(" ", "_")))
        except SearchError:
            return ()  # images are a nice-to-have; the document still works
        images = []
        for item in media.get("items", []):
            if item.get("type") != "image":
                continue
            caption = (item.get("caption") or {}).get("text", "")
            label = caption.strip() or item.get("title", "").replace("File:", "").strip()
            srcset = item.get("srcset") or []
            url = srcset[0].get("src", "") if srcset else ""
            if label:
                images.append(WikiImage(label=label, url=url))
        return tuple(images)


def _sections_from_extract(text: str) -> tuple[WikiSection, ...]:
    """Parse a plain-text extract with ``== Heading ==`` markers into a tree."""
    # (level, heading, paragraph-lines); the lead paragraph becomes "Overview".
    flat: list[tuple[int, str, list[str]]] = [(2, "Overview", [])]
    for line in text.splitlines():
        match = _HEADING_RE.match(line.strip())
        if match:
            level = min(len(match.group(1)), 6)
            heading = match.group(2).strip() or "Untitled"
            flat.append((level, heading, []))
        else:
            flat[-1][2].append(line)

    def build(start: int, level: int) -> tuple[list[WikiSection], int]:
        out: list[WikiSection] = []
        i = start
        while i < len(flat):
            lvl, heading, lines = flat[i]
            if lvl < level:
                break
            if lvl > level:
                # Dangling deeper section: attach to the previous sibling.
                if out:
                    children, i = build(i, lvl)
                    prev = out[-1]
                    out[-1] = WikiSection(
                        heading=prev.heading,
                        paragraph=prev.paragraph,
                        children=prev.children + tuple(children),
                    )
                    continue
                lvl = level
            children, nxt = build(i + 1, lvl + 1)
            out.append(
                WikiSection(
                    heading=heading,
                    paragraph="\n".join(lines).strip(),
                    children=tuple(children),
                )
            )
            i = nxt
        return out, i

    if len(flat) == 1 and not any(line.strip() for line in flat[0][2]):
        return ()
    sections, _ = build(0, 2)
    if sections and sections[0].heading == "Overview" and not sections[0].paragraph \
            and not sections[0].children and len(sections) > 1:
        sections = sections[1:]
    return tuple(sections)
