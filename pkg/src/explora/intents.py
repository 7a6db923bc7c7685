"""Utterance classification and the confirmed-query archive.

Classification is rule-first: navigation command patterns win outright,
then search trigger prefixes, then nearest-neighbour matching against the
shipped training utterances by token Jaccard. Anything below threshold is
treated as a greeting, the catch-all for small talk and off-topic asks.
"""
from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from explora.text import EmptyInputError, jaccard, tokenize

GREETING_LABEL = "greeting"
SEARCH_LABEL = "search"

# Command kinds
OPEN_INDEX = "open_index"
OPEN_TITLE = "open_title"
MORE_RESULTS = "more_results"
RESTART = "restart"
BACK = "back"
STOP = "stop"
CONFIRM_YES = "confirm_yes"
CONFIRM_NO = "confirm_no"

SEARCH_PREFIXES = (
    "search for",
    "tell me about",
    "who is",
    "what is",
    "find information about",
)

_WAKE_WORD = re.compile(r"^\s*alexa\b[\s,!.:]*", re.IGNORECASE)
_OPEN = re.compile(r"^open\s+(.+)$", re.IGNORECASE | re.DOTALL)

# Fixed command phrases, compared as token tuples so punctuation and case
# never matter ("No, show me more results" == "no show me more results").
_PHRASE_COMMANDS = {
    ("no", "show", "me", "more", "results"): MORE_RESULTS,
    ("start", "search"): RESTART,
    ("go", "back"): BACK,
    ("stop",): STOP,
    ("yes",): CONFIRM_YES,
    ("no",): CONFIRM_NO,
}


@dataclass(frozen=True)
class Greeting:
    pass


@dataclass(frozen=True)
class Search:
    query: str

    def __post_init__(self):
        if not self.query:
            raise ValueError("search query must be nonempty")


@dataclass(frozen=True)
class Command:
    kind: str
    index: int | None = None  # for open_index
    title: str | None = None  # for open_title

    def __post_init__(self):
        if self.kind == OPEN_INDEX and (self.index is None or self.index < 1):
            raise ValueError("open_index needs an index >= 1")
        if self.kind == OPEN_TITLE and not self.title:
            raise ValueError("open_title needs a title")


Intent = Greeting | Search | Command


def intent_label(intent: Intent) -> str:
    """Short label for turn records and logs."""
    if isinstance(intent, Greeting):
        return GREETING_LABEL
    if isinstance(intent, Search):
        return SEARCH_LABEL
    return intent.kind


@dataclass(frozen=True)
class TrainingExample:
    text: str
    label: str
    token_set: frozenset[str]


class TrainingSet:
    """Labeled utterances for nearest-neighbour intent matching."""

    def __init__(self, examples: list[tuple[str, str]]):
        seen: set[str] = set()
        parsed: list[TrainingExample] = []
        for text, label in examples:
            if label not in (GREETING_LABEL, SEARCH_LABEL):
                raise ValueError(f"unknown intent label {label!r}")
            if text in seen:
                raise ValueError(f"duplicate training utterance {text!r}")
            seen.add(text)
            parsed.append(
                TrainingExample(text=text, label=label,
                                token_set=frozenset(tokenize(text)))
            )
        self.examples = parsed

    def __len__(self) -> int:
        return len(self.examples)

    def nearest(self, tokens: set[str]) -> tuple[TrainingExample | None, float]:
        """Best example by token Jaccard; earliest wins ties."""
        best: TrainingExample | None = None
        best_score = 0.0
        for example in self.examples:
            score = jaccard(tokens, example.token_set)
            if score > best_score:
                best, best_score = example, score
        return best, best_score


def load_training_set(path: str | Path) -> TrainingSet:
    """Load a JSON array of {"text", "label"} records."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot load training set {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ValueError("training set must be a JSON array")
    examples = []
    for row in data:
        if not isinstance(row, dict) or "text" not in row or "label" not in row:
            raise ValueError(f"bad training row: {row!r}")
        examples.append((row["text"], row["label"]))
    return TrainingSet(examples)


def strip_wake_word(utterance: str) -> str:
    """Drop a leading 'alexa' so transcripts like 'Alexa start search' work."""
    stripped = _WAKE_WORD.sub("", utterance, count=1)
    return stripped if stripped.strip() else utterance


def _match_command(text: str, tokens: tuple[str, ...]) -> Command | None:
    kind = _PHRASE_COMMANDS.get(tokens)
    if kind is not None:
        return Command(kind=kind)
    if tokens and tokens[0] == "open":
        match = _OPEN.match(text.strip())
        if match:
            rest = match.group(1).strip()
            if len(tokens) == 2 and tokens[1].isdigit() and int(tokens[1]) >= 1:
                return Command(kind=OPEN_INDEX, index=int(tokens[1]))
            if rest:
                return Command(kind=OPEN_TITLE, title=rest)
    return None


def _query_after_prefix(text: str) -> str | None:
    """Text following the first search trigger prefix at a token boundary."""
    lower = text.lower()
    earliest: int | None = None
    length = 0
    for prefix in SEARCH_PREFIXES:
        start = 0
        while True:
            pos = lower.find(prefix, start)
            if pos == -1:
                break
            before_ok = pos == 0 or not lower[pos - 1].isalnum()
            end = pos + len(prefix)
            after_ok = end < len(lower) and not lower[end].isalnum()
            if before_ok and after_ok:
                if earliest is None or pos < earliest:
                    earliest, length = pos, len(prefix)
                break
            start = pos + 1
    if earliest is None:
        return None
    rest = text[earliest + length :].strip()
    return rest or None


def classify(utterance: str, training: TrainingSet, threshold: float = 0.5) -> Intent:
    """Map one utterance to a Greeting, Search or Command intent.

    Command patterns take absolute precedence, then explicit search trigger
    prefixes, then nearest training utterance by token Jaccard (adopting its
    label when similarity >= threshold). Everything else is a Greeting.
    """
    if not utterance.strip():
        raise EmptyInputError("empty utterance")
    text = strip_wake_word(utterance).strip()
    tokens = tuple(tokenize(text))

    command = _match_command(text, tokens)
    if command is not None:
        return command

    lower = text.lower()
    for prefix in SEARCH_PREFIXES:
        if lower.startswith(prefix):
            rest = text[len(prefix) :].strip()
            if rest and (len(lower) == len(prefix) or not lower[len(prefix)].isalnum()):
                return Search(query=rest)

    nearest, score = training.nearest(set(tokens))
    if nearest is not None and score >= threshold:
        if nearest.label == SEARCH_LABEL:
            return Search(query=_query_after_prefix(text) or text)
        return Greeting()
    return Greeting()


# --- Query archive ----------------------------------------------------------

@dataclass
class ArchiveEntry:
    text: str
    token_set: frozenset[str]


class QueryArchive:
    """User-confirmed queries, matchable by token Jaccard.

    Entries are deduplicated by token set. When a path is given the archive
    is persisted as line-delimited JSON and reloaded on construction.
    Reads may run concurrently; writes are serialized by a lock.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: list[ArchiveEntry] = []
        self._lock = threading.Lock()
        if self.path is not None and self.path.is_file():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    text = record["text"]
                except (json.JSONDecodeError, TypeError, KeyError) as exc:
                    raise ValueError(f"bad archive line {line!r}") from exc
                self._add(text, persist=False)

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list[str]:
        return [e.text for e in self._entries]

    def _add(self, text: str, persist: bool) -> bool:
        token_set = frozenset(tokenize(text))
        if any(e.token_set == token_set for e in self._entries):
            return False
        self._entries.append(ArchiveEntry(text=text, token_set=token_set))
        if persist and self.path is not None:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps({"text": text}) + "\n")
        return True

    def store_confirmed(self, query: str) -> None:
        """Record a user-confirmed query; idempotent by token set."""
        if not query.strip():
            raise EmptyInputError("empty query")
        with self._lock:
            self._add(query, persist=True)

    def find_similar(self, query: str, threshold: float = 0.6) -> str | None:
        """Closest archived query at or above the Jaccard threshold.

        Ties resolve to the lexicographically smallest original text.
        """
        if not query.strip():
            raise EmptyInputError("empty query")
        tokens = frozenset(tokenize(query))
        best: str | None = None
        best_score = 0.0
        for entry in list(self._entries):
            score = jaccard(set(tokens), set(entry.token_set))
            if score < threshold:
                continue
            if score > best_score or (score == best_score and best is not None
                                      and entry.text < best):
                best, best_score = entry.text, score
        return best
