"""Service configuration: a flat ``section.key = value`` file format plus
the factory that assembles a dialogue manager from it.

Unknown keys are rejected so typos fail fast. ``#`` starts a comment and
blank lines are skipped.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from explora.dialogue import DialogueManager
from explora.intents import QueryArchive, load_training_set
from explora.search import FixtureBackend, LiveBackend
from explora.summarize import SummarizerConfig


class ConfigError(ValueError):
    """Invalid config file or invalid value."""


_KNOWN_KEYS = {
    "service.host",
    "service.port",
    "service.session_cap",
    "service.idle_minutes",
    "search.backend",
    "search.fixture_dir",
    "search.timeout_ms",
    "summarizer.eps",
    "summarizer.min_pts",
    "summarizer.sentence_fraction",
    "summarizer.cluster_fraction",
    "intents.training_path",
    "intents.match_threshold",
    "archive.path",
    "archive.match_threshold",
    "log.path",
}


def default_fixture_dir() -> Path:
    """The fixture corpus shipped inside the package."""
    return Path(resources.files("explora") / "data" / "fixtures")


def default_training_path() -> Path:
    return Path(resources.files("explora") / "data" / "intents.json")


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    session_cap: int = 1024
    idle_minutes: float = 30.0
    backend: str = "fixture"
    fixture_dir: Path | None = None  # None -> packaged corpus
    timeout_ms: int = 10_000
    eps: float = 0.6
    min_pts: int = 2
    sentence_fraction: float = 0.5
    cluster_fraction: float = 0.7
    training_path: Path | None = None  # None -> packaged set
    intent_threshold: float = 0.5
    archive_path: Path | None = None  # None -> in-memory only
    archive_threshold: float = 0.6
    log_path: Path | None = None  # None -> no turn log

    def validate(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"service.port must be in [1, 65535], got {self.port}")
        if self.session_cap < 1:
            raise ConfigError("service.session_cap must be >= 1")
        if self.idle_minutes <= 0:
            raise ConfigError("service.idle_minutes must be > 0")
        if self.backend not in ("fixture", "live"):
            raise ConfigError(
                f"search.backend must be 'fixture' or 'live', got {self.backend!r}"
            )
        if self.backend == "fixture" and not self.resolved_fixture_dir().is_dir():
            raise ConfigError(
                f"search.fixture_dir {self.resolved_fixture_dir()} does not exist"
            )
        if self.timeout_ms < 1:
            raise ConfigError("search.timeout_ms must be >= 1")
        if self.eps <= 0:
            raise ConfigError("summarizer.eps must be > 0")
        if self.min_pts < 1:
            raise ConfigError("summarizer.min_pts must be >= 1")
        for name, value in (
            ("summarizer.sentence_fraction", self.sentence_fraction),
            ("summarizer.cluster_fraction", self.cluster_fraction),
        ):
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        for name, value in (
            ("intents.match_threshold", self.intent_threshold),
            ("archive.match_threshold", self.archive_threshold),
        ):
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")

    def resolved_fixture_dir(self) -> Path:
        return self.fixture_dir if self.fixture_dir is not None else default_fixture_dir()

    def resolved_training_path(self) -> Path:
        return (
            self.training_path
            if self.training_path is not None
            else default_training_path()
        )


def _parse_lines(text: str, source: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _typed(values: dict[str, str], key: str, kind, source: str):
    try:
        return kind(values[key])
    except ValueError as exc:
        raise ConfigError(f"{source}: bad value for {key}: {values[key]!r}") from exc


def load_config(path: str | Path) -> ServiceConfig:
    """Parse and validate a config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    source = str(path)
    values = _parse_lines(text, source)

    cfg = ServiceConfig()
    if "service.host" in values:
        cfg.host = values["service.host"]
    if "service.port" in values:
        cfg.port = _typed(values, "service.port", int, source)
    if "service.session_cap" in values:
        cfg.session_cap = _typed(values, "service.session_cap", int, source)
    if "service.idle_minutes" in values:
        cfg.idle_minutes = _typed(values, "service.idle_minutes", float, source)
    if "search.backend" in values:
        cfg.backend = values["search.backend"]
    if "search.fixture_dir" in values:
        cfg.fixture_dir = Path(values["search.fixture_dir"])
    if "search.timeout_ms" in values:
        cfg.timeout_ms = _typed(values, "search.timeout_ms", int, source)
    if "summarizer.eps" in values:
        cfg.eps = _typed(values, "summarizer.eps", float, source)
    if "summarizer.min_pts" in values:
        cfg.min_pts = _typed(values, "summarizer.min_pts", int, source)
    if "summarizer.sentence_fraction" in values:
        cfg.sentence_fraction = _typed(values, "summarizer.sentence_fraction", float, source)
    if "summarizer.cluster_fraction" in values:
        cfg.cluster_fraction = _typed(values, "summarizer.cluster_fraction", float, source)
    if "intents.training_path" in values:
        cfg.training_path = Path(values["intents.training_path"])
    if "intents.match_threshold" in values:
        cfg.intent_threshold = _typed(values, "intents.match_threshold", float, source)
    if "archive.path" in values:
        cfg.archive_path = Path(values["archive.path"])
    if "archive.match_threshold" in values:
        cfg.archive_threshold = _typed(values, "archive.match_threshold", float, source)
    if "log.path" in values:
        cfg.log_path = Path(values["log.path"])

    cfg.validate()
    return cfg


def build_manager(cfg: ServiceConfig) -> DialogueManager:
    """Assemble the dialogue manager and its collaborators from config."""
    if cfg.backend == "fixture":
        backend = FixtureBackend(cfg.resolved_fixture_dir())
    else:
        backend = LiveBackend(timeout_ms=cfg.timeout_ms)
    try:
        training = load_training_set(cfg.resolved_training_path())
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    archive = QueryArchive(cfg.archive_path)
    summarizer = SummarizerConfig(
        eps=cfg.eps,
        min_pts=cfg.min_pts,
        sentence_fraction=cfg.sentence_fraction,
        cluster_fraction=cfg.cluster_fraction,
    )
    return DialogueManager(
        backend=backend,
        training=training,
        archive=archive,
        summarizer=summarizer,
        intent_threshold=cfg.intent_threshold,
        archive_threshold=cfg.archive_threshold,
    )
