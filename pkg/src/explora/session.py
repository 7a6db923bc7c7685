"""Shared domain types for sessions, dialogue states, screen views and
interaction metrics, plus their canonical JSON codecs.

These are plain values: all mutation happens through the dialogue manager,
which serializes turns per session.
"""
from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field

OUTCOME_ANSWERED = "answered"
OUTCOME_CLARIFIED = "clarified"
OUTCOME_FAILED = "failed"
OUTCOMES = (OUTCOME_ANSWERED, OUTCOME_CLARIFIED, OUTCOME_FAILED)


# --- Dialogue states -------------------------------------------------------

@dataclass(frozen=True)
class Onboarding:
    pass


@dataclass(frozen=True)
class AwaitingQuery:
    pass


@dataclass(frozen=True)
class AwaitingConfirmation:
    pending_query: str


@dataclass(frozen=True)
class ResultList:
    query: str
    page: int = 0

    def __post_init__(self):
        if self.page < 0:
            raise ValueError("page must be >= 0")


@dataclass(frozen=True)
class SectionList:
    document: str


@dataclass(frozen=True)
class SummaryView:
    document: str
    section_path: tuple[str, ...]

    def __post_init__(self):
        if not self.section_path:
            raise ValueError("section_path must be nonempty")


@dataclass(frozen=True)
class Ended:
    pass


DialogueState = (
    Onboarding
    | AwaitingQuery
    | AwaitingConfirmation
    | ResultList
    | SectionList
    | SummaryView
    | Ended
)


# --- Screen views ----------------------------------------------------------

@dataclass(frozen=True)
class HeadingNode:
    """One node of the heading tree shown on the sections screen."""

    heading: str
    children: tuple[HeadingNode, ...] = ()


@dataclass(frozen=True)
class ImageRef:
    label: str
    url: str


@dataclass(frozen=True)
class Welcome:
    text: str


@dataclass(frozen=True)
class Results:
    titles: tuple[str, ...]

    def __post_init__(self):
        if len(self.titles) > 3:
            raise ValueError("results screen carries at most 3 titles")


@dataclass(frozen=True)
class Sections:
    title: str
    headings: tuple[HeadingNode, ...]


@dataclass(frozen=True)
class SectionSummary:
    heading: str
    summary_sentences: tuple[str, ...]
    image: ImageRef | None
    child_headings: tuple[str, ...]


ScreenView = Welcome | Results | Sections | SectionSummary


# --- Sessions and metrics --------------------------------------------------

@dataclass
class TurnRecord:
    """One user utterance and how the system handled it."""

    user_text: str
    intent: str
    outcome: str
    latency: float  # milliseconds
    at: float  # epoch seconds

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.latency < 0:
            raise ValueError("latency must be >= 0")


@dataclass
class Session:
    """Per-user conversation state with an append-only turn log."""

    id: str
    state: DialogueState
    created_at: float
    turns: list[TurnRecord] = field(default_factory=list)
    nav_stack: list[DialogueState] = field(default_factory=list)

    def append_turn(self, turn: TurnRecord) -> None:
        """Append a turn, clamping its timestamp so times never decrease."""
        if self.turns and turn.at < self.turns[-1].at:
            turn.at = self.turns[-1].at
        self.turns.append(turn)

    def push_nav(self, state: DialogueState) -> None:
        if isinstance(state, Ended):
            raise ValueError("nav_stack never holds Ended")
        self.nav_stack.append(state)


@dataclass(frozen=True)
class SessionMetrics:
    total_interactions: int
    successful: int
    unsuccessful: int
    total_time: float  # seconds

    def __post_init__(self):
        if self.total_interactions != self.successful + self.unsuccessful:
            raise ValueError("interaction counts do not add up")
        if self.total_time < 0:
            raise ValueError("total_time must be >= 0")


def new_session() -> Session:
    """Fresh session in the Onboarding state with a unique id."""
    return Session(id=uuid.uuid4().hex, state=Onboarding(), created_at=time.time())


def metrics_of(session: Session) -> SessionMetrics:
    """Fold the turn log into interaction counts and elapsed time.

    A turn counts as successful unless it failed; total time runs from
    session creation to the last turn (0 for an empty session).
    """
    total = len(session.turns)
    failed = sum(1 for t in session.turns if t.outcome == OUTCOME_FAILED)
    total_time = 0.0
    if session.turns:
        total_time = max(0.0, session.turns[-1].at - session.created_at)
    return SessionMetrics(
        total_interactions=total,
        successful=total - failed,
        unsuccessful=failed,
        total_time=total_time,
    )


# --- Canonical JSON --------------------------------------------------------

_STATE_KINDS = {
    Onboarding: "onboarding",
    AwaitingQuery: "awaiting_query",
    AwaitingConfirmation: "awaiting_confirmation",
    ResultList: "result_list",
    SectionList: "section_list",
    SummaryView: "summary_view",
    Ended: "ended",
}


def state_to_json(state: DialogueState) -> dict:
    kind = _STATE_KINDS[type(state)]
    if isinstance(state, AwaitingConfirmation):
        return {"kind": kind, "pending_query": state.pending_query}
    if isinstance(state, ResultList):
        return {"kind": kind, "query": state.query, "page": state.page}
    if isinstance(state, SectionList):
        return {"kind": kind, "document": state.document}
    if isinstance(state, SummaryView):
        return {
            "kind": kind,
            "document": state.document,
            "section_path": list(state.section_path),
        }
    return {"kind": kind}


def state_from_json(data: dict) -> DialogueState:
    kind = data["kind"]
    if kind == "onboarding":
        return Onboarding()
    if kind == "awaiting_query":
        return AwaitingQuery()
    if kind == "awaiting_confirmation":
        return AwaitingConfirmation(pending_query=data["pending_query"])
    if kind == "result_list":
        return ResultList(query=data["query"], page=data["page"])
    if kind == "section_list":
        return SectionList(document=data["document"])
    if kind == "summary_view":
        return SummaryView(
            document=data["document"],
            section_path=tuple(data["section_path"]),
        )
    if kind == "ended":
        return Ended()
    raise ValueError(f"unknown state kind {kind!r}")


def _heading_to_json(node: HeadingNode) -> dict:
    return {
        "heading": node.heading,
        "children": [_heading_to_json(c) for c in node.children],
    }


def _heading_from_json(data: dict) -> HeadingNode:
    return HeadingNode(
        heading=data["heading"],
        children=tuple(_heading_from_json(c) for c in data["children"]),
    )


def screen_to_json(screen: ScreenView) -> dict:
    if isinstance(screen, Welcome):
        return {"kind": "welcome", "text": screen.text}
    if isinstance(screen, Results):
        return {"kind": "results", "titles": list(screen.titles)}
    if isinstance(screen, Sections):
        return {
            "kind": "sections",
            "title": screen.title,
            "headings": [_heading_to_json(h) for h in screen.headings],
        }
    if isinstance(screen, SectionSummary):
        image = None
        if screen.image is not None:
            image = {"label": screen.image.label, "url": screen.image.url}
        return {
            "kind": "section_summary",
            "heading": screen.heading,
            "summary_sentences": list(screen.summary_sentences),
            "image": image,
            "child_headings": list(screen.child_headings),
        }
    raise TypeError(f"not a screen view: {screen!r}")


def screen_from_json(data: dict) -> ScreenView:
    kind = data["kind"]
    if kind == "welcome":
        return Welcome(text=data["text"])
    if kind == "results":
        return Results(titles=tuple(data["titles"]))
    if kind == "sections":
        return Sections(
            title=data["title"],
            headings=tuple(_heading_from_json(h) for h in data["headings"]),
        )
    if kind == "section_summary":
        image = None
        if data.get("image") is not None:
            image = ImageRef(label=data["image"]["label"], url=data["image"]["url"])
        return SectionSummary(
            heading=data["heading"],
            summary_sentences=tuple(data["summary_sentences"]),
            image=image,
            child_headings=tuple(data["child_headings"]),
        )
    raise ValueError(f"unknown screen kind {kind!r}")


def turn_to_json(turn: TurnRecord) -> dict:
    return {
        "user_text": turn.user_text,
        "intent": turn.intent,
        "outcome": turn.outcome,
        "latency": turn.latency,
        "at": turn.at,
    }


def turn_from_json(data: dict) -> TurnRecord:
    return TurnRecord(
        user_text=data["user_text"],
        intent=data["intent"],
        outcome=data["outcome"],
        latency=data["latency"],
        at=data["at"],
    )


def session_to_json(session: Session) -> dict:
    return {
        "id": session.id,
        "state": state_to_json(session.state),
        "created_at": session.created_at,
        "turns": [turn_to_json(t) for t in session.turns],
        "nav_stack": [state_to_json(s) for s in session.nav_stack],
    }


def session_from_json(data: dict) -> Session:
    session = Session(
        id=data["id"],
        state=state_from_json(data["state"]),
        created_at=data["created_at"],
        turns=[turn_from_json(t) for t in data["turns"]],
    )
    for s in data["nav_stack"]:
        session.push_nav(state_from_json(s))
    return session


def metrics_to_json(metrics: SessionMetrics) -> dict:
    return {
        "total_interactions": metrics.total_interactions,
        "successful": metrics.successful,
        "unsuccessful": metrics.unsuccessful,
        "total_time": metrics.total_time,
    }
