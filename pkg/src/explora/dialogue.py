"""The dialogue state machine.

Routes each classified utterance through the current session state,
orchestrating the search gateway, the summarizer, the image ranker and the
query archive, and produces one Reply (speech plus a screen view) per turn.
Backend failures surface as failed turns with apologetic speech; they never
change the session state and never crash the caller.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from explora import intents
from explora.intents import Command, Greeting, Intent, QueryArchive, Search, TrainingSet
from explora.media import select_image
from explora.search import NotFoundError, SearchError, WikiDocument, WikiSection
from explora.session import (
    OUTCOME_ANSWERED,
    OUTCOME_CLARIFIED,
    OUTCOME_FAILED,
    AwaitingConfirmation,
    AwaitingQuery,
    DialogueState,
    Ended,
    HeadingNode,
    ImageRef,
    Onboarding,
    ResultList,
    Results,
    ScreenView,
    SectionList,
    Sections,
    SectionSummary,
    Session,
    SummaryView,
    TurnRecord,
    Welcome,
)
from explora.summarize import SummarizerConfig, summarize_section
from explora.text import tokenize

INTRO_SPEECH = (
    "Welcome! I can help you explore a topic in depth. Say something like "
    "'tell me about martin luther king' to begin. Once results appear, say "
    "'Open 1' to open the first one, or 'No, show me more results'. You can "
    "always say 'go back', 'start search' or 'stop'. What would you like to "
    "search?"
)
GREETING_SPEECH = (
    "Hello! Ask me to look something up, for example 'tell me about martin "
    "luther king'."
)
ASK_QUERY_SPEECH = "What would you like to search?"
RESTART_SPEECH = "Okay, starting over. What would you like to search?"
GOODBYE_SPEECH = "Goodbye! Thanks for exploring."
APOLOGY_SPEECH = (
    "Sorry, I could not reach the search service just now. Please try again."
)

_HELP_AWAITING_QUERY = (
    "I didn't catch a search. Say 'tell me about' followed by a topic."
)
_HELP_RESULTS = (
    "Say 'Open' and a result number to open it, 'No, show me more results' "
    "for the next page, or 'start search' to search again."
)
_HELP_SECTIONS = "Say 'Open' and a section number or name to hear its summary."
_HELP_SUMMARY = (
    "Say 'Open' and a subsection number or name to go deeper, or 'go back'."
)


class SessionEndedError(ValueError):
    """handle() was called on a session that already ended."""


@dataclass(frozen=True)
class Reply:
    speech: str
    screen: ScreenView
    turn_outcome: str

    def __post_init__(self):
        if not self.speech:
            raise ValueError("reply speech must be nonempty")


def _heading_tree(sections: tuple[WikiSection, ...]) -> tuple[HeadingNode, ...]:
    return tuple(
        HeadingNode(heading=s.heading, children=_heading_tree(s.children))
        for s in sections
    )


def flatten_sections(
    sections: tuple[WikiSection, ...],
    prefix: tuple[str, ...] = (),
) -> list[tuple[tuple[str, ...], WikiSection]]:
    """Pre-order (path, section) pairs; display numbering follows this order."""
    flat = []
    for section in sections:
        path = prefix + (section.heading,)
        flat.append((path, section))
        flat.extend(flatten_sections(section.children, path))
    return flat


def section_at(document: WikiDocument, path: tuple[str, ...]) -> WikiSection:
    """Resolve a root-to-node heading path inside the document tree."""
    nodes = document.sections
    section: WikiSection | None = None
    for heading in path:
        section = next((s for s in nodes if s.heading == heading), None)
        if section is None:
            raise NotFoundError(f"no section {' > '.join(path)!r} in {document.title!r}")
        nodes = section.children
    assert section is not None
    return section


def _resolve_open(
    command: Command, options: list[str]
) -> tuple[int | None, str | None]:
    """Map an open command onto a numbered option list.

    Returns (0-based position, None) on success or (None, reason) where
    reason is 'out_of_range', 'ambiguous' or 'no_match'.
    """
    if command.kind == intents.OPEN_INDEX:
        if 1 <= command.index <= len(options):
            return command.index - 1, None
        return None, "out_of_range"
    wanted = command.title or ""
    lowered = wanted.lower()
    for i, option in enumerate(options):
        if option.lower() == lowered:
            return i, None
    wanted_tokens = set(tokenize(wanted))
    if wanted_tokens:
        matches = [
            i for i, option in enumerate(options)
            if wanted_tokens <= set(tokenize(option))
        ]
        if len(matches) == 1:
            return matches[0], None
        if len(matches) > 1:
            return None, "ambiguous"
    return None, "no_match"


class DialogueManager:
    """Per-turn orchestration; one instance serves many sessions.

    Turns for a single session must be serialized by the caller (the
    service keeps one lock per session); distinct sessions may progress
    concurrently.
    """

    def __init__(
        self,
        backend,
        training: TrainingSet,
        archive: QueryArchive,
        summarizer: SummarizerConfig | None = None,
        intent_threshold: float = 0.5,
        archive_threshold: float = 0.6,
    ):
        self.backend = backend
        self.training = training
        self.archive = archive
        self.summarizer = summarizer or SummarizerConfig()
        self.intent_threshold = intent_threshold
        self.archive_threshold = archive_threshold

    # -- entry points --------------------------------------------------------

    def start(self, session: Session) -> Reply:
        """Run the onboarding introduction without recording a turn.

        Interactions are counted per user utterance, so the system-initiated
        greeting stays off the metrics.
        """
        if isinstance(session.state, Onboarding):
            session.state = AwaitingQuery()
        return Reply(INTRO_SPEECH, Welcome(INTRO_SPEECH), OUTCOME_ANSWERED)

    def handle(self, session: Session, utterance: str) -> Reply:
        """Process one user utterance and append exactly one TurnRecord."""
        if isinstance(session.state, Ended):
            raise SessionEndedError(f"session {session.id} has ended")
        started = time.perf_counter()
        intent = intents.classify(utterance, self.training, self.intent_threshold)
        try:
            reply = self._dispatch(session, intent)
        except SearchError:
            reply = Reply(
                APOLOGY_SPEECH, self._safe_screen(session.state), OUTCOME_FAILED
            )
        session.append_turn(
            TurnRecord(
                user_text=utterance,
                intent=intents.intent_label(intent),
                outcome=reply.turn_outcome,
                latency=(time.perf_counter() - started) * 1000.0,
                at=time.time(),
            )
        )
        return reply

    # -- dispatch ------------------------------------------------------------

    def _dispatch(self, session: Session, intent: Intent) -> Reply:
        state = session.state

        if isinstance(intent, Command) and intent.kind == intents.STOP:
            session.state = Ended()
            return Reply(GOODBYE_SPEECH, Welcome(GOODBYE_SPEECH), OUTCOME_ANSWERED)

        if isinstance(state, Onboarding):
            # Whatever the user opens with, introduce the system first.
            session.state = AwaitingQuery()
            return Reply(INTRO_SPEECH, Welcome(INTRO_SPEECH), OUTCOME_ANSWERED)

        if isinstance(intent, Command) and intent.kind == intents.RESTART:
            session.state = AwaitingQuery()
            session.nav_stack.clear()
            return Reply(RESTART_SPEECH, Welcome(ASK_QUERY_SPEECH), OUTCOME_ANSWERED)

        if isinstance(state, AwaitingQuery):
            return self._in_awaiting_query(session, intent)
        if isinstance(state, AwaitingConfirmation):
            return self._in_confirmation(session, intent, state)
        if isinstance(state, ResultList):
            return self._in_results(session, intent, state)
        if isinstance(state, SectionList):
            return self._in_sections(session, intent, state)
        if isinstance(state, SummaryView):
            return self._in_summary(session, intent, state)
        raise AssertionError(f"unhandled state {state!r}")

    def _in_awaiting_query(self, session: Session, intent: Intent) -> Reply:
        if isinstance(intent, Search):
            candidate = (
                self.archive.find_similar(intent.query, self.archive_threshold)
                or intent.query
            )
            speech = f"Did you mean: {candidate}?"
            session.state = AwaitingConfirmation(pending_query=candidate)
            return Reply(speech, Welcome(speech), OUTCOME_CLARIFIED)
        if isinstance(intent, Greeting):
            return Reply(GREETING_SPEECH, Welcome(GREETING_SPEECH), OUTCOME_ANSWERED)
        return self._fail(session, _HELP_AWAITING_QUERY)

    def _in_confirmation(
        self, session: Session, intent: Intent, state: AwaitingConfirmation
    ) -> Reply:
        if isinstance(intent, Command) and intent.kind == intents.CONFIRM_YES:
            self.archive.store_confirmed(state.pending_query)
            hits = self.backend.web_search(state.pending_query, 0)
            if not hits:
                session.state = AwaitingQuery()
                speech = (
                    f"I couldn't find any results for '{state.pending_query}'. "
                    + ASK_QUERY_SPEECH
                )
                return Reply(speech, Welcome(speech), OUTCOME_FAILED)
            session.state = ResultList(query=state.pending_query, page=0)
            return self._results_reply(hits, page=0)
        if isinstance(intent, Command) and intent.kind == intents.CONFIRM_NO:
            session.state = AwaitingQuery()
            return Reply(
                ASK_QUERY_SPEECH, Welcome(ASK_QUERY_SPEECH), OUTCOME_CLARIFIED
            )
        if isinstance(intent, Greeting):
            return Reply(GREETING_SPEECH, Welcome(GREETING_SPEECH), OUTCOME_ANSWERED)
        return self._fail(
            session, f"Please answer 'yes' or 'no'. Did you mean: {state.pending_query}?"
        )

    def _in_results(self, session: Session, intent: Intent, state: ResultList) -> Reply:
        if isinstance(intent, Command) and intent.kind in (
            intents.OPEN_INDEX, intents.OPEN_TITLE,
        ):
            hits = self.backend.web_search(state.query, state.page)
            position, reason = _resolve_open(intent, [h.title for h in hits])
            if position is None:
                return self._fail(session, self._open_failure(reason, len(hits)))
            return self._open_document(session, hits[position].title)
        if isinstance(intent, Command) and intent.kind == intents.MORE_RESULTS:
            hits = self.backend.web_search(state.query, state.page + 1)
            if not hits:
                return self._fail(session, "There are no more results.")
            session.state = ResultList(query=state.query, page=state.page + 1)
            return self._results_reply(hits, page=state.page + 1)
        if isinstance(intent, Greeting):
            return Reply(GREETING_SPEECH, self._safe_screen(session.state), OUTCOME_ANSWERED)
        return self._fail(session, _HELP_RESULTS)

    def _in_sections(self, session: Session, intent: Intent, state: SectionList) -> Reply:
        if isinstance(intent, Command) and intent.kind in (
            intents.OPEN_INDEX, intents.OPEN_TITLE,
        ):
            document = self.backend.fetch_document(state.document)
            flat = flatten_sections(document.sections)
            position, reason = _resolve_open(intent, [s.heading for _, s in flat])
            if position is None:
                return self._fail(session, self._open_failure(reason, len(flat)))
            path, _ = flat[position]
            return self._enter_summary(session, document, path, push_from=state)
        if isinstance(intent, Command) and intent.kind == intents.BACK:
            return self._go_back(session)
        if isinstance(intent, Greeting):
            return Reply(GREETING_SPEECH, self._safe_screen(session.state), OUTCOME_ANSWERED)
        return self._fail(session, _HELP_SECTIONS)

    def _in_summary(self, session: Session, intent: Intent, state: SummaryView) -> Reply:
        if isinstance(intent, Command) and intent.kind in (
            intents.OPEN_INDEX, intents.OPEN_TITLE,
        ):
            document = self.backend.fetch_document(state.document)
            section = section_at(document, state.section_path)
            options = [c.heading for c in section.children]
            position, reason = _resolve_open(intent, options)
            if position is None:
                return self._fail(session, self._open_failure(reason, len(options)))
            path = state.section_path + (options[position],)
            return self._enter_summary(session, document, path, push_from=state)
        if isinstance(intent, Command) and intent.kind == intents.BACK:
            return self._go_back(session)
        if isinstance(intent, Greeting):
            return Reply(GREETING_SPEECH, self._safe_screen(session.state), OUTCOME_ANSWERED)
        return self._fail(session, _HELP_SUMMARY)

    # -- shared steps ---------------------------------------------------------

    def _results_reply(self, hits, page: int) -> Reply:
        titles = tuple(h.title for h in hits)
        listed = "; ".join(f"{i + 1}. {t}" for i, t in enumerate(titles))
        speech = (
            f"Here are the top results: {listed}. Say 'Open' and a number to "
            "open one, or 'No, show me more results'."
        )
        return Reply(speech, Results(titles=titles), OUTCOME_ANSWERED)

    def _open_document(self, session: Session, title: str) -> Reply:
        document = self.backend.fetch_document(title)
        session.state = SectionList(document=document.title)
        return self._sections_reply(document)

    def _sections_reply(self, document: WikiDocument) -> Reply:
        flat = flatten_sections(document.sections)
        listed = "; ".join(f"{i + 1}. {path[-1]}" for i, (path, _) in enumerate(flat))
        speech = (
            f"Here are the sections of {document.title}: {listed}. "
            "Say 'Open' and a number to hear a summary."
        )
        screen = Sections(title=document.title, headings=_heading_tree(document.sections))
        return Reply(speech, screen, OUTCOME_ANSWERED)

    def _enter_summary(
        self,
        session: Session,
        document: WikiDocument,
        path: tuple[str, ...],
        push_from: DialogueState,
    ) -> Reply:
        reply = self._summary_reply(document, path)
        session.push_nav(push_from)
        session.state = SummaryView(document=document.title, section_path=path)
        return reply

    def _summary_reply(self, document: WikiDocument, path: tuple[str, ...]) -> Reply:
        section = section_at(document, path)
        if section.paragraph.strip():
            summary = summarize_section(section.heading, section.paragraph, self.summarizer)
            sentences = tuple(text for _, text in summary.sentences)
            speech = f"{section.heading}. " + " ".join(sentences)
        else:
            sentences = ()
            speech = f"{section.heading} has no text of its own."
        child_headings = tuple(c.heading for c in section.children)
        if child_headings:
            listed = "; ".join(
                f"{i + 1}. {h}" for i, h in enumerate(child_headings)
            )
            speech += f" Subsections: {listed}. Say 'Open' and a number, or 'go back'."
        image = select_image(section.heading, list(document.images))
        image_ref = ImageRef(label=image.label, url=image.url) if image else None
        screen = SectionSummary(
            heading=section.heading,
            summary_sentences=sentences,
            image=image_ref,
            child_headings=child_headings,
        )
        return Reply(speech, screen, OUTCOME_ANSWERED)

    def _go_back(self, session: Session) -> Reply:
        if not session.nav_stack:
            return self._fail(
                session,
                "There is nothing to go back to. Say 'start search' to search again.",
            )
        previous = session.nav_stack.pop()
        session.state = previous
        if isinstance(previous, SectionList):
            document = self.backend.fetch_document(previous.document)
            return self._sections_reply(document)
        if isinstance(previous, SummaryView):
            document = self.backend.fetch_document(previous.document)
            return self._summary_reply(document, previous.section_path)
        raise AssertionError(f"unexpected nav_stack entry {previous!r}")

    def _fail(self, session: Session, speech: str) -> Reply:
        return Reply(speech, self._safe_screen(session.state), OUTCOME_FAILED)

    def _open_failure(self, reason: str | None, shown: int) -> str:
        if reason == "ambiguous":
            return "More than one item matches that name. Please say 'Open' and a number."
        if reason == "out_of_range":
            if shown == 0:
                return "There is nothing to open here."
            return f"Please pick a number between 1 and {shown}."
        return "I couldn't find that item. Please say 'Open' and a number."

    def _safe_screen(self, state: DialogueState) -> ScreenView:
        try:
            return self.render_state(state)
        except SearchError:
            return Welcome(APOLOGY_SPEECH)

    def render_state(self, state: DialogueState) -> ScreenView:
        """Screen view a state would show; used to keep the display stable
        on turns that do not change the view (greetings, failures)."""
        if isinstance(state, Onboarding):
            return Welcome(INTRO_SPEECH)
        if isinstance(state, AwaitingQuery):
            return Welcome(ASK_QUERY_SPEECH)
        if isinstance(state, AwaitingConfirmation):
            return Welcome(f"Did you mean: {state.pending_query}?")
        if isinstance(state, ResultList):
            hits = self.backend.web_search(state.query, state.page)
            return Results(titles=tuple(h.title for h in hits))
        if isinstance(state, SectionList):
            document = self.backend.fetch_document(state.document)
            return Sections(
                title=document.title, headings=_heading_tree(document.sections)
            )
        if isinstance(state, SummaryView):
            document = self.backend.fetch_document(state.document)
            return self._summary_reply(document, state.section_path).screen
        return Welcome(GOODBYE_SPEECH)
