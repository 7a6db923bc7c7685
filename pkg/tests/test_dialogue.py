import pytest

from explora.dialogue import (
    APOLOGY_SPEECH,
    GREETING_SPEECH,
    DialogueManager,
    SessionEndedError,
    flatten_sections,
    section_at,
)
from explora.search import TransportError
from explora.session import (
    OUTCOME_ANSWERED,
    OUTCOME_CLARIFIED,
    OUTCOME_FAILED,
    AwaitingConfirmation,
    AwaitingQuery,
    Ended,
    Onboarding,
    ResultList,
    Results,
    SectionList,
    Sections,
    SectionSummary,
    SummaryView,
    new_session,
)


def drive(manager, session, utterances):
    return [manager.handle(session, u) for u in utterances]


class FlakyBackend:
    """Raises on every call; used to check failure handling."""

    def web_search(self, query, page=0):
        raise TransportError("down")

    def fetch_document(self, title):
        raise TransportError("down")


class TestOnboardingAndQuery:
    def test_any_utterance_moves_past_onboarding(self, manager):
        session = new_session()
        reply = manager.handle(session, "hello")
        assert session.state == AwaitingQuery()
        assert reply.turn_outcome == OUTCOME_ANSWERED
        assert "What would you like to search" in reply.speech

    def test_search_asks_for_confirmation(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        reply = manager.handle(session, "tell me about martin luther king")
        assert reply.speech == "Did you mean: martin luther king?"
        assert session.state == AwaitingConfirmation(pending_query="martin luther king")
        assert reply.turn_outcome == OUTCOME_CLARIFIED

    def test_archived_query_suggested_as_candidate(self, make_manager):
        manager = make_manager()
        manager.archive.store_confirmed("martin luther king")
        session = new_session()
        session.state = AwaitingQuery()
        reply = manager.handle(session, "tell me about martin luther king jr")
        assert reply.speech == "Did you mean: martin luther king?"

    def test_greeting_stays_put(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        reply = manager.handle(session, "good morning")
        assert session.state == AwaitingQuery()
        assert reply.speech == GREETING_SPEECH
        assert reply.turn_outcome == OUTCOME_ANSWERED

    def test_inapplicable_command_fails_in_place(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        reply = manager.handle(session, "open 2")
        assert session.state == AwaitingQuery()
        assert reply.turn_outcome == OUTCOME_FAILED


class TestConfirmation:
    def setup_confirmed(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        manager.handle(session, "tell me about martin luther king")
        return session

    def test_yes_runs_search_and_shows_three_titles(self, manager):
        session = self.setup_confirmed(manager)
        reply = manager.handle(session, "yes")
        assert session.state == ResultList(query="martin luther king", page=0)
        assert isinstance(reply.screen, Results)
        assert len(reply.screen.titles) == 3
        assert manager.archive.find_similar("martin luther king") == "martin luther king"

    def test_no_returns_to_query(self, manager):
        session = self.setup_confirmed(manager)
        reply = manager.handle(session, "no")
        assert session.state == AwaitingQuery()
        assert reply.turn_outcome == OUTCOME_CLARIFIED

    def test_yes_with_no_hits_fails_back_to_query(self, manager):
        session = new_session()
        session.state = AwaitingConfirmation(pending_query="zzzz no such")
        reply = manager.handle(session, "yes")
        assert session.state == AwaitingQuery()
        assert reply.turn_outcome == OUTCOME_FAILED


class TestResults:
    def at_results(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        drive(manager, session, ["tell me about martin luther king", "yes"])
        return session

    def test_open_index_shows_sections(self, manager):
        session = self.at_results(manager)
        reply = manager.handle(session, "Open 1")
        assert session.state == SectionList(document="Martin Luther King Jr.")
        assert isinstance(reply.screen, Sections)
        assert [h.heading for h in reply.screen.headings] == [
            "Early life", "Civil rights movement", "Assassination", "Legacy",
        ]

    def test_open_by_title_case_insensitive(self, manager):
        session = self.at_results(manager)
        manager.handle(session, "open martin luther king sr.")
        assert session.state == SectionList(document="Martin Luther King Sr.")

    def test_open_by_unique_token_subset(self, manager):
        session = self.at_results(manager)
        manager.handle(session, "open iii")
        assert session.state == SectionList(document="Martin Luther King III")

    def test_ambiguous_title_asks_for_numbers(self, manager):
        session = self.at_results(manager)
        reply = manager.handle(session, "open martin luther king")
        assert reply.turn_outcome == OUTCOME_FAILED
        assert "number" in reply.speech
        assert isinstance(session.state, ResultList)

    def test_open_out_of_range_fails(self, manager):
        session = self.at_results(manager)
        reply = manager.handle(session, "Open 7")
        assert reply.turn_outcome == OUTCOME_FAILED
        assert session.state == ResultList(query="martin luther king", page=0)

    def test_more_results_pages_forward_disjoint(self, manager):
        session = self.at_results(manager)
        first = manager.render_state(session.state)
        reply = manager.handle(session, "No, show me more results")
        assert session.state == ResultList(query="martin luther king", page=1)
        assert not set(first.titles) & set(reply.screen.titles)

    def test_more_results_exhausted_fails_in_place(self, manager):
        session = self.at_results(manager)
        drive(manager, session, ["No, show me more results", "No, show me more results"])
        assert session.state == ResultList(query="martin luther king", page=2)
        reply = manager.handle(session, "No, show me more results")
        assert reply.turn_outcome == OUTCOME_FAILED
        assert "no more results" in reply.speech.lower()
        assert session.state == ResultList(query="martin luther king", page=2)


class TestSectionNavigation:
    def at_sections(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        drive(manager, session, ["tell me about martin luther king", "yes", "Open 1"])
        return session

    def test_open_section_summarizes_and_pushes(self, manager):
        session = self.at_sections(manager)
        reply = manager.handle(session, "Open 4")
        assert session.state == SummaryView(
            document="Martin Luther King Jr.", section_path=("Civil rights movement",)
        )
        assert session.nav_stack == [SectionList(document="Martin Luther King Jr.")]
        assert isinstance(reply.screen, SectionSummary)
        assert reply.screen.summary_sentences
        assert reply.screen.child_headings == ("Montgomery bus boycott", "March on Washington")
        assert reply.speech.startswith("Civil rights movement.")

    def test_nested_section_by_preorder_number(self, manager):
        session = self.at_sections(manager)
        manager.handle(session, "Open 2")  # Early life=1, Education=2
        assert session.state == SummaryView(
            document="Martin Luther King Jr.", section_path=("Early life", "Education")
        )

    def test_summary_picks_matching_image(self, manager):
        session = self.at_sections(manager)
        reply = manager.handle(session, "open march on washington")
        assert reply.screen.image is not None
        assert "March on Washington" in reply.screen.image.label

    def test_drill_down_and_back_restores_views(self, manager):
        session = self.at_sections(manager)
        manager.handle(session, "Open 4")
        reply = manager.handle(session, "Open 1")  # child: Montgomery bus boycott
        assert session.state == SummaryView(
            document="Martin Luther King Jr.",
            section_path=("Civil rights movement", "Montgomery bus boycott"),
        )
        assert len(session.nav_stack) == 2
        back1 = manager.handle(session, "go back")
        assert session.state == SummaryView(
            document="Martin Luther King Jr.", section_path=("Civil rights movement",)
        )
        assert isinstance(back1.screen, SectionSummary)
        back2 = manager.handle(session, "go back")
        assert session.state == SectionList(document="Martin Luther King Jr.")
        assert isinstance(back2.screen, Sections)
        assert session.nav_stack == []

    def test_back_at_section_root_fails(self, manager):
        session = self.at_sections(manager)
        reply = manager.handle(session, "go back")
        assert reply.turn_outcome == OUTCOME_FAILED
        assert isinstance(session.state, SectionList)

    def test_nav_stack_depth_tracks_drilldowns_minus_backs(self, manager):
        session = self.at_sections(manager)
        script = ["Open 4", "Open 1", "go back", "Open 2", "go back", "go back"]
        depth = 0
        for utterance in script:
            reply = manager.handle(session, utterance)
            if utterance.startswith("Open") and reply.turn_outcome == OUTCOME_ANSWERED:
                depth += 1
            elif utterance == "go back" and reply.turn_outcome == OUTCOME_ANSWERED:
                depth -= 1
            assert len(session.nav_stack) == depth
            assert depth >= 0


class TestGlobalCommands:
    def test_restart_from_deep_state_clears_stack(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        drive(manager, session, [
            "tell me about martin luther king", "yes", "Open 1", "Open 4", "Open 1",
        ])
        assert len(session.nav_stack) == 2
        manager.handle(session, "alexa start search")
        assert session.state == AwaitingQuery()
        assert session.nav_stack == []

    def test_stop_ends_everywhere(self, manager):
        session = new_session()
        manager.handle(session, "stop")
        assert session.state == Ended()
        with pytest.raises(SessionEndedError):
            manager.handle(session, "hello")

    def test_greeting_mid_search_does_not_disturb_state(self, manager):
        session = new_session()
        session.state = AwaitingQuery()
        drive(manager, session, ["tell me about martin luther king", "yes"])
        reply = manager.handle(session, "thank you")
        assert session.state == ResultList(query="martin luther king", page=0)
        assert isinstance(reply.screen, Results)  # screen keeps the results view
        assert reply.turn_outcome == OUTCOME_ANSWERED


class TestFailureHandling:
    def test_backend_failure_is_a_failed_turn_not_a_crash(self, make_manager):
        manager = make_manager(backend=FlakyBackend())
        session = new_session()
        session.state = AwaitingQuery()
        manager.handle(session, "tell me about anything at all")
        reply = manager.handle(session, "yes")
        assert reply.turn_outcome == OUTCOME_FAILED
        assert reply.speech == APOLOGY_SPEECH
        assert session.state == AwaitingConfirmation(pending_query="anything at all")

    def test_every_turn_appends_exactly_one_record(self, manager):
        session = new_session()
        script = ["hello", "tell me about martin luther king", "yes",
                  "open 9", "Open 1", "nonsense mumble", "stop"]
        for k, utterance in enumerate(script, start=1):
            manager.handle(session, utterance)
            assert len(session.turns) == k
        assert session.turns[3].outcome == OUTCOME_FAILED  # open 9 out of range


class TestDeterminism:
    def test_replay_yields_identical_states_and_screens(self, make_manager):
        from explora.session import screen_to_json, state_to_json

        script = [
            "hello", "tell me about martin luther king", "yes",
            "No, show me more results", "Open 2", "Open 1", "go back", "stop",
        ]

        def run():
            manager = make_manager()
            session = new_session()
            trace = []
            for utterance in script:
                reply = manager.handle(session, utterance)
                trace.append((state_to_json(session.state), screen_to_json(reply.screen),
                              reply.speech, reply.turn_outcome))
            return trace

        assert run() == run()


def test_flatten_sections_preorder(fixture_backend):
    doc = fixture_backend.fetch_document("Martin Luther King Jr.")
    flat = flatten_sections(doc.sections)
    assert [path[-1] for path, _ in flat] == [
        "Early life", "Education", "Family",
        "Civil rights movement", "Montgomery bus boycott", "March on Washington",
        "Assassination", "Legacy",
    ]
    section = section_at(doc, ("Civil rights movement", "March on Washington"))
    assert section.heading == "March on Washington"
