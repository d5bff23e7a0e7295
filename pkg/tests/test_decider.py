import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellang.automata import (
    Alphabet,
    Dfa,
    is_equivalent,
    is_subset,
    iter_words,
    minimal_dfa,
    minimize,
    transition_monoid,
)
from cellang.decider import (
    L1Report,
    OPath,
    Reason,
    Verdict,
    brute_force_L1,
    brute_force_L2,
    build_L_oq,
    check_L1,
    check_L2_for,
    check_L3,
    check_L4,
    decide_cellularity,
    in_L_oq,
    is_degenerate,
    o_paths,
    reachable_o_paths,
    subset_union_dfa,
    verify_decision,
    verify_witness,
)
from cellang.errors import EmptyFamily
from cellang.regex import parse_regex, regex_to_nfa

from strategies import A_OR_B, AB, EMPTY, NOBB, UNIVERSAL, dfas

AB_STAR_PAIRS = minimal_dfa(regex_to_nfa("(ab)*", AB))
EPS_OR_A = Dfa(Alphabet(("a",)), 3, 0, {0, 1}, [[1], [2], [2]])


def factorial_dfas(max_states=4):
    return dfas(max_states=max_states, sink=True).map(minimize).filter(
        lambda m: check_L1(m).passed and not is_degenerate(m)
    )


class TestL1:
    def test_no_bb_passes(self):
        assert check_L1(NOBB).passed

    def test_ab_star_fails(self):
        assert check_L1(AB_STAR_PAIRS) == L1Report(False, "a", "b")

    def test_universal_passes(self):
        assert check_L1(UNIVERSAL).passed

    def test_suffix_violation(self):
        # prefix-closed but "b" is a suffix of "ab" outside L
        m = minimal_dfa(regex_to_nfa("_|ab*", AB))
        assert check_L1(m) == L1Report(False, "a", "b")

    def test_brute_force(self):
        assert brute_force_L1(NOBB, 8).passed
        assert brute_force_L1(AB_STAR_PAIRS, 2) == L1Report(False, "a", "b")
        assert brute_force_L1(EMPTY, 4).passed

    @settings(max_examples=200, deadline=None)
    @given(dfas(max_states=5))
    def test_oracle_agreement(self, d):
        m = minimize(d)
        assert check_L1(m).passed == brute_force_L1(m, 2 * m.state_count + 2).passed


class TestOPaths:
    def test_no_bb(self):
        assert o_paths(NOBB, "a") == [OPath(0, (0,)), OPath(1, (1, 0))]
        assert o_paths(NOBB, "b") == []
        assert o_paths(UNIVERSAL, "a") == [OPath(0, (0,))]

    def test_reachable(self):
        assert reachable_o_paths(NOBB, "a", 0) == o_paths(NOBB, "a")
        assert reachable_o_paths(NOBB, "a", 1) == o_paths(NOBB, "a")
        assert reachable_o_paths(A_OR_B, "a", 2) == []
        assert [P.start for P in o_paths(A_OR_B, "a")] == [0, 1]

    @settings(max_examples=100, deadline=None)
    @given(dfas(max_states=6), st.sampled_from("ab"))
    def test_count_bound(self, d, o):
        m = minimize(d)
        assert len(o_paths(m, o)) <= m.state_count


class TestLoq:
    def test_no_bb(self):
        lang = build_L_oq(NOBB, "a", 0, transition_monoid(NOBB))
        assert frozenset({0}) in lang.family
        assert is_equivalent(subset_union_dfa(lang), NOBB)

    def test_empty_family(self):
        with pytest.raises(EmptyFamily):
            build_L_oq(A_OR_B, "a", 2, transition_monoid(A_OR_B))

    def test_universal(self):
        lang = build_L_oq(UNIVERSAL, "b", 0, transition_monoid(UNIVERSAL))
        assert lang.family == {frozenset({0})}
        assert is_equivalent(subset_union_dfa(lang), UNIVERSAL)

    @settings(max_examples=100, deadline=None)
    @given(factorial_dfas(), st.sampled_from("ab"), st.data())
    def test_construction_matches_definition(self, m, o, data):
        monoid = transition_monoid(m)
        q = data.draw(st.sampled_from(sorted(m.accepting)))
        try:
            lang = build_L_oq(m, o, q, monoid)
        except EmptyFamily:
            assert not any(in_L_oq(m, o, q, y, monoid) for y in iter_words(AB, 4))
            return
        assert is_subset(subset_union_dfa(lang), m) is None
        for y in iter_words(AB, 5):
            assert lang.accepts(y) == in_L_oq(m, o, q, y, monoid)


class TestL2:
    def test_no_bb(self):
        monoid = transition_monoid(NOBB)
        assert check_L2_for(NOBB, "a", monoid).passed
        r = check_L2_for(NOBB, "b", monoid)
        assert not r.passed and r.reason == "no-o-paths"

    def test_a_or_b(self):
        monoid = transition_monoid(A_OR_B)
        for o, y in (("a", "b"), ("b", "a")):
            r = check_L2_for(A_OR_B, o, monoid)
            assert not r.passed
            assert (r.state, r.x, r.y) == (0, "", y)
            assert A_OR_B.accepts(r.y) and not in_L_oq(A_OR_B, o, r.state, r.y, monoid)

    def test_brute_force(self):
        assert brute_force_L2(NOBB, "a", 3).passed
        r = brute_force_L2(A_OR_B, "a", 3)
        assert not r.passed and (r.state, r.y) == (0, "b")
        assert brute_force_L2(UNIVERSAL, "a", 3).passed
        assert brute_force_L2(UNIVERSAL, "b", 0).passed

    @settings(max_examples=150, deadline=None)
    @given(factorial_dfas(), st.sampled_from("ab"))
    def test_oracle_agreement(self, m, o):
        monoid = transition_monoid(m)
        assert check_L2_for(m, o, monoid).passed == brute_force_L2(m, o, m.state_count + 2).passed


class TestL3L4:
    def test_l3(self):
        assert check_L3(NOBB).passed
        r = check_L3(A_OR_B)
        assert (r.passed, r.x, r.y) == (False, "a", "b")
        assert check_L3(UNIVERSAL).passed

    def test_l4(self):
        assert check_L4(NOBB).passed
        assert check_L4(UNIVERSAL).passed
        r = check_L4(EPS_OR_A)
        assert not r.passed
        # the empty word is the least word of L that cannot be extended on both sides
        assert r.u == ""

    @settings(max_examples=100, deadline=None)
    @given(factorial_dfas())
    def test_l2_implies_l3_l4(self, m):
        monoid = transition_monoid(m)
        if any(check_L2_for(m, o, monoid).passed for o in AB):
            assert check_L3(m).passed
            assert check_L4(m).passed


class TestDecide:
    def decide(self, text):
        return decide_cellularity(parse_regex(text, AB))

    def test_universal(self):
        d = self.decide("(a|b)*")
        assert d.verdict is Verdict.CELLULAR and d.letter == "a"

    def test_no_bb(self):
        d = self.decide("a*(baa*)*(b|_)")
        assert d.verdict is Verdict.CELLULAR and d.letter == "a"
        assert d.dfa == NOBB
        assert verify_witness(NOBB, "a", d.witness)

    def test_a_or_b(self):
        d = self.decide("a*|b*")
        assert d.verdict is Verdict.NOT_CELLULAR and d.reason is Reason.L2
        assert [r.letter for r in d.l2] == ["a", "b"]

    def test_ab_star(self):
        d = self.decide("(ab)*")
        assert d.reason is Reason.L1 and (d.l1.x, d.l1.y) == ("a", "b")

    @pytest.mark.parametrize("text", ["_", "__*", "(_)*"])
    def test_degenerate(self, text):
        assert self.decide(text).reason is Reason.EMPTY_OR_EPSILON_ONLY

    def test_empty_language(self):
        d = decide_cellularity(EMPTY)
        assert d.reason is Reason.EMPTY_OR_EPSILON_ONLY

    def test_cap_gives_undecided(self):
        d = decide_cellularity(NOBB, monoid_cap=3)
        assert d.verdict is Verdict.UNDECIDED and d.reason is Reason.CAP_EXCEEDED

    def test_jobs_do_not_change_output(self):
        for text in ["a*|b*", "a*(baa*)*(b|_)", "b*(abb*)*(a|_)"]:
            m = self.decide(text).dfa
            assert decide_cellularity(m, jobs=2) == decide_cellularity(m)

    @settings(max_examples=150, deadline=None)
    @given(dfas(max_states=5))
    def test_certificates_verify(self, d):
        decision = decide_cellularity(d)
        assert verify_decision(decision) == []

    @settings(max_examples=100, deadline=None)
    @given(dfas(max_states=4))
    def test_unused_letter_keeps_verdict(self, d):
        wide = d.with_alphabet(Alphabet(("a", "b", "c")))
        assert decide_cellularity(wide).verdict == decide_cellularity(d).verdict
