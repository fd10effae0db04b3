import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efsolve.beliefs import Belief
from efsolve.build import build, leaf, move
from efsolve.corpus import corpus_ids, corpus_load
from efsolve.game import NormalForm, PreconditionError
from efsolve.render import format_set, parse_cell
from efsolve.solvers import (
    CONCEPTS,
    LevelSolution,
    backward_induction_k,
    backward_level_k,
    backward_rationalizability,
    delta_rationalizability,
    detect_cycle,
    iterated_admissibility,
    iterated_strict_dominance,
    normal_form_level_k,
    prudent_rationalizability,
    rationalizability,
    solve,
    strong_level_k,
    strong_rationalizability,
    witnesses,
)

from gen import random_matrix, random_tree


def expect(sol, k, *texts):
    g = sol.game
    for p, text in zip(g.players, texts):
        assert sol.indices(k, p) == parse_cell(g, p, text), (sol.concept, k, p, format_set(g, p, sol.indices(k, p)))


def mp():
    return corpus_load("matching-pennies-variant")[0]


def test_example_one_cycle():
    sol = normal_form_level_k(mp(), K=9)
    assert [tuple(sol.labels(k, p)[0] for p in "12") for k in range(1, 6)] == [
        ("U", "R"), ("D", "R"), ("D", "L"), ("U", "L"), ("U", "R")]
    assert sol.cycle == (1, 4)


def test_point_mass_first_level():
    g = mp()
    sol = normal_form_level_k(g, {"1": Belief.point((0,)), "2": Belief.point((1,))}, K=1)
    # against L player 1 takes U; against D player 2 takes L
    assert sol.labels(1, "1") == ["U"] and sol.labels(1, "2") == ["L"]


def test_accepts_matrix_input():
    entry = corpus_load("matching-pennies-variant")[1]
    a = normal_form_level_k(entry.normal_form(), K=5)
    b = normal_form_level_k(mp(), K=5)
    assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels]


def test_rationalizability_examples():
    sol = rationalizability(mp(), K=4)
    assert all(len(sol.indices(k, p)) == 2 for k in range(1, 5) for p in "12")
    dominant = NormalForm.from_matrix(["a", "b"], ["x", "y"], [[(3, 3), (2, 1)], [(1, 2), (0, 0)]])
    sol = rationalizability(dominant, K=3)
    assert sol.labels(1, "1") == ["a"] and sol.labels(1, "2") == ["x"]
    assert sol.fixed_point == 1


def test_prop_one_on_reny():
    g, _ = corpus_load("reny")
    lk, rat = normal_form_level_k(g, K=5), rationalizability(g, K=5)
    for k in range(1, 6):
        for p in g.players:
            assert set(lk.indices(k, p)) <= set(rat.indices(k, p))


def test_nf_level_k_reny():
    sol = normal_form_level_k(corpus_load("reny")[0], K=2)
    expect(sol, 2, "{(O1,*)}", "S_2")


def test_strong_level_k_examples():
    sol = strong_level_k(corpus_load("reny")[0], K=5)
    for k in range(1, 6):
        expect(sol, k, "{(O1,*)}", "{(C2,o2)}")
    sol = strong_level_k(corpus_load("bos2")[0], K=3)
    expect(sol, 1, "(In,B)", "S")
    expect(sol, 2, "(Out,*)", "B")
    expect(sol, 3, "(In,B)", "B")
    expect(strong_level_k(corpus_load("hms")[0], K=2), 2, "{(O1,*),(C1,c1)}", "{(C2,*)}")


def test_strong_rationalizability_examples():
    g, _ = corpus_load("bos1")
    for method in ("dominance", "beliefs"):
        sol = strong_rationalizability(g, K=3, method=method)
        expect(sol, 1, "{(Out,*),(In,B)}", "{B,S}")
        expect(sol, 2, "{(Out,*),(In,B)}", "B")
        expect(sol, 3, "(In,B)", "B")
    sol = strong_rationalizability(corpus_load("reny")[0], K=2)
    assert format_set(sol.game, "2", sol.indices(2, "2")) == "{(C2, o2)}"


def test_methods_agree_on_corpus():
    for gid in corpus_ids():
        g, _ = corpus_load(gid)
        a = strong_rationalizability(g, K=4, method="dominance")
        b = strong_rationalizability(g, K=4, method="beliefs")
        assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels], gid


def test_delta_standard_empties():
    sol = delta_rationalizability(corpus_load("bos3")[0], K=3)
    expect(sol, 1, "(In,B)", "S")
    assert sol.level(2).empty and sol.level(3).empty
    assert sol.indices(2, "1") == () and sol.indices(3, "2") == ()


def test_delta_modified_is_nested():
    sol = delta_rationalizability(corpus_load("bos3")[0], K=4, variant="modified")
    expect(sol, 1, "(In,B)", "S")
    for k in range(2, 5):
        for p in "12":
            assert set(sol.indices(k, p)) <= set(sol.indices(k - 1, p))


def test_iterated_admissibility_examples():
    sol = iterated_admissibility(corpus_load("bos1")[0], K=4)
    expect(sol, 4, "(In,B)", "B")
    strictly = NormalForm.from_matrix(["a", "b"], ["x"], [[(1, 0)], [(0, 0)]])
    assert iterated_admissibility(strictly, K=1).labels(1, "1") == ["a"]


def test_prudent_matches_ia_on_hms2_and_bos1():
    for gid in ("hms2", "hms3", "bos1"):
        g, _ = corpus_load(gid)
        a, b = prudent_rationalizability(g, K=4), iterated_admissibility(g, K=4)
        assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels], gid


def test_prudent_one_player():
    g = build(["1"], move("1", {"a": leaf(1), "b": leaf(3), "c": leaf(3)}))
    sol = prudent_rationalizability(g, K=3)
    assert sol.labels(1, "1") == ["b", "c"] == sol.labels(3, "1")


def test_backward_examples():
    g, _ = corpus_load("centipede")
    expect(backward_rationalizability(g, K=4), 4, "{(O1,o1)}", "{(O2,o2)}")
    sol = backward_level_k(corpus_load("bos3")[0], K=6)
    expect(sol, 1, "(In,B)", "S")
    expect(sol, 2, "(In,S)", "B")
    assert sol.cycle == (1, 2)


def test_backward_induction_examples():
    g, _ = corpus_load("centipede")
    sol = backward_induction_k(g, K=4)
    expect(sol, 1, "S_1", "{(O2,o2),(C2,o2)}")
    expect(sol, 4, "{(O1,o1)}", "{(O2,o2)}")
    tie = build(["1"], move("1", {"a": leaf(2), "b": leaf(2), "c": leaf(1)}))
    assert backward_induction_k(tie, K=1).labels(1, "1") == ["a", "b"]
    with pytest.raises(PreconditionError):
        backward_induction_k(corpus_load("bos1")[0])


def test_level_one_outcomes_agree_on_corpus():
    for gid in corpus_ids():
        g, _ = corpus_load(gid)
        s, b = strong_level_k(g, K=1), backward_level_k(g, K=1)
        z = lambda sol: g.outcomes({p: sol.strategies(1, p) for p in g.players}).terminals
        assert z(s) == z(b), gid


def test_detect_cycle():
    assert detect_cycle([1, 2, 3, 2, 3, 2]) == (2, 2)
    assert detect_cycle([1, 1, 1]) == (1, 1)
    assert detect_cycle([1, 2, 3]) is None
    sol = strong_rationalizability(corpus_load("bos1")[0], K=5)
    assert sol.cycle == (sol.fixed_point, 1)


def test_bad_level_and_concept():
    g, _ = corpus_load("bos1")
    with pytest.raises(ValueError):
        strong_level_k(g, K=0)
    with pytest.raises(ValueError):
        solve(g, "nash")


def test_json_round_trip():
    g, _ = corpus_load("hms")
    for concept in CONCEPTS:
        try:
            sol = solve(g, concept, 3)
        except PreconditionError:
            continue
        back = LevelSolution.from_json(sol.to_json(), g)
        assert [lv.sets for lv in back.levels] == [lv.sets for lv in sol.levels]


def test_witnesses_are_sound():
    from efsolve.beliefs import is_rational_at, is_rational_everywhere, BeliefSystem

    g, _ = corpus_load("reny")
    sol = strong_level_k(g, K=3)
    for entry in witnesses(sol):
        for p, items in entry["witnesses"].items():
            for item in items:
                system = BeliefSystem.from_json(g, item["belief_system"])
                assert is_rational_everywhere(g, g.strategy_by_label(p, item["strategy"]), system)
    nf_sol = normal_form_level_k(g, K=3)
    nf = g.normal_form_game
    for entry in witnesses(nf_sol):
        for p, items in entry["witnesses"].items():
            for item in items:
                b = Belief.from_json(nf, p, item["belief"])
                s = nf.strategy_by_label(p, item["strategy"])
                assert is_rational_at(nf, s, nf.player_infosets[p][0], b)


NESTED_SOLVERS = [
    rationalizability,
    iterated_strict_dominance,
    iterated_admissibility,
    strong_rationalizability,
    prudent_rationalizability,
    backward_rationalizability,
    delta_rationalizability,
]


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_reduction_concepts_are_nested(rng):
    g = random_tree(rng)
    for fn in NESTED_SOLVERS:
        sol = fn(g, K=4)
        for k in range(2, 5):
            for p in g.players:
                assert set(sol.indices(k, p)) <= set(sol.indices(k - 1, p)), fn.__name__


@settings(max_examples=150)
@given(st.randoms(use_true_random=False))
def test_rationalizability_equals_iesds(rng):
    g = random_matrix(rng)
    a, b = rationalizability(g, K=5), iterated_strict_dominance(g, K=5)
    assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels]


@settings(max_examples=80)
@given(st.randoms(use_true_random=False))
def test_prudent_equals_ia(rng):
    g = random_matrix(rng) if rng.random() < 0.5 else random_tree(rng)
    a, b = prudent_rationalizability(g, K=4), iterated_admissibility(g, K=4)
    assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels]


@pytest.mark.parametrize("gid", ["bos1", "bos3", "matching-pennies-variant", "hms"])
def test_level_k_sequences_eventually_periodic(gid):
    g, _ = corpus_load(gid)
    bound = 12
    for concept in ("normal-form-level-k", "strong-level-k", "backward-level-k"):
        sol = solve(g, concept, bound)
        start, period = sol.cycle
        # the repeating tail is observed at least twice within the bound
        assert start + 2 * period <= bound + 1


def _rescale(game, player, a, b):
    return game.with_payoffs(
        {nid: {player: a * dict(n.payoffs)[player] + b} for nid, n in game.nodes.items() if n.is_terminal}
    )


@settings(max_examples=25)
@given(st.randoms(use_true_random=False), st.integers(1, 6), st.integers(-6, 6))
def test_solver_outputs_affine_invariant(rng, a, b):
    g = random_tree(rng)
    h = _rescale(g, rng.choice(g.players), a, b)
    for concept in CONCEPTS:
        try:
            x = solve(g, concept, 3)
        except PreconditionError:
            continue
        y = solve(h, concept, 3)
        assert [lv.sets for lv in x.levels] == [lv.sets for lv in y.levels], concept
