import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efsolve.build import build, chance, leaf, move, simultaneous
from efsolve.game import (
    CapacityError,
    Game,
    GameFormatError,
    format_rational,
    parse_rational,
    validate_game,
)

from gen import random_tree


def centipede():
    return build(
        ["1", "2"],
        move("1", {
            "O1": leaf(4, 1),
            "C1": move("2", {
                "O2": leaf(2, 8),
                "C2": move("1", {"o1": leaf(16, 4), "c1": move("2", {"o2": leaf(8, 32), "c2": leaf(64, 16)})}),
            }),
        }),
    )


def bos_with_outside():
    sub = simultaneous(["1", "2"], {("B", "B"): leaf(5, 1), ("B", "S"): leaf(0, 0), ("S", "B"): leaf(0, 0), ("S", "S"): leaf(1, 5)})
    return build(["1", "2"], move("1", {"Out": leaf(3, 0), "In": sub}))


def test_rationals_round_trip():
    for text in ["3", "-10", "5/2", "-7/3"]:
        v = parse_rational(text)
        assert parse_rational(format_rational(v)) == v
    assert parse_rational("6/4") == Fraction(3, 2)
    # floats and decimal strings are not exact enough for threshold games
    for bad in ["0.25", 0.5, "1/0", "x"]:
        with pytest.raises(GameFormatError):
            parse_rational(bad)


def test_strategies_canonical_order():
    g = centipede()
    assert [s.label for s in g.strategies("1")] == ["(O1, o1)", "(O1, c1)", "(C1, o1)", "(C1, c1)"]
    assert g.player_infosets["1"] == ("1@r", "1@r.C1.C2")


def test_outcome_and_payoffs():
    g = centipede()
    s1 = g.strategy("1", "C1", "o1")
    s2 = g.strategy("2", "C2", "c2")
    out = g.outcome({"1": s1, "2": s2})
    assert list(out) == ["r.C1.C2.o1"]
    assert out.utilities["r.C1.C2.o1"] == {"1": 16, "2": 4}
    with pytest.raises(ValueError):
        g.outcome({"1": s1})


def test_outcomes_monotone_in_sets():
    g = centipede()
    small = g.outcomes({"1": g.strategies("1")[:1], "2": g.strategies("2")[:1]})
    big = g.outcomes({"1": g.strategies("1"), "2": g.strategies("2")[:1]})
    assert small.issubset(big)


def test_json_round_trip(tmp_path):
    g = bos_with_outside()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g.to_dict()))
    h = Game.load(path)
    assert h.to_dict() == g.to_dict()
    assert h.payoff_table == g.payoff_table


def test_singleton_infosets_are_filled_in():
    doc = {
        "players": ["1"],
        "root": "r",
        "nodes": [
            {"id": "r", "kind": "decision", "movers": ["1"], "actions": [
                {"profile": {"1": "a"}, "child": "x"}, {"profile": {"1": "b"}, "child": "y"}]},
            {"id": "x", "kind": "terminal", "payoffs": {"1": "1"}},
            {"id": "y", "kind": "terminal", "payoffs": {"1": "0"}},
        ],
    }
    g = Game.from_dict(doc)
    assert list(g.info_sets) == ["1@r"]
    assert not validate_game(g)


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.pop("root"), "lacks 'root'"),
    (lambda d: d.update(extra=1), "unknown fields"),
    (lambda d: d.update(root="nowhere"), "not a node"),
    (lambda d: d["nodes"].append(dict(d["nodes"][1])), "duplicate node"),
])
def test_format_errors(mutate, message):
    doc = bos_with_outside().to_dict()
    mutate(doc)
    with pytest.raises(GameFormatError, match=message):
        Game.from_dict(doc)


def test_validation_catches_bad_infoset_and_recall():
    # player 2 told apart nodes with different action sets
    g = build(["1", "2"], move("1", {
        "a": move("2", {"x": leaf(0, 0), "y": leaf(0, 0)}, infoset="H"),
        "b": move("2", {"x": leaf(0, 0), "z": leaf(0, 0)}, infoset="H"),
    }))
    assert [v.kind for v in validate_game(g)] == ["infoset"]
    # player 1 forgets her own first move
    forgetful = build(["1", "2"], move("1", {
        "a": move("1", {"x": leaf(0, 0), "y": leaf(0, 0)}, infoset="K"),
        "b": move("1", {"x": leaf(0, 0), "y": leaf(0, 0)}, infoset="K"),
    }))
    assert [v.kind for v in validate_game(forgetful)] == ["perfect-recall"]


def test_chance_validation():
    good = build(["1"], chance({"h": ("1/3", leaf(1)), "t": ("2/3", leaf(0))}))
    assert not validate_game(good)
    bad = build(["1"], chance({"h": ("1/2", leaf(1)), "t": ("1/3", leaf(0))}))
    assert validate_game(bad)[0].kind == "chance"


def test_strategy_cap():
    g = build(["1", "2"], move("1", {f"a{k}": move("2", {"l": leaf(0, 0), "r": leaf(1, 1)}) for k in range(12)}))
    capped = Game.from_dict(g.to_dict(), strategy_cap=100)
    with pytest.raises(CapacityError):
        capped.strategies("2")


def test_weakly_follows_and_bracket():
    g = centipede()
    first, second = g.player_infosets["2"]
    p1_second = g.player_infosets["1"][1]
    assert g.weakly_follows(p1_second, first)
    assert not g.weakly_follows(first, p1_second)
    # continuation of player 1 from player 2's first node is the second move only
    out1 = g.strategies("1")[1]  # (O1, c1)
    assert g.continuation(out1, first) == {p1_second: "c1"}
    assert {s.label for s in g.bracket([g.strategy("1", "C1", "o1")], first)} == {"(O1, o1)", "(C1, o1)"}
    # no continuation for player 1 after player 2's last node: bracket is everything
    assert len(g.bracket([g.strategy("1", "C1", "o1")], second)) == 4


def test_simultaneous_movers_belong_to_each_others_continuation():
    g = bos_with_outside()
    i1 = g.player_infosets["1"][1]
    (i2,) = g.player_infosets["2"]
    assert g.weakly_follows(i1, i2) and g.weakly_follows(i2, i1)


def test_normal_form_matches_tree():
    g = bos_with_outside()
    nf = g.to_normal_form()
    for profile, vec in nf.payoffs.items():
        assert vec == g.payoff_table[profile]


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_random_trees_validate_and_outcomes_total(rng):
    g = random_tree(rng)
    assert not validate_game(g)
    for profile in g.profiles:
        dist = g.terminal_distribution(profile)
        assert sum(p for _, p in dist) == 1


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_outcome_set_monotone(rng):
    g = random_tree(rng)
    sub = {p: [s for s in g.strategies(p) if rng.random() < 0.5] or [g.strategies(p)[0]] for p in g.players}
    sup = {p: list({*sub[p], *[s for s in g.strategies(p) if rng.random() < 0.5]}) for p in g.players}
    assert g.outcomes(sub).issubset(g.outcomes(sup))


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_bracket_contains_set_and_is_nonempty(rng):
    g = random_tree(rng)
    for p in g.players:
        n = len(g.strategies(p))
        chosen = sorted(rng.sample(range(n), rng.randint(0, n)))
        for iid in g.info_sets:
            br = g.bracket_indices(p, chosen, iid)
            assert br
            assert set(chosen) <= set(br)


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_normal_form_matches_tree_on_random_games(rng):
    g = random_tree(rng)
    nf = g.to_normal_form()
    nfg = g.normal_form_game
    for profile in g.profiles:
        expected = tuple(
            sum((p * dict(g.nodes[z].payoffs)[pl] for z, p in g.terminal_distribution(profile)), Fraction(0))
            for pl in g.players
        )
        assert nf.payoffs[profile] == expected == nfg.payoff_table[profile]


def test_random_tree_helper_is_deterministic():
    a = random_tree(random.Random(5)).to_dict()
    b = random_tree(random.Random(5)).to_dict()
    assert a == b
