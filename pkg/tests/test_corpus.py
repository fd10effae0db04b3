from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efsolve.corpus import (
    UnknownGame,
    bos_outside_option,
    corpus_entry,
    corpus_ids,
    corpus_list,
    corpus_load,
    export,
    observations_path,
)
from efsolve.game import Game, PreconditionError, validate_game
from efsolve.render import parse_cell
from efsolve.solvers import CONCEPTS, solve, strong_level_k

EXPECTED_IDS = {
    "reny", "hms", "centipede", "bos1", "bos2", "bos3", "hms2", "hms3",
    "cooper", "bn", "er", "matching-pennies-variant",
}


def leaf_payoffs(game, path):
    node = game.nodes["r." + ".".join(path)] if path else game.nodes["r"]
    return dict(node.payoffs)


def test_ids_and_captions():
    assert set(corpus_ids()) == EXPECTED_IDS
    for e in corpus_list():
        g = e.load()
        assert e.caption and g.caption == e.caption
        assert not validate_game(g), e.id


def test_unknown_id():
    with pytest.raises(UnknownGame, match="unknown game 'nope'"):
        corpus_load("nope")


def test_expected_tables_parse():
    for e in corpus_list():
        g = e.load()
        for table in e.expected.values():
            assert table.concept in CONCEPTS
            for row in table.sets(g):
                assert set(row) == set(g.players)


def test_matching_pennies_matrix():
    g, e = corpus_load("matching-pennies-variant")
    nf = e.normal_form()
    assert nf.payoffs[(0, 0)] == (2, -1) and nf.payoffs[(0, 1)] == (-1, 2)
    assert nf.payoffs[(1, 0)] == (-1, 1) and nf.payoffs[(1, 1)] == (1, -1)
    assert dict(g.to_normal_form().payoffs) == dict(nf.payoffs)


def test_stated_payoffs():
    assert leaf_payoffs(corpus_load("bos1")[0], ["Out"])["1"] == 3
    assert leaf_payoffs(corpus_load("bos2")[0], ["Out"])["1"] == 2
    hms = corpus_load("hms")[0]
    assert leaf_payoffs(hms, ["C1", "C2", "o1"]) == {"1": 5, "2": -10}


def test_hms3_differs_from_hms2_only_at_b_e():
    a = corpus_load("hms2")[0].to_dict()
    b = corpus_load("hms3")[0].to_dict()
    diff = [
        (x["id"], x["payoffs"], y["payoffs"])
        for x, y in zip(a["nodes"], b["nodes"])
        if x.get("payoffs") != y.get("payoffs")
    ]
    assert diff == [("r.b.e", {"1": "1", "2": "2"}, {"1": "1", "2": "3"})]


def test_export(tmp_path):
    paths = export(tmp_path / "out")
    assert len(paths) == len(EXPECTED_IDS)
    for p in paths:
        g = Game.load(p)
        assert not validate_game(g)


def test_observation_files_exist():
    for name in ("cooper", "bn", "er"):
        assert observations_path(name).read_text().startswith("role,path,weight")


@settings(max_examples=60)
@given(st.fractions(min_value=Fraction(11, 10), max_value=5, max_denominator=20))
def test_bos_threshold(v):
    if v == Fraction(5, 2):
        return
    g = bos_outside_option(v)
    sol = strong_level_k(g, K=5)
    enter = parse_cell(g, "1", "(In,B)")
    stay = parse_cell(g, "1", "(Out,*)")
    for k in range(3, 6):
        assert sol.indices(k, "1") == (enter if v < Fraction(5, 2) else stay)


@pytest.mark.parametrize("gid", ["bos1", "bos2"])
@pytest.mark.parametrize("value", [-7, 0, 4, Fraction(9, 2)])
def test_player2_payoff_after_out_is_irrelevant(gid, value):
    g, _ = corpus_load(gid)
    h = g.with_payoffs({"r.Out": {"2": value}})
    for concept in CONCEPTS:
        try:
            a = solve(g, concept, 4)
        except PreconditionError:
            continue
        b = solve(h, concept, 4)
        assert [lv.sets for lv in a.levels] == [lv.sets for lv in b.levels], concept


def test_family_matches_bundled_files():
    for gid, v in (("bos1", 3), ("bos2", 2)):
        assert bos_outside_option(v).payoff_table == corpus_load(gid)[0].payoff_table


def test_roles():
    assert corpus_entry("cooper").roles == {"row": "1", "column": "2"}
