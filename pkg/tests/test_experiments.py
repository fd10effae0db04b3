import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efsolve.corpus import corpus_load, observations_path
from efsolve.experiments import (
    COUNT,
    ObservationError,
    ObservationSet,
    Record,
    classify,
    consistent_share,
    format_percent,
    load_observations,
    parse_observations,
    synthesize,
)
from efsolve.solvers import normal_form_level_k, solve, strong_level_k, strong_rationalizability

from gen import random_tree


def cooper():
    return corpus_load("cooper")


def load(name):
    g, entry = corpus_load(name)
    return g, load_observations(io.StringIO(observations_path(name).read_text()), g, game_id=name, roles=entry.roles)


def column(table, concept, role, decimals=0):
    return [table.percent(concept, k, role, decimals) for k in table.levels(concept)]


def test_parse_minimal():
    g, entry = cooper()
    obs = parse_observations("role,path,weight\nrow,O,49/50\nrow,In/2,1/50\n", g, roles=entry.roles)
    assert obs.records[0].weight == Fraction(49, 50)
    assert obs.roles == {"row": "1"}


def test_unknown_label_names_it():
    g, entry = cooper()
    with pytest.raises(ObservationError, match="unknown action 'Up'"):
        parse_observations("role,path,weight\nrow,Up,1\n", g, roles=entry.roles)


@pytest.mark.parametrize("text, message", [
    ("who,what,weight\n", "header"),
    ("role,path,weight\nrow,O,1/2\n", "sum to 1/2"),
    ("role,path,weight\nrow,O,-1\nrow,In/2,2\n", "negative"),
    ("role,path,weight\nrow,O,abc\n", "bad weight"),
    ("role,path,weight\nrow,2/In,1\n", "not a possible path"),
    ("role,path,weight\nreferee,O,1\n", "unknown role"),
    ("role,path,weight\nrow,O\n", "3 fields"),
])
def test_malformed(text, message):
    g, entry = cooper()
    with pytest.raises(ObservationError, match=message):
        parse_observations(text, g, roles=entry.roles)


def test_counts_need_not_sum_to_one():
    g, entry = cooper()
    obs = parse_observations("role,path,weight\nrow,O,30\nrow,In/2,10\n", g, roles=entry.roles, kind=COUNT)
    assert consistent_share(g, obs, "row", [0, 1]) == Fraction(3, 4)  # (O,1) and (O,2)


def test_comments_and_csv_round_trip():
    g, entry = cooper()
    text = "# derived\nrole,path,weight\nrow,O,49/50\nrow,In/2,1/50\n"
    obs = parse_observations(text, g, roles=entry.roles)
    again = parse_observations(obs.to_csv(), g, roles=entry.roles)
    assert again.records == obs.records


def test_format_percent_rounds_half_up():
    assert format_percent(Fraction(11, 500)) == "2%"
    assert format_percent(Fraction(451, 500), 1) == "90.2%"
    assert format_percent(Fraction(1, 8)) == "13%"
    assert format_percent(Fraction(1, 200), 1) == "0.5%"


def test_cooper_strong_level_k():
    g, obs = load("cooper")
    table = classify(obs, strong_level_k(g, K=4))
    assert column(table, "strong-level-k", "row") == ["98%", "20%", "78%", "78%"]
    assert column(table, "strong-level-k", "column") == ["8%", "92%", "92%", "92%"]


def test_cooper_strong_rationalizability():
    g, obs = load("cooper")
    table = classify(obs, strong_rationalizability(g, K=4))
    assert column(table, "strong-rationalizability", "row") == ["98%", "98%", "78%", "78%"]
    assert column(table, "strong-rationalizability", "column") == ["100%", "92%", "92%", "92%"]


def test_bn():
    g, obs = load("bn")
    table = classify(obs, strong_level_k(g, K=3)).merge(classify(obs, strong_rationalizability(g, K=3)))
    assert column(table, "strong-level-k", "1") == ["88%"] * 3
    assert column(table, "strong-level-k", "2") == ["43%"] * 3
    assert column(table, "strong-rationalizability", "1", 1) == ["90.2%", "90.2%", "2.2%"]
    assert column(table, "strong-rationalizability", "1") == ["90%", "90%", "2%"]
    assert column(table, "strong-rationalizability", "2") == ["100%", "57%", "57%"]


def test_er():
    g, obs = load("er")
    table = classify(obs, strong_level_k(g, K=3)).merge(classify(obs, strong_rationalizability(g, K=3)))
    assert column(table, "strong-level-k", "1") == ["62%"] * 3
    assert column(table, "strong-level-k", "2") == ["22%"] * 3
    assert column(table, "strong-rationalizability", "1") == ["98%", "98%", "36%"]
    assert column(table, "strong-rationalizability", "2") == ["100%", "78%", "78%"]


def test_full_prediction_is_everything():
    g, obs = load("bn")
    for role in obs.role_labels():
        player = obs.roles[role]
        assert consistent_share(g, obs, role, range(len(g.strategies(player)))) == 1


def test_game_mismatch():
    g, obs = load("bn")
    with pytest.raises(ObservationError):
        classify(obs, strong_level_k(g, K=1), game_id="er")


def test_render_formats():
    g, obs = load("er")
    table = classify(obs, strong_level_k(g, K=2))
    assert table.render("csv").splitlines()[0] == "level,strong-level-k:1,strong-level-k:2"
    assert '"share": "31/50"' in table.render("json")


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_monotone_and_round_trip(rng):
    g = random_tree(rng)
    for p in g.players:
        n = len(g.strategies(p))
        small = sorted(rng.sample(range(n), rng.randint(1, n)))
        big = sorted(set(small) | set(rng.sample(range(n), rng.randint(0, n))))
        records = synthesize(g, p, small, role=p)
        if not records:  # the player never moves
            continue
        obs = ObservationSet("t", records, {p: p})
        assert consistent_share(g, obs, p, small) == 1
        # arbitrary weights over all of the player's paths
        everything = [Record(p, r.path, Fraction(rng.randint(0, 9))) for r in synthesize(g, p, range(n))]
        data = ObservationSet("t", everything, {p: p}, kind=COUNT)
        assert consistent_share(g, data, p, small) <= consistent_share(g, data, p, big)
