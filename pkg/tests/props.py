"""Checks for the structural propositions, shared by the property tests and
the acceptance gate.  Each returns a list of counterexample descriptions."""
from __future__ import annotations

from efsolve.beliefs import Belief, exists_rationalizing_belief
from efsolve.game import Game
from efsolve.solvers import (
    backward_level_k,
    normal_form_level_k,
    opponent_product,
    rationalizability,
    strong_level_k,
)


def _outcomes(game: Game, sol, k: int):
    return game.outcomes({p: sol.strategies(k, p) for p in game.players})


def nf_level_k_inside_rationalizability(game: Game, beliefs: dict[str, Belief], K: int = 5) -> list[str]:
    lk = normal_form_level_k(game, beliefs, K)
    rat = rationalizability(game, K)
    bad = []
    for k in range(1, K + 1):
        for p in game.players:
            if not set(lk.indices(k, p)) <= set(rat.indices(k, p)):
                bad.append(f"L^{k}_{p} not inside R^{k}_{p}")
    return bad


def rationalizable_are_level_one(game: Game, K: int = 8) -> list[str]:
    rat = rationalizability(game, K)
    nf = game.normal_form_game
    final = rat.level(K).sets
    bad = []
    for p in game.players:
        iid = nf.player_infosets[p][0]
        for n in final[p]:
            s = nf.strategies(p)[n]
            b = exists_rationalizing_belief(nf, s, iid, opponent_product(nf, p, final))
            if b is None:
                bad.append(f"no witness for {s.label}")
                continue
            beliefs = {q: Belief.uniform(nf.opponent_profiles(q)) for q in game.players}
            beliefs[p] = b
            if n not in normal_form_level_k(nf, beliefs, 1).indices(1, p):
                bad.append(f"{s.label} not level-1 under its own witness")
    return bad


def first_levels_agree(game: Game, nf_beliefs, systems) -> list[str]:
    ef = strong_level_k(game, systems, 1)
    nf = normal_form_level_k(game, nf_beliefs, 1)
    return [f"level-1 sets differ for {p}" for p in game.players if ef.indices(1, p) != nf.indices(1, p)]


def strong_refines_outcomes(game: Game, nf_beliefs, systems, K: int = 5) -> list[str]:
    ef = strong_level_k(game, systems, K)
    nf = normal_form_level_k(game, nf_beliefs, K)
    return [
        f"Z(strong L^{k}) not inside Z(L^{k})"
        for k in range(1, K + 1)
        if not _outcomes(game, ef, k).issubset(_outcomes(game, nf, k))
    ]


def backward_level_one_outcomes(game: Game, systems) -> list[str]:
    strong = strong_level_k(game, systems, 1)
    back = backward_level_k(game, systems, 1)
    if _outcomes(game, strong, 1).terminals != _outcomes(game, back, 1).terminals:
        return ["level-1 outcomes differ"]
    return []
