"""Level-indexed solution concepts.

Every solver returns a :class:`LevelSolution`: for each level ``k = 1..K``
and each player, the set of surviving (or level-k) strategies as indices in
the game's canonical strategy order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .beliefs import (
    CONDITIONAL_DOM,
    LOCAL,
    STRICT_DOM,
    WEAK_DOM,
    Belief,
    BeliefSystem,
    InfoSetSupport,
    Profile,
    SupportSpec,
    dominance_test,
    exists_belief_system,
    exists_rationalizing_belief,
    is_rational_at,
    uniform_system,
)
from .game import CHANCE, Game, NormalForm, PreconditionError, Strategy, game_from_normal_form

NF_LEVEL_K = "normal-form-level-k"
RATIONALIZABILITY = "rationalizability"
STRONG_LEVEL_K = "strong-level-k"
STRONG_RAT = "strong-rationalizability"
DELTA_RAT = "delta-rationalizability"
ITERATED_ADMISSIBILITY = "iterated-admissibility"
PRUDENT_RAT = "prudent-rationalizability"
BACKWARD_RAT = "backward-rationalizability"
BACKWARD_LEVEL_K = "backward-level-k"
BACKWARD_INDUCTION = "backward-induction"
IESDS = "iterated-strict-dominance"

CONCEPTS = (
    NF_LEVEL_K,
    RATIONALIZABILITY,
    STRONG_LEVEL_K,
    STRONG_RAT,
    DELTA_RAT,
    ITERATED_ADMISSIBILITY,
    PRUDENT_RAT,
    BACKWARD_RAT,
    BACKWARD_LEVEL_K,
    BACKWARD_INDUCTION,
    IESDS,
)

# concepts whose sets must shrink weakly from level to level
NESTED = frozenset(
    {RATIONALIZABILITY, STRONG_RAT, DELTA_RAT, ITERATED_ADMISSIBILITY, PRUDENT_RAT, BACKWARD_RAT, IESDS}
)

Sets = dict[str, tuple[int, ...]]


@dataclass
class Level:
    k: int
    sets: Sets
    specs: dict[str, SupportSpec] | None = None

    @property
    def empty(self) -> bool:
        return any(not v for v in self.sets.values())

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.sets[p] for p in sorted(self.sets))


@dataclass
class LevelSolution:
    concept: str
    game: Game
    levels: list[Level]
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def K(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> Level:
        if k < 1 or k > len(self.levels):
            raise IndexError(f"level {k} not computed")
        return self.levels[k - 1]

    def indices(self, k: int, player: str) -> tuple[int, ...]:
        return self.level(k).sets[player]

    def strategies(self, k: int, player: str) -> tuple[Strategy, ...]:
        strat = self.game.strategies(player)
        return tuple(strat[n] for n in self.indices(k, player))

    def labels(self, k: int, player: str) -> list[str]:
        return [s.label for s in self.strategies(k, player)]

    @property
    def cycle(self) -> tuple[int, int] | None:
        return detect_cycle(self)

    @property
    def fixed_point(self) -> int | None:
        for n in range(1, len(self.levels)):
            if self.levels[n].key() == self.levels[n - 1].key():
                return n
        return None

    def to_json(self) -> dict[str, Any]:
        cyc = self.cycle
        return {
            "concept": self.concept,
            "game": self.game.name,
            "params": {k: v for k, v in self.params.items() if isinstance(v, (str, int, float, bool))},
            "players": list(self.game.players),
            "levels": [
                {
                    "level": lv.k,
                    "empty": lv.empty,
                    "sets": {p: [s.label for s in self.strategies(lv.k, p)] for p in self.game.players},
                }
                for lv in self.levels
            ],
            "cycle": None if cyc is None else {"start": cyc[0], "period": cyc[1]},
        }

    @classmethod
    def from_json(cls, doc: Mapping[str, Any], game: Game) -> LevelSolution:
        levels = []
        for raw in doc["levels"]:
            sets = {
                p: tuple(sorted(game.strategy_index(game.strategy_by_label(p, lab)) for lab in raw["sets"][p]))
                for p in game.players
            }
            levels.append(Level(int(raw["level"]), sets))
        return cls(str(doc["concept"]), game, levels, dict(doc.get("params", {})))


def detect_cycle(solution: LevelSolution | Sequence[Any]) -> tuple[int, int] | None:
    """Earliest start ``s`` and minimal period ``p`` with ``L_j == L_{j+p}`` for all
    computed ``j >= s``.  Levels are 1-based."""
    if isinstance(solution, LevelSolution):
        seq = [lv.key() for lv in solution.levels]
    else:
        seq = list(solution)
    n = len(seq)
    for s in range(n):
        for p in range(1, n - s):
            if all(seq[j] == seq[j + p] for j in range(s, n - p)):
                return s + 1, p
    return None


# ----------------------------------------------------------------- helpers
def _check_k(K: int) -> None:
    if K < 1:
        raise ValueError("K must be at least 1")


def _all_sets(game: Game) -> Sets:
    return {p: tuple(range(len(game.strategies(p)))) for p in game.players}


def opponent_product(game: Game, player: str, sets: Sets) -> frozenset[Profile]:
    return frozenset(itertools.product(*(sets[o] for o in game.opponents(player))))


def _nf_game(game: Game | NormalForm) -> Game:
    if isinstance(game, NormalForm):
        return game_from_normal_form(game)
    return game.normal_form_game


def _solution(concept: str, game: Game, levels: list[Level], **params: Any) -> LevelSolution:
    return LevelSolution(concept, game, levels, params)


def _with_game(game: Game | NormalForm) -> Game:
    return game_from_normal_form(game) if isinstance(game, NormalForm) else game


def _root_infoset(nf: Game, player: str) -> str:
    return nf.player_infosets[player][0]


# ------------------------------------------------------- normal-form concepts
def normal_form_level_k(
    game: Game | NormalForm,
    beliefs: Mapping[str, Belief] | None = None,
    K: int = 4,
) -> LevelSolution:
    """Level-k thinking on the associated normal form.

    ``beliefs`` maps each player to a first-level belief over opponent
    profiles (uniform when omitted).
    """
    _check_k(K)
    base = _with_game(game)
    nf = _nf_game(game)
    levels: list[Level] = []
    prev: Sets | None = None
    for k in range(1, K + 1):
        sets = {}
        for p in nf.players:
            iid = _root_infoset(nf, p)
            keep = []
            for s in nf.strategies(p):
                if prev is None:
                    b = beliefs[p] if beliefs and p in beliefs else Belief.uniform(nf.opponent_profiles(p))
                    ok = is_rational_at(nf, s, iid, b)
                else:
                    ok = exists_rationalizing_belief(nf, s, iid, opponent_product(nf, p, prev)) is not None
                if ok:
                    keep.append(nf.strategy_index(s))
            sets[p] = tuple(keep)
        levels.append(Level(k, sets))
        prev = sets
    return _solution(NF_LEVEL_K, base, levels, beliefs="uniform" if not beliefs else "given", first_beliefs=beliefs)


def rationalizability(game: Game | NormalForm, K: int = 4) -> LevelSolution:
    """Iterated best replies to (correlated) beliefs over surviving opponent profiles."""
    _check_k(K)
    base = _with_game(game)
    nf = _nf_game(game)
    prev = _all_sets(nf)
    levels = []
    for k in range(1, K + 1):
        sets = {}
        for p in nf.players:
            iid = _root_infoset(nf, p)
            support = opponent_product(nf, p, prev)
            sets[p] = tuple(
                n
                for n in prev[p]
                if support and exists_rationalizing_belief(nf, nf.strategies(p)[n], iid, support) is not None
            )
        levels.append(Level(k, sets))
        prev = sets
    return _solution(RATIONALIZABILITY, base, levels)


def _iterated_dominance(game: Game | NormalForm, K: int, flavor: str, concept: str) -> LevelSolution:
    _check_k(K)
    base = _with_game(game)
    nf = _nf_game(game)
    prev = _all_sets(nf)
    levels = []
    for k in range(1, K + 1):
        sets = {}
        for p in nf.players:
            strat = nf.strategies(p)
            pool = [strat[n] for n in prev[p]]
            opps = opponent_product(nf, p, prev)
            sets[p] = tuple(
                n for n in prev[p] if dominance_test(nf, strat[n], pool, flavor, opponents=opps) is None
            )
        levels.append(Level(k, sets))
        prev = sets
    return _solution(concept, base, levels)


def iterated_strict_dominance(game: Game | NormalForm, K: int = 4) -> LevelSolution:
    """Simultaneous removal of strategies strictly dominated by mixtures over survivors."""
    return _iterated_dominance(game, K, STRICT_DOM, IESDS)


def iterated_admissibility(game: Game | NormalForm, K: int = 4) -> LevelSolution:
    """Simultaneous removal of weakly dominated strategies on the normal form."""
    return _iterated_dominance(game, K, WEAK_DOM, ITERATED_ADMISSIBILITY)


# ---------------------------------------------------- extensive-form concepts
def _first_systems(game: Game, beliefs: Mapping[str, BeliefSystem] | None) -> dict[str, BeliefSystem]:
    out = {}
    for p in game.players:
        out[p] = beliefs[p] if beliefs and p in beliefs else uniform_system(game, p)
    return out


def _fixed_spec(game: Game, player: str, system: BeliefSystem, continuation: bool = False) -> SupportSpec:
    return SupportSpec(
        {i: InfoSetSupport.fixed(system[i]) for i in game.player_infosets[player]}, continuation
    )


def _members(game: Game, player: str, spec: SupportSpec, mode: str, candidates: Iterable[int] | None = None) -> tuple[int, ...]:
    strat = game.strategies(player)
    pool = range(len(strat)) if candidates is None else candidates
    return tuple(n for n in pool if exists_belief_system(game, player, strat[n], spec, mode) is not None)


def _reaches(game: Game, player: str, profiles: frozenset[Profile], infoset: str) -> bool:
    return not profiles.isdisjoint(game.opponent_reach(player, infoset))


def strong_level_k(
    game: Game,
    beliefs: Mapping[str, BeliefSystem] | None = None,
    K: int = 4,
    mode: str = LOCAL,
) -> LevelSolution:
    """Strong level-k thinking.

    At each information set the level-k player puts probability one on the
    highest lower level of opponents that can still reach it, and falls back
    to the first-level belief there when none can.
    """
    _check_k(K)
    first = _first_systems(game, beliefs)
    levels: list[Level] = []
    history: list[Sets] = []
    for k in range(1, K + 1):
        sets, specs = {}, {}
        for p in game.players:
            if k == 1:
                spec = _fixed_spec(game, p, first[p])
            else:
                products = [opponent_product(game, p, h) for h in history]
                rules = {}
                for iid in game.player_infosets[p]:
                    best = next(
                        (prod for prod in reversed(products) if _reaches(game, p, prod, iid)),
                        None,
                    )
                    if best is None:
                        rules[iid] = InfoSetSupport.fixed(first[p][iid])
                    else:
                        rules[iid] = InfoSetSupport(best)
                spec = SupportSpec(rules)
            specs[p] = spec
            sets[p] = _members(game, p, spec, mode)
        levels.append(Level(k, sets, specs))
        history.append(sets)
    return _solution(STRONG_LEVEL_K, game, levels, mode=mode, beliefs="uniform" if not beliefs else "given")


def strong_rationalizability(
    game: Game,
    K: int = 4,
    method: str = "dominance",
    mode: str = LOCAL,
) -> LevelSolution:
    """Strong (extensive-form) rationalizability.

    ``method="dominance"`` runs iterated elimination of conditionally strictly
    dominated strategies; ``method="beliefs"`` checks the belief-system
    definition directly and serves as a cross-check.
    """
    _check_k(K)
    if method not in ("dominance", "beliefs"):
        raise ValueError(f"unknown method {method!r}")
    prev = _all_sets(game)
    history: list[Sets] = []
    levels = []
    for k in range(1, K + 1):
        sets, specs = {}, {}
        for p in game.players:
            strat = game.strategies(p)
            if method == "dominance":
                opps = opponent_product(game, p, prev)
                keep = []
                for n in prev[p]:
                    dominated = any(
                        n in game.own_reach(p, iid)
                        and _reaches(game, p, opps, iid)
                        and dominance_test(game, strat[n], None, CONDITIONAL_DOM, opponents=opps, info_set=iid)
                        is not None
                        for iid in game.player_infosets[p]
                    )
                    if not dominated:
                        keep.append(n)
                sets[p] = tuple(keep)
            else:
                products = [opponent_product(game, p, h) for h in history]
                rules = {}
                for iid in game.player_infosets[p]:
                    best = next((prod for prod in reversed(products) if _reaches(game, p, prod, iid)), None)
                    rules[iid] = InfoSetSupport(best)
                spec = SupportSpec(rules)
                specs[p] = spec
                sets[p] = _members(game, p, spec, mode)
        levels.append(Level(k, sets, specs or None))
        history.append(sets)
        prev = sets
    return _solution(STRONG_RAT, game, levels, method=method, mode=mode)


def prudent_rationalizability(game: Game, K: int = 4, mode: str = LOCAL) -> LevelSolution:
    """Strong rationalizability with cautious beliefs: full support on the
    surviving opponent profiles that reach each information set."""
    _check_k(K)
    prev = _all_sets(game)
    levels = []
    for k in range(1, K + 1):
        sets, specs = {}, {}
        for p in game.players:
            opps = opponent_product(game, p, prev)
            rules = {}
            for iid in game.player_infosets[p]:
                if _reaches(game, p, opps, iid):
                    rules[iid] = InfoSetSupport(opps, cautious=True)
                else:
                    rules[iid] = InfoSetSupport()
            spec = SupportSpec(rules)
            specs[p] = spec
            sets[p] = _members(game, p, spec, mode, prev[p])
        levels.append(Level(k, sets, specs))
        prev = sets
    return _solution(PRUDENT_RAT, game, levels, mode=mode)


def delta_rationalizability(
    game: Game,
    delta: Mapping[str, Sequence[BeliefSystem]] | None = None,
    K: int = 4,
    variant: str = "standard",
    mode: str = LOCAL,
) -> LevelSolution:
    """Strong rationalizability with first-order beliefs restricted to ``delta``.

    ``delta`` lists admissible belief systems per player (default: the uniform
    system only).  In the ``standard`` variant beliefs stay inside ``delta`` at
    every level; in the ``modified`` variant only level 1 is restricted.
    """
    _check_k(K)
    if variant not in ("standard", "modified"):
        raise ValueError(f"unknown variant {variant!r}")
    if delta is None:
        delta = {p: [uniform_system(game, p)] for p in game.players}
    for p in game.players:
        if not delta.get(p):
            raise ValueError(f"empty restriction for player {p!r}")
    prev = _all_sets(game)
    levels = []
    for k in range(1, K + 1):
        sets = {}
        for p in game.players:
            strat = game.strategies(p)
            opps = opponent_product(game, p, prev)
            if k == 1 or variant == "standard":
                allowed = [
                    system
                    for system in delta[p]
                    if k == 1
                    or all(
                        not _reaches(game, p, opps, iid) or system[iid].support <= opps
                        for iid in game.player_infosets[p]
                    )
                ]
                sets[p] = tuple(
                    n
                    for n in prev[p]
                    if any(exists_belief_system(game, p, strat[n], _fixed_spec(game, p, b), mode) for b in allowed)
                )
            else:
                rules = {
                    iid: InfoSetSupport(opps if _reaches(game, p, opps, iid) else None)
                    for iid in game.player_infosets[p]
                }
                sets[p] = _members(game, p, SupportSpec(rules), mode, prev[p])
        levels.append(Level(k, sets))
        prev = sets
    return _solution(DELTA_RAT, game, levels, variant=variant, mode=mode)


# ------------------------------------------------------------ backward ones
def _require_precedence(game: Game) -> None:
    for a, later in game.precedes.items():
        for b in later:
            if a in game.precedes[b]:
                raise PreconditionError(f"information sets {a!r} and {b!r} precede each other")


def bracket_product(game: Game, player: str, sets: Sets, infoset: str) -> frozenset[Profile]:
    """``[X_{-i|I}]``: opponent profiles whose continuations from ``infoset`` lie in X."""
    return frozenset(
        itertools.product(*(game.bracket_indices(o, sets[o], infoset) for o in game.opponents(player)))
    )


def _bracket_spec(game: Game, player: str, sets: Sets) -> SupportSpec:
    rules = {}
    for iid in game.player_infosets[player]:
        allowed = bracket_product(game, player, sets, iid)
        # an empty intersection with the reach set leaves the belief free
        rules[iid] = InfoSetSupport(allowed if _reaches(game, player, allowed, iid) else None)
    return SupportSpec(rules, continuation=True)


def backward_rationalizability(game: Game, K: int = 4, mode: str = LOCAL) -> LevelSolution:
    """Rationalizability of continuation strategies at every information set,
    reached or not, with beliefs on surviving opponent continuations."""
    _check_k(K)
    _require_precedence(game)
    prev = _all_sets(game)
    levels = []
    for k in range(1, K + 1):
        sets, specs = {}, {}
        for p in game.players:
            spec = _bracket_spec(game, p, prev) if k > 1 else SupportSpec(continuation=True)
            specs[p] = spec
            sets[p] = _members(game, p, spec, mode, prev[p])
        levels.append(Level(k, sets, specs))
        prev = sets
    return _solution(BACKWARD_RAT, game, levels, mode=mode)


def backward_level_k(
    game: Game,
    beliefs: Mapping[str, BeliefSystem] | None = None,
    K: int = 4,
    mode: str = LOCAL,
) -> LevelSolution:
    """Level-k thinking applied to every continuation game."""
    _check_k(K)
    _require_precedence(game)
    first = _first_systems(game, beliefs)
    prev: Sets | None = None
    levels = []
    for k in range(1, K + 1):
        sets, specs = {}, {}
        for p in game.players:
            if prev is None:
                spec = _fixed_spec(game, p, first[p], continuation=True)
            else:
                spec = _bracket_spec(game, p, prev)
            specs[p] = spec
            sets[p] = _members(game, p, spec, mode)
        levels.append(Level(k, sets, specs))
        prev = sets
    return _solution(BACKWARD_LEVEL_K, game, levels, mode=mode, beliefs="uniform" if not beliefs else "given")


def _require_perfect_information(game: Game) -> None:
    game._require_perfect_information()


def backward_induction_k(game: Game, K: int = 4) -> LevelSolution:
    """Backward induction run on subgames of rank at most k, for k = 1..K.

    Ties keep every maximizing action; the set of payoff vectors compatible
    with some maximizing selection is passed up the tree.
    """
    _check_k(K)
    _require_perfect_information(game)
    players = game.players
    values: dict[str, frozenset[tuple[Fraction, ...]]] = {}
    kept: dict[str, frozenset[str]] = {}
    rank: dict[str, int] = {}
    for nid in reversed(game.preorder):
        node = game.nodes[nid]
        if node.is_terminal:
            values[nid] = frozenset({tuple(node.payoff(p) for p in players)})
            continue
        rank[nid] = game.subgame_rank(nid)
        mover = node.movers[0]
        m = players.index(mover)
        child = {profile[0]: c for profile, c in node.children}
        lows = {a: min(v[m] for v in values[c]) for a, c in child.items()}
        keep, vals = set(), set()
        for a, c in child.items():
            threshold = max((lows[b] for b in child if b != a), default=None)
            good = [v for v in values[c] if threshold is None or v[m] >= threshold]
            if good:
                keep.add(a)
                vals.update(good)
        kept[nid] = frozenset(keep)
        values[nid] = frozenset(vals)
    levels = []
    for k in range(1, K + 1):
        sets = {}
        for p in players:
            constrained = [
                (pos, kept[game.info_sets[iid].members[0]])
                for pos, iid in enumerate(game.player_infosets[p])
                if rank[game.info_sets[iid].members[0]] <= k
            ]
            sets[p] = tuple(
                n
                for n, s in enumerate(game.strategies(p))
                if all(s.actions[pos] in acts for pos, acts in constrained)
            )
        levels.append(Level(k, sets))
    return _solution(BACKWARD_INDUCTION, game, levels)


# ---------------------------------------------------------------- dispatch
SOLVERS: dict[str, Callable[..., LevelSolution]] = {
    NF_LEVEL_K: normal_form_level_k,
    RATIONALIZABILITY: rationalizability,
    STRONG_LEVEL_K: strong_level_k,
    STRONG_RAT: strong_rationalizability,
    DELTA_RAT: delta_rationalizability,
    ITERATED_ADMISSIBILITY: iterated_admissibility,
    PRUDENT_RAT: prudent_rationalizability,
    BACKWARD_RAT: backward_rationalizability,
    BACKWARD_LEVEL_K: backward_level_k,
    BACKWARD_INDUCTION: backward_induction_k,
    IESDS: iterated_strict_dominance,
}

_TAKES_MODE = {STRONG_LEVEL_K, STRONG_RAT, DELTA_RAT, PRUDENT_RAT, BACKWARD_RAT, BACKWARD_LEVEL_K}


def solve(game: Game, concept: str, K: int = 4, *, mode: str = LOCAL, **kwargs: Any) -> LevelSolution:
    """Run ``concept`` by name."""
    try:
        fn = SOLVERS[concept]
    except KeyError:
        raise ValueError(f"unknown concept {concept!r}") from None
    if concept in _TAKES_MODE:
        kwargs["mode"] = mode
    return fn(game, K=K, **kwargs)


def has_chance(game: Game) -> bool:
    return any(CHANCE in n.movers for n in game.nodes.values())


def witnesses(solution: LevelSolution) -> list[dict[str, Any]]:
    """Belief witnesses behind each member of each level.

    Belief-system concepts report a belief system per strategy; the normal-form
    level-k and rationalizability procedures report a belief over opponent
    profiles.  Dominance-based and backward-induction levels carry no witness.
    """
    game = solution.game
    out = []
    mode = solution.params.get("mode", LOCAL)
    for lv in solution.levels:
        entry: dict[str, Any] = {"level": lv.k, "witnesses": {}}
        for p in game.players:
            items = []
            strat = game.strategies(p)
            for n in lv.sets[p]:
                s = strat[n]
                if lv.specs is not None:
                    system = exists_belief_system(game, p, s, lv.specs[p], mode)
                    items.append({"strategy": s.label, "belief_system": None if system is None else system.to_json(game)})
                elif solution.concept in (NF_LEVEL_K, RATIONALIZABILITY):
                    nf = game.normal_form_game
                    prev = solution.levels[lv.k - 2].sets if lv.k > 1 else None
                    iid = _root_infoset(nf, p)
                    if prev is None:
                        given = solution.params.get("first_beliefs") or {}
                        if solution.concept == NF_LEVEL_K:
                            belief = given.get(p) or Belief.uniform(nf.opponent_profiles(p))
                        else:
                            belief = exists_rationalizing_belief(nf, nf.strategies(p)[n], iid)
                    else:
                        belief = exists_rationalizing_belief(nf, nf.strategies(p)[n], iid, opponent_product(nf, p, prev))
                    items.append({"strategy": s.label, "belief": None if belief is None else belief.to_json(nf, p)})
            entry["witnesses"][p] = items
        out.append(entry)
    return out
