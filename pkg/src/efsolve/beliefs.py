"""Beliefs, belief systems and exact rationality tests.

Beliefs are distributions over opponent *profiles* (tuples of strategy
indices in ``game.opponents(player)`` order), so correlated conjectures are
allowed.  Every existence question reduces to a small linear program solved
exactly by :mod:`efsolve.linprog`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .game import Game, Strategy, format_rational, parse_rational
from .linprog import OPTIMAL, linprog

Profile = tuple[int, ...]

LOCAL = "local"
STRICT = "strict"
MODES = (LOCAL, STRICT)


class BeliefError(ValueError):
    pass


@dataclass(frozen=True)
class Belief:
    """A finite distribution over opponent profiles (zero weights dropped)."""

    weights: Mapping[Profile, Fraction]

    def __post_init__(self) -> None:
        clean = {tuple(t): Fraction(p) for t, p in self.weights.items() if p}
        if not clean:
            raise BeliefError("belief has empty support")
        if any(p < 0 for p in clean.values()):
            raise BeliefError("negative belief weight")
        if sum(clean.values()) != 1:
            raise BeliefError("belief weights must sum to 1")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @classmethod
    def uniform(cls, profiles: Iterable[Profile]) -> Belief:
        items = sorted(set(profiles))
        if not items:
            raise BeliefError("uniform belief over an empty set")
        w = Fraction(1, len(items))
        return cls({t: w for t in items})

    @classmethod
    def point(cls, profile: Profile) -> Belief:
        return cls({tuple(profile): Fraction(1)})

    @classmethod
    def normalized(cls, weights: Mapping[Profile, Fraction]) -> Belief:
        total = sum(weights.values())
        return cls({t: Fraction(w) / total for t, w in weights.items() if w})

    @property
    def support(self) -> frozenset[Profile]:
        return frozenset(self.weights)

    def prob(self, profile: Profile) -> Fraction:
        return self.weights.get(tuple(profile), Fraction(0))

    def mass(self, profiles: Iterable[Profile]) -> Fraction:
        return sum((self.prob(t) for t in set(profiles)), Fraction(0))

    def conditional(self, profiles: Iterable[Profile]) -> Belief:
        keep = set(profiles)
        return Belief.normalized({t: p for t, p in self.weights.items() if t in keep})

    def to_json(self, game: Game, player: str) -> list[dict[str, Any]]:
        opps = game.opponents(player)
        out = []
        for t, p in self.weights.items():
            labels = {o: game.strategies(o)[k].label for o, k in zip(opps, t)}
            out.append({"profile": labels, "p": format_rational(p)})
        return out

    @classmethod
    def from_json(cls, game: Game, player: str, raw: Sequence[Mapping[str, Any]]) -> Belief:
        opps = game.opponents(player)
        weights = {}
        for item in raw:
            labels = item["profile"]
            t = tuple(game.strategy_index(game.strategy_by_label(o, labels[o])) for o in opps)
            weights[t] = weights.get(t, Fraction(0)) + parse_rational(item["p"])
        return cls(weights)


@dataclass(frozen=True)
class BeliefSystem:
    owner: str
    beliefs: Mapping[str, Belief]

    def __getitem__(self, infoset: str) -> Belief:
        return self.beliefs[infoset]

    def problems(self, game: Game) -> list[str]:
        """Violations of the reaching and conditioning requirements."""
        out = []
        isets = game.player_infosets[self.owner]
        for iid in isets:
            if iid not in self.beliefs:
                out.append(f"no belief at {iid}")
                continue
            reach = game.opponent_reach(self.owner, iid)
            if not self.beliefs[iid].support <= reach:
                out.append(f"belief at {iid} puts mass on profiles not reaching it")
        for a, b in itertools.permutations(isets, 2):
            if a not in self.beliefs or b not in self.beliefs or b not in game.precedes[a]:
                continue
            reach_b = game.opponent_reach(self.owner, b)
            if self.beliefs[a].mass(reach_b) > 0 and self.beliefs[b] != self.beliefs[a].conditional(reach_b):
                out.append(f"belief at {b} is not the conditional of the belief at {a}")
        return out

    def to_json(self, game: Game) -> dict[str, Any]:
        return {
            "owner": self.owner,
            "beliefs": {i: b.to_json(game, self.owner) for i, b in self.beliefs.items()},
        }

    @classmethod
    def from_json(cls, game: Game, raw: Mapping[str, Any]) -> BeliefSystem:
        owner = str(raw["owner"])
        beliefs = {str(i): Belief.from_json(game, owner, b) for i, b in raw["beliefs"].items()}
        return cls(owner, beliefs)


@dataclass(frozen=True)
class InfoSetSupport:
    """What a belief at one information set may look like.

    ``profiles`` is the allowed support (``None`` means unrestricted).  When
    it misses every opponent profile reaching the information set, the fixed
    ``fallback`` belief applies if one is given, and any reaching belief
    otherwise.  ``cautious`` asks for full support on the effective set.
    """

    profiles: frozenset[Profile] | None = None
    fallback: Belief | None = None
    cautious: bool = False

    @classmethod
    def fixed(cls, belief: Belief) -> InfoSetSupport:
        return cls(frozenset(), belief)


@dataclass(frozen=True)
class SupportSpec:
    """Per-information-set support prescriptions for one player.

    With ``continuation`` set, rationality is required of the continuation
    strategy at every information set, reached or not.
    """

    per_infoset: Mapping[str, InfoSetSupport] = field(default_factory=dict)
    continuation: bool = False

    def at(self, infoset: str) -> InfoSetSupport:
        return self.per_infoset.get(infoset, _ANY)


_ANY = InfoSetSupport()


# ------------------------------------------------------------------ utility
def _utility_row(game: Game, player: str, infoset: str, own: int, cols: Sequence[Profile]) -> list[Fraction]:
    return [game.payoff_through(player, infoset, game.join(player, own, t)) for t in cols]


def _replacements(game: Game, player: str, infoset: str) -> list[int]:
    """One representative per distinct continuation among strategies reaching ``infoset``."""
    seen: dict[tuple[str, ...], int] = {}
    for n in sorted(game.own_reach(player, infoset)):
        seen.setdefault(game.continuation_key(player, n, infoset), n)
    return list(seen.values())


def representative(game: Game, player: str, index: int, infoset: str) -> int | None:
    """A strategy reaching ``infoset`` that shares ``index``'s continuation there."""
    own = game.own_reach(player, infoset)
    if index in own:
        return index
    key = game.continuation_key(player, index, infoset)
    for n in sorted(own):
        if game.continuation_key(player, n, infoset) == key:
            return n
    return None


def _subject(game: Game, strategy: Strategy, infoset: str, continuation: bool) -> int | None:
    idx = game.strategy_index(strategy)
    if continuation:
        return representative(game, strategy.owner, idx, infoset)
    return idx if idx in game.own_reach(strategy.owner, infoset) else None


def _gain_rows(game: Game, player: str, infoset: str, subject: int, cols: Sequence[Profile]) -> list[list[Fraction]]:
    """For each replacement r, the row u(subject, t) - u(r, t) over ``cols``."""
    base = _utility_row(game, player, infoset, subject, cols)
    rows = []
    for r in _replacements(game, player, infoset):
        if game.continuation_key(player, r, infoset) == game.continuation_key(player, subject, infoset):
            continue
        other = _utility_row(game, player, infoset, r, cols)
        rows.append([a - b for a, b in zip(base, other)])
    return rows


def _check_belief(game: Game, player: str, infoset: str, belief: Belief) -> None:
    if not belief.support <= game.opponent_reach(player, infoset):
        raise BeliefError(f"belief does not reach {infoset!r}")


def conditional_expected_utility(game: Game, strategy: Strategy, info_set: str, belief: Belief) -> Fraction:
    """Expected utility of ``strategy`` given ``belief`` and that ``info_set`` is reached."""
    player = strategy.owner
    idx = game.strategy_index(strategy)
    if idx not in game.own_reach(player, info_set):
        raise BeliefError(f"strategy {strategy.label} does not reach {info_set!r}")
    _check_belief(game, player, info_set, belief)
    num = Fraction(0)
    den = Fraction(0)
    for t, p in belief.weights.items():
        prof = game.join(player, idx, t)
        num += p * game.payoff_through(player, info_set, prof)
        den += p * game.reach_probability(info_set, prof)
    return num / den


def is_rational_at(
    game: Game, strategy: Strategy, info_set: str, belief: Belief, *, continuation: bool = False
) -> bool:
    """No replacement at ``info_set`` does strictly better under ``belief``.

    Vacuously true when the strategy does not reach ``info_set``, unless
    ``continuation`` asks to judge the continuation strategy there.
    """
    subject = _subject(game, strategy, info_set, continuation)
    if subject is None:
        return True
    _check_belief(game, strategy.owner, info_set, belief)
    cols = list(belief.weights)
    probs = list(belief.weights.values())
    for row in _gain_rows(game, strategy.owner, info_set, subject, cols):
        if sum((p * g for p, g in zip(probs, row)), Fraction(0)) < 0:
            return False
    return True


def _belief_lp(gains: list[list[Fraction]], n: int, cautious: bool) -> tuple[Fraction, ...] | None:
    """Weights x >= 0 summing to 1 with gains . x >= 0 (and all x > 0 if cautious)."""
    if cautious:
        # variables x_1..x_n, eps; maximize eps s.t. eps <= x_t, eps <= 1
        A_ub = [[-g for g in row] + [0] for row in gains]
        b_ub = [0] * len(gains)
        for k in range(n):
            r = [0] * (n + 1)
            r[k] = -1
            r[n] = 1
            A_ub.append(r)
            b_ub.append(0)
        A_ub.append([0] * n + [1])
        b_ub.append(1)
        res = linprog([0] * n + [1], A_ub, b_ub, [[1] * n + [0]], [1])
        if res.status != OPTIMAL or res.value <= 0:
            return None
        return res.x[:n]
    res = linprog([0] * n, [[-g for g in row] for row in gains], [0] * len(gains), [[1] * n], [1])
    return res.x if res.status == OPTIMAL else None


def exists_rationalizing_belief(
    game: Game,
    strategy: Strategy,
    info_set: str,
    support: Iterable[Profile] | None = None,
    *,
    continuation: bool = False,
    cautious: bool = False,
) -> Belief | None:
    """A belief inside ``support`` (intersected with the reach set) under which
    ``strategy`` is rational at ``info_set``; None if there is none.

    With ``cautious`` the belief must give positive weight to every profile in
    the effective support.
    """
    player = strategy.owner
    reach = game.opponent_reach(player, info_set)
    cols = sorted(reach if support is None else set(support) & reach)
    if not cols:
        raise BeliefError(f"empty effective support at {info_set!r}")
    subject = _subject(game, strategy, info_set, continuation)
    if subject is None:
        return Belief.uniform(cols)
    gains = _gain_rows(game, player, info_set, subject, cols)
    x = _belief_lp(gains, len(cols), cautious)
    if x is None:
        return None
    return Belief({t: w for t, w in zip(cols, x)})


# ------------------------------------------------------------ belief systems
def _effective(game: Game, player: str, infoset: str, rule: InfoSetSupport) -> tuple[list[Profile], Belief | None, bool]:
    """(effective support, fixed belief or None, cautious) at one information set."""
    reach = game.opponent_reach(player, infoset)
    if rule.profiles is not None:
        cols = sorted(rule.profiles & reach)
        if cols:
            return cols, None, rule.cautious
        if rule.fallback is not None:
            return sorted(rule.fallback.support), rule.fallback, False
    return sorted(reach), None, False


def exists_belief_system(
    game: Game,
    player: str,
    strategy: Strategy,
    spec: SupportSpec | None = None,
    mode: str = LOCAL,
) -> BeliefSystem | None:
    """A belief system obeying ``spec`` under which ``strategy`` is rational at
    every information set of ``player``; None if none exists.

    ``local`` treats information sets independently; ``strict`` also imposes
    conditioning between a player's successive information sets.
    """
    if strategy.owner != player:
        raise ValueError("strategy does not belong to player")
    spec = spec or SupportSpec()
    if mode == LOCAL:
        return _local_system(game, player, strategy, spec)
    if mode == STRICT:
        return _strict_system(game, player, strategy, spec)
    raise ValueError(f"unknown mode {mode!r}")


def _local_system(game: Game, player: str, strategy: Strategy, spec: SupportSpec) -> BeliefSystem | None:
    beliefs = {}
    for iid in game.player_infosets[player]:
        cols, fixed, cautious = _effective(game, player, iid, spec.at(iid))
        subject = _subject(game, strategy, iid, spec.continuation)
        if fixed is not None:
            if subject is not None and not is_rational_at(game, strategy, iid, fixed, continuation=spec.continuation):
                return None
            beliefs[iid] = fixed
            continue
        if subject is None:
            beliefs[iid] = Belief.uniform(cols)
            continue
        x = _belief_lp(_gain_rows(game, player, iid, subject, cols), len(cols), cautious)
        if x is None:
            return None
        beliefs[iid] = Belief({t: w for t, w in zip(cols, x)})
    return BeliefSystem(player, beliefs)


def own_parent(game: Game, player: str) -> dict[str, str | None]:
    """Immediate own predecessor of each of ``player``'s information sets."""
    isets = game.player_infosets[player]
    out: dict[str, str | None] = {}
    for b in isets:
        preds = [a for a in isets if b in game.precedes[a]]
        latest = [a for a in preds if not any(c in game.precedes[a] for c in preds)]
        out[b] = latest[0] if latest else None
    return out


def _strict_system(game: Game, player: str, strategy: Strategy, spec: SupportSpec) -> BeliefSystem | None:
    isets = list(game.player_infosets[player])
    parent = own_parent(game, player)
    children = [i for i in isets if parent[i] is not None]
    reach = {i: sorted(game.opponent_reach(player, i)) for i in isets}
    rules = {i: _effective(game, player, i, spec.at(i)) for i in isets}
    subjects = {i: _subject(game, strategy, i, spec.continuation) for i in isets}
    gains = {
        i: _gain_rows(game, player, i, subjects[i], reach[i]) if subjects[i] is not None else []
        for i in isets
    }

    for pattern in itertools.product((False, True), repeat=len(children)):
        positive = dict(zip(children, pattern))
        block: dict[str, str] = {}
        for i in isets:  # canonical order lists predecessors first
            block[i] = block[parent[i]] if positive.get(i) else i
        roots = [i for i in isets if block[i] == i]
        var: dict[tuple[str, Profile], int] = {}
        for r in roots:
            for t in reach[r]:
                var[(r, t)] = len(var)
        eps = len(var)
        n = eps + 1
        A_ub: list[list[Fraction]] = []
        b_ub: list[Fraction] = []
        A_eq: list[list[Fraction]] = []
        b_eq: list[Fraction] = []
        strict_needed = False

        def row() -> list[Fraction]:
            return [Fraction(0)] * n

        for r in roots:
            eq = row()
            for t in reach[r]:
                eq[var[(r, t)]] = Fraction(1)
            A_eq.append(eq)
            b_eq.append(Fraction(1))
        for i in isets:
            b = block[i]
            cols = reach[i]
            if i != b:
                ub = row()  # sum over reach(i) >= eps
                for t in cols:
                    ub[var[(b, t)]] = Fraction(-1)
                ub[eps] = Fraction(1)
                A_ub.append(ub)
                b_ub.append(Fraction(0))
                strict_needed = True
            if parent[i] is not None and not positive[i]:
                pb = block[parent[i]]
                eq = row()
                for t in cols:
                    eq[var[(pb, t)]] = Fraction(1)
                A_eq.append(eq)
                b_eq.append(Fraction(0))
            eff, fixed, cautious = rules[i]
            if fixed is not None:
                for t in cols:
                    eq = row()
                    f = fixed.prob(t)
                    for u in cols:
                        eq[var[(b, u)]] -= f
                    eq[var[(b, t)]] += 1
                    A_eq.append(eq)
                    b_eq.append(Fraction(0))
            else:
                allowed = set(eff)
                for t in cols:
                    if t not in allowed:
                        eq = row()
                        eq[var[(b, t)]] = Fraction(1)
                        A_eq.append(eq)
                        b_eq.append(Fraction(0))
                    elif cautious:
                        ub = row()
                        ub[var[(b, t)]] = Fraction(-1)
                        ub[eps] = Fraction(1)
                        A_ub.append(ub)
                        b_ub.append(Fraction(0))
                        strict_needed = True
            for g in gains[i]:
                ub = row()
                for t, v in zip(cols, g):
                    ub[var[(b, t)]] = -v
                A_ub.append(ub)
                b_ub.append(Fraction(0))
        cap = row()
        cap[eps] = Fraction(1)
        A_ub.append(cap)
        b_ub.append(Fraction(1))
        c = row()
        c[eps] = Fraction(1)
        res = linprog(c, A_ub, b_ub, A_eq, b_eq)
        if res.status != OPTIMAL or (strict_needed and res.value <= 0):
            continue
        x = res.x
        beliefs = {}
        for i in isets:
            weights = {t: x[var[(block[i], t)]] for t in reach[i]}
            beliefs[i] = Belief.normalized(weights)
        return BeliefSystem(player, beliefs)
    return None


def uniform_system(game: Game, player: str) -> BeliefSystem:
    """At each information set, the uniform belief over opponent profiles reaching it."""
    return BeliefSystem(
        player,
        {i: Belief.uniform(game.opponent_reach(player, i)) for i in game.player_infosets[player]},
    )


def is_rational_everywhere(game: Game, strategy: Strategy, system: BeliefSystem, *, continuation: bool = False) -> bool:
    return all(
        is_rational_at(game, strategy, i, system[i], continuation=continuation)
        for i in game.player_infosets[strategy.owner]
    )


# ----------------------------------------------------------------- dominance
STRICT_DOM = "strict"
WEAK_DOM = "weak"
CONDITIONAL_DOM = "conditional-strict"
FLAVORS = (STRICT_DOM, WEAK_DOM, CONDITIONAL_DOM)


def dominance_test(
    game: Game,
    strategy: Strategy,
    pool: Iterable[Strategy] | None = None,
    flavor: str = STRICT_DOM,
    *,
    opponents: Iterable[Profile] | None = None,
    info_set: str | None = None,
) -> dict[Strategy, Fraction] | None:
    """A mixture over ``pool`` dominating ``strategy``, or None.

    The comparison runs over the opponent profiles in ``opponents`` (default:
    all).  The conditional flavor restricts both sides to the normal-form
    information set of ``info_set``: opponent profiles reaching it, and own
    strategies reaching it (``pool`` defaults to all of those).
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown dominance flavor {flavor!r}")
    player = strategy.owner
    idx = game.strategy_index(strategy)
    cols = set(game.opponent_profiles(player) if opponents is None else opponents)
    if flavor == CONDITIONAL_DOM:
        if info_set is None:
            raise ValueError("conditional dominance needs an information set")
        own = game.own_reach(player, info_set)
        if idx not in own:
            return None
        cols &= game.opponent_reach(player, info_set)
        pool_idx = sorted(own if pool is None else {game.strategy_index(s) for s in pool} & own)

        def util(own_idx: int, t: Profile) -> Fraction:
            return game.payoff_through(player, info_set, game.join(player, own_idx, t))
    else:
        pool_idx = sorted(
            range(len(game.strategies(player))) if pool is None else {game.strategy_index(s) for s in pool}
        )

        def util(own_idx: int, t: Profile) -> Fraction:
            return game.payoff_table[game.join(player, own_idx, t)][game.players.index(player)]

    cols_l = sorted(cols)
    if not cols_l or not pool_idx:
        return None
    m = len(pool_idx)
    base = [util(idx, t) for t in cols_l]
    mat = [[util(r, t) for r in pool_idx] for t in cols_l]
    if flavor == WEAK_DOM:
        # sum_r p_r u(r,t) - s_t = u(s,t), maximize sum s_t
        A_eq = [[*mrow, *[Fraction(int(k == j)) * -1 for k in range(len(cols_l))]] for j, mrow in enumerate(mat)]
        A_eq.append([1] * m + [0] * len(cols_l))
        b_eq = base + [1]
        res = linprog([0] * m + [1] * len(cols_l), A_eq=A_eq, b_eq=b_eq)
        if res.status != OPTIMAL or res.value <= 0:
            return None
    else:
        # eps = e1 - e2; sum_r p_r u(r,t) - eps >= u(s,t); maximize eps
        A_ub = [[-v for v in mrow] + [1, -1] for mrow in mat]
        b_ub = [-v for v in base]
        res = linprog([0] * m + [1, -1], A_ub, b_ub, [[1] * m + [0, 0]], [1])
        if res.status != OPTIMAL or res.value <= 0:
            return None
    strategies = game.strategies(player)
    return {strategies[r]: p for r, p in zip(pool_idx, res.x[:m]) if p}
