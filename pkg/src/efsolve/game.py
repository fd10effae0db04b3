"""Finite extensive-form games with perfect recall.

A game is a rooted tree of nodes.  Decision nodes carry a set of movers
(possibly several players moving simultaneously, possibly together with
chance); children are keyed by action profiles of the movers.  Chance moves
are integrated into expected utility with their fixed distribution.

Everything numeric is a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

CHANCE = "chance"
DEFAULT_STRATEGY_CAP = 10**6


class GameFormatError(ValueError):
    """Raised when a game document cannot be parsed."""


class CapacityError(RuntimeError):
    """Raised when strategy enumeration would exceed the configured cap."""


class PreconditionError(ValueError):
    """Raised when an operation is applied to a game outside its domain."""


def parse_rational(value: Any) -> Fraction:
    """Parse ``"3"``, ``"-1"``, ``"5/2"`` (or an int) into an exact Fraction."""
    if isinstance(value, bool):
        raise GameFormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise GameFormatError(f"rationals must be strings like '5/2', got {value!r}")
    text = value.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise GameFormatError(f"not an exact rational: {value!r}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Node:
    id: str
    kind: str  # "decision" | "chance" | "terminal"
    movers: tuple[str, ...] = ()
    # action profile (one label per mover, in mover order) -> child id
    children: tuple[tuple[tuple[str, ...], str], ...] = ()
    chance_probs: tuple[tuple[str, Fraction], ...] = ()
    payoffs: tuple[tuple[str, Fraction], ...] = ()

    @property
    def is_terminal(self) -> bool:
        return self.kind == "terminal"

    def actions_of(self, mover: str) -> tuple[str, ...]:
        pos = self.movers.index(mover)
        seen: dict[str, None] = {}
        for profile, _ in self.children:
            seen.setdefault(profile[pos], None)
        return tuple(seen)

    def payoff(self, player: str) -> Fraction:
        return dict(self.payoffs)[player]


@dataclass(frozen=True)
class InfoSet:
    id: str
    player: str
    members: tuple[str, ...]


@dataclass(frozen=True, order=True)
class Strategy:
    """A pure strategy: one action per information set of ``owner``."""

    owner: str
    infosets: tuple[str, ...]
    actions: tuple[str, ...]

    def __getitem__(self, infoset: str) -> str:
        return self.actions[self.infosets.index(infoset)]

    @property
    def choices(self) -> dict[str, str]:
        return dict(zip(self.infosets, self.actions))

    @property
    def label(self) -> str:
        if len(self.actions) == 1:
            return self.actions[0]
        return "(" + ", ".join(self.actions) + ")"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    nodes: tuple[str, ...] = ()


@dataclass(frozen=True)
class OutcomeSet:
    """Terminal histories reached, with their utility vectors."""

    terminals: frozenset[str]
    utilities: Mapping[str, Mapping[str, Fraction]] = field(compare=False, hash=False)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.terminals))

    def __len__(self) -> int:
        return len(self.terminals)

    def __or__(self, other: OutcomeSet) -> OutcomeSet:
        return OutcomeSet(self.terminals | other.terminals, {**self.utilities, **other.utilities})

    def issubset(self, other: OutcomeSet) -> bool:
        return self.terminals <= other.terminals


class Game:
    """An immutable finite game tree.

    ``Game`` instances are built with :meth:`from_dict` / :meth:`load` or
    directly from nodes and information sets.  Derived data (strategies,
    reach relations, the payoff table) is computed lazily and cached.
    """

    def __init__(
        self,
        players: Sequence[str],
        nodes: Iterable[Node],
        info_sets: Iterable[InfoSet],
        root: str,
        *,
        name: str = "",
        caption: str = "",
        strategy_cap: int = DEFAULT_STRATEGY_CAP,
    ):
        self.players: tuple[str, ...] = tuple(players)
        self.nodes: dict[str, Node] = {}
        for node in nodes:
            if node.id in self.nodes:
                raise GameFormatError(f"duplicate node id {node.id!r}")
            self.nodes[node.id] = node
        self.root = root
        self.name = name
        self.caption = caption
        self.strategy_cap = strategy_cap
        if root not in self.nodes:
            raise GameFormatError(f"root {root!r} is not a node")
        if CHANCE in self.players:
            raise GameFormatError(f"{CHANCE!r} is reserved for nature")
        if len(set(self.players)) != len(self.players):
            raise GameFormatError("duplicate player ids")
        self.info_sets: dict[str, InfoSet] = {}
        declared: set[tuple[str, str]] = set()
        for info in info_sets:
            if info.id in self.info_sets:
                raise GameFormatError(f"duplicate information set id {info.id!r}")
            self.info_sets[info.id] = info
            declared.update((info.player, m) for m in info.members)
        # nodes not covered by a declared information set get a singleton one
        for node in self.nodes.values():
            for mover in node.movers:
                if mover != CHANCE and (mover, node.id) not in declared:
                    iid = f"{mover}@{node.id}"
                    self.info_sets[iid] = InfoSet(iid, mover, (node.id,))
        self._check_structure()

    # ------------------------------------------------------------------ I/O
    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], **kwargs: Any) -> Game:
        allowed = {"players", "nodes", "info_sets", "root", "name", "caption"}
        _reject_unknown(doc, allowed, "game")
        for key in ("players", "nodes", "root"):
            if key not in doc:
                raise GameFormatError(f"game document lacks {key!r}")
        nodes = [_parse_node(raw) for raw in doc["nodes"]]
        infos = []
        for n, raw in enumerate(doc.get("info_sets", [])):
            _reject_unknown(raw, {"id", "player", "members"}, "info set")
            try:
                infos.append(
                    InfoSet(
                        str(raw.get("id", f"I{n}")),
                        str(raw["player"]),
                        tuple(str(m) for m in raw["members"]),
                    )
                )
            except KeyError as exc:
                raise GameFormatError(f"info set lacks {exc.args[0]!r}") from None
        return cls(
            [str(p) for p in doc["players"]],
            nodes,
            infos,
            str(doc["root"]),
            name=str(doc.get("name", "")),
            caption=str(doc.get("caption", "")),
            **kwargs,
        )

    @classmethod
    def load(cls, path: str | Path, **kwargs: Any) -> Game:
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GameFormatError(f"{path}: {exc}") from None
        return cls.from_dict(doc, **kwargs)

    def to_dict(self) -> dict[str, Any]:
        nodes = []
        for node in self.nodes.values():
            raw: dict[str, Any] = {"id": node.id, "kind": node.kind}
            if node.kind != "terminal":
                raw["movers"] = list(node.movers)
                raw["actions"] = [
                    {"profile": dict(zip(node.movers, profile)), "child": child}
                    for profile, child in node.children
                ]
            if node.chance_probs:
                raw["chance_probs"] = {a: format_rational(p) for a, p in node.chance_probs}
            if node.kind == "terminal":
                raw["payoffs"] = {p: format_rational(v) for p, v in node.payoffs}
            nodes.append(raw)
        doc: dict[str, Any] = {}
        if self.name:
            doc["name"] = self.name
        if self.caption:
            doc["caption"] = self.caption
        doc["players"] = list(self.players)
        doc["root"] = self.root
        doc["nodes"] = nodes
        doc["info_sets"] = [
            {"id": info.id, "player": info.player, "members": list(info.members)}
            for info in self.info_sets.values()
        ]
        return doc

    def with_payoffs(self, payoffs: Mapping[str, Mapping[str, Fraction]]) -> Game:
        """Copy of the game with some terminal payoffs replaced."""
        nodes = []
        for node in self.nodes.values():
            if node.id in payoffs:
                merged = dict(node.payoffs)
                merged.update({p: Fraction(v) for p, v in payoffs[node.id].items()})
                node = Node(node.id, node.kind, payoffs=tuple(merged.items()))
            nodes.append(node)
        return Game(
            self.players,
            nodes,
            self.info_sets.values(),
            self.root,
            name=self.name,
            caption=self.caption,
            strategy_cap=self.strategy_cap,
        )

    # ------------------------------------------------------------ structure
    def _check_structure(self) -> None:
        for node in self.nodes.values():
            if node.kind not in ("decision", "chance", "terminal"):
                raise GameFormatError(f"node {node.id!r}: unknown kind {node.kind!r}")
            for _, child in node.children:
                if child not in self.nodes:
                    raise GameFormatError(f"node {node.id!r}: unknown child {child!r}")
            if node.kind == "terminal":
                if node.children:
                    raise GameFormatError(f"terminal node {node.id!r} has children")
            elif not node.children:
                raise GameFormatError(f"non-terminal node {node.id!r} has no actions")
        for info in self.info_sets.values():
            if info.player not in self.players:
                raise GameFormatError(f"info set {info.id!r}: unknown player {info.player!r}")
            for m in info.members:
                if m not in self.nodes:
                    raise GameFormatError(f"info set {info.id!r}: unknown node {m!r}")

    @cached_property
    def parent(self) -> dict[str, tuple[str, tuple[str, ...]] | None]:
        """node -> (parent id, action profile leading to it); root -> None."""
        parents: dict[str, list[tuple[str, tuple[str, ...]]]] = {n: [] for n in self.nodes}
        for node in self.nodes.values():
            for profile, child in node.children:
                parents[child].append((node.id, profile))
        out: dict[str, tuple[str, tuple[str, ...]] | None] = {}
        for nid, plist in parents.items():
            out[nid] = plist[0] if len(plist) == 1 else None
        return out

    @cached_property
    def _parent_lists(self) -> dict[str, list[str]]:
        parents: dict[str, list[str]] = {n: [] for n in self.nodes}
        for node in self.nodes.values():
            for _, child in node.children:
                parents[child].append(node.id)
        return parents

    @cached_property
    def preorder(self) -> tuple[str, ...]:
        order: list[str] = []
        seen: set[str] = set()
        stack = [self.root]
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            order.append(nid)
            for _, child in reversed(self.nodes[nid].children):
                stack.append(child)
        return tuple(order)

    @cached_property
    def depth(self) -> dict[str, int]:
        out = {self.root: 0}
        for nid in self.preorder:
            for _, child in self.nodes[nid].children:
                out.setdefault(child, out[nid] + 1)
        return out

    @cached_property
    def ancestors(self) -> dict[str, frozenset[str]]:
        """Proper ancestors of every node reachable from the root."""
        out: dict[str, frozenset[str]] = {self.root: frozenset()}
        for nid in self.preorder:
            for _, child in self.nodes[nid].children:
                out.setdefault(child, out[nid] | {nid})
        return out

    @cached_property
    def terminals(self) -> tuple[str, ...]:
        return tuple(n for n in self.preorder if self.nodes[n].is_terminal)

    @cached_property
    def node_infoset(self) -> dict[tuple[str, str], str]:
        """(player, node) -> information set id."""
        out = {}
        for info in self.info_sets.values():
            for m in info.members:
                out[(info.player, m)] = info.id
        return out

    @cached_property
    def player_infosets(self) -> dict[str, tuple[str, ...]]:
        """Each player's information sets in canonical (preorder) order."""
        first_seen: dict[str, int] = {}
        for pos, nid in enumerate(self.preorder):
            for mover in self.nodes[nid].movers:
                if mover == CHANCE:
                    continue
                iid = self.node_infoset.get((mover, nid))
                if iid is not None:
                    first_seen.setdefault(iid, pos)
        out: dict[str, list[str]] = {p: [] for p in self.players}
        for iid in sorted(first_seen, key=first_seen.__getitem__):
            out[self.info_sets[iid].player].append(iid)
        return {p: tuple(v) for p, v in out.items()}

    def infoset_actions(self, infoset: str) -> tuple[str, ...]:
        info = self.info_sets[infoset]
        return self.nodes[info.members[0]].actions_of(info.player)

    @cached_property
    def precedes(self) -> dict[str, frozenset[str]]:
        """infoset -> information sets (any player) it strictly precedes."""
        out: dict[str, set[str]] = {i: set() for i in self.info_sets}
        member_of: dict[str, list[str]] = {}
        for info in self.info_sets.values():
            for m in info.members:
                member_of.setdefault(m, []).append(info.id)
        for nid, anc in self.ancestors.items():
            for later in member_of.get(nid, ()):
                for a in anc:
                    for earlier in member_of.get(a, ()):
                        if earlier != later:
                            out[earlier].add(later)
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def _shares_node(self) -> dict[str, frozenset[str]]:
        at_node: dict[str, set[str]] = {}
        for (_, nid), iid in self.node_infoset.items():
            at_node.setdefault(nid, set()).add(iid)
        out: dict[str, set[str]] = {i: {i} for i in self.info_sets}
        for group in at_node.values():
            for iid in group:
                out[iid] |= group
        return {k: frozenset(v) for k, v in out.items()}

    def weakly_follows(self, later: str, earlier: str) -> bool:
        """True when ``later`` lies in the continuation game starting at ``earlier``.

        Moves made at the same node (simultaneous movers) count as part of it.
        """
        return later in self._shares_node[earlier] or later in self.precedes[earlier]

    # ----------------------------------------------------------- strategies
    def strategy_count(self, player: str) -> int:
        count = 1
        for iid in self.player_infosets[player]:
            count *= len(self.infoset_actions(iid))
        return count

    @cached_property
    def _strategies(self) -> dict[str, tuple[Strategy, ...]]:
        out = {}
        for player in self.players:
            count = self.strategy_count(player)
            if count > self.strategy_cap:
                raise CapacityError(
                    f"player {player!r} has {count} strategies (cap {self.strategy_cap})"
                )
            isets = self.player_infosets[player]
            out[player] = tuple(
                Strategy(player, isets, combo)
                for combo in itertools.product(*(self.infoset_actions(i) for i in isets))
            )
        return out

    def strategies(self, player: str) -> tuple[Strategy, ...]:
        return self._strategies[player]

    def strategy_index(self, strategy: Strategy) -> int:
        return self._strategy_pos[strategy.owner][strategy]

    @cached_property
    def _strategy_pos(self) -> dict[str, dict[Strategy, int]]:
        return {p: {s: n for n, s in enumerate(self.strategies(p))} for p in self.players}

    def strategy(self, player: str, *actions: str) -> Strategy:
        """Look up a strategy by its actions in canonical information-set order."""
        s = Strategy(player, self.player_infosets[player], tuple(actions))
        if s not in self._strategy_pos[player]:
            raise KeyError(f"no strategy {s.label} for player {player!r}")
        return s

    def strategy_by_label(self, player: str, label: str) -> Strategy:
        for s in self.strategies(player):
            if s.label == label:
                return s
        raise KeyError(f"no strategy labelled {label!r} for player {player!r}")

    @cached_property
    def profiles(self) -> tuple[tuple[int, ...], ...]:
        """All pure profiles as tuples of strategy indices (player order)."""
        return tuple(itertools.product(*(range(len(self.strategies(p))) for p in self.players)))

    def opponents(self, player: str) -> tuple[str, ...]:
        return tuple(p for p in self.players if p != player)

    def opponent_profiles(self, player: str) -> tuple[tuple[int, ...], ...]:
        return tuple(
            itertools.product(*(range(len(self.strategies(p))) for p in self.opponents(player)))
        )

    def join(self, player: str, own: int, others: tuple[int, ...]) -> tuple[int, ...]:
        pos = self.players.index(player)
        return others[:pos] + (own,) + others[pos:]

    def split(self, player: str, profile: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        pos = self.players.index(player)
        return profile[pos], profile[:pos] + profile[pos + 1 :]

    # ----------------------------------------------------------------- play
    def _move(self, node: Node, profile: tuple[int, ...]) -> list[tuple[str, Fraction]]:
        """Children reached from ``node`` under ``profile`` with probabilities."""
        chosen: dict[str, str] = {}
        for mover in node.movers:
            if mover == CHANCE:
                continue
            s = self.strategies(mover)[profile[self.players.index(mover)]]
            chosen[mover] = s[self.node_infoset[(mover, node.id)]]
        probs = dict(node.chance_probs)
        out = []
        for action_profile, child in node.children:
            p = Fraction(1)
            for mover, act in zip(node.movers, action_profile):
                if mover == CHANCE:
                    p *= probs[act]
                elif chosen[mover] != act:
                    p = Fraction(0)
                    break
            if p:
                out.append((child, p))
        return out

    @cached_property
    def _play(self) -> dict[tuple[int, ...], tuple[tuple[tuple[str, Fraction], ...], frozenset[str]]]:
        """profile -> (terminal distribution, visited nodes with positive probability)."""
        out = {}
        for profile in self.profiles:
            dist: dict[str, Fraction] = {}
            visited: set[str] = set()
            frontier = [(self.root, Fraction(1))]
            while frontier:
                nid, p = frontier.pop()
                visited.add(nid)
                node = self.nodes[nid]
                if node.is_terminal:
                    dist[nid] = dist.get(nid, Fraction(0)) + p
                    continue
                for child, q in self._move(node, profile):
                    frontier.append((child, p * q))
            out[profile] = (tuple(sorted(dist.items())), frozenset(visited))
        return out

    def terminal_distribution(self, profile: tuple[int, ...]) -> tuple[tuple[str, Fraction], ...]:
        return self._play[profile][0]

    @cached_property
    def profile_infosets(self) -> dict[tuple[int, ...], frozenset[str]]:
        out = {}
        for profile, (_, visited) in self._play.items():
            out[profile] = frozenset(
                iid
                for iid, info in self.info_sets.items()
                if any(m in visited for m in info.members)
            )
        return out

    @cached_property
    def payoff_table(self) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
        """Expected utility vector (chance integrated) for each pure profile."""
        out = {}
        for profile, (dist, _) in self._play.items():
            out[profile] = tuple(
                sum((p * self.nodes[z].payoff(pl) for z, p in dist), Fraction(0))
                for pl in self.players
            )
        return out

    @cached_property
    def _terminal_path_infosets(self) -> dict[str, frozenset[str]]:
        out = {}
        member_of: dict[str, list[str]] = {}
        for info in self.info_sets.values():
            for m in info.members:
                member_of.setdefault(m, []).append(info.id)
        for z in self.terminals:
            out[z] = frozenset(i for a in self.ancestors[z] for i in member_of.get(a, ()))
        return out

    def payoff_through(self, player: str, infoset: str, profile: tuple[int, ...]) -> Fraction:
        """``player``'s utility from terminal histories passing through ``infoset``.

        For profiles that reach the information set this is the expected
        utility conditional on reaching it, times the probability of reaching
        it; the scaling does not depend on ``player``'s own continuation, so it
        is the right quantity for comparing replacements.
        """
        key = (player, infoset, profile)
        cache = self._through_cache
        if key not in cache:
            through = self._terminal_path_infosets
            cache[key] = sum(
                (p * self.nodes[z].payoff(player) for z, p in self._play[profile][0] if infoset in through[z]),
                Fraction(0),
            )
        return cache[key]

    @cached_property
    def _through_cache(self) -> dict:
        return {}

    def reach_probability(self, infoset: str, profile: tuple[int, ...]) -> Fraction:
        """Probability that ``profile`` passes through ``infoset`` (chance integrated)."""
        through = self._terminal_path_infosets
        return sum((p for z, p in self._play[profile][0] if infoset in through[z]), Fraction(0))

    # ------------------------------------------------------------- reaching
    @cached_property
    def _reach_full(self) -> dict[str, frozenset[tuple[int, ...]]]:
        out: dict[str, set] = {i: set() for i in self.info_sets}
        for profile, isets in self.profile_infosets.items():
            for i in isets:
                out[i].add(profile)
        return {k: frozenset(v) for k, v in out.items()}

    def reaching_profiles(self, infoset: str) -> frozenset[tuple[int, ...]]:
        return self._reach_full[infoset]

    @cached_property
    def _reach_split(self) -> dict[tuple[str, str], tuple[frozenset[int], frozenset[tuple[int, ...]]]]:
        out = {}
        for player in self.players:
            for iid in self.info_sets:
                own, others = set(), set()
                for profile in self._reach_full[iid]:
                    s, t = self.split(player, profile)
                    own.add(s)
                    others.add(t)
                out[(player, iid)] = (frozenset(own), frozenset(others))
        return out

    def own_reach(self, player: str, infoset: str) -> frozenset[int]:
        """Indices of ``player``'s strategies that reach ``infoset``."""
        return self._reach_split[(player, infoset)][0]

    def opponent_reach(self, player: str, infoset: str) -> frozenset[tuple[int, ...]]:
        """Opponent profiles (of ``player``) that reach ``infoset``."""
        return self._reach_split[(player, infoset)][1]

    def _target_infoset(self, target: str) -> str | None:
        if target in self.info_sets:
            return target
        if target in self.nodes:
            return None
        raise KeyError(f"unknown target {target!r}")

    def reaches(self, who: str, what: Strategy | Mapping[str, Strategy], target: str) -> bool:
        """Whether a strategy or a partial profile reaches ``target``.

        ``who`` names the side: a player id when ``what`` is that player's
        strategy, or any label when ``what`` maps players to strategies.
        Unnamed players and chance are quantified existentially.  ``target``
        is an information set id or a node id.
        """
        if isinstance(what, Strategy):
            if what.owner != who:
                raise ValueError(f"strategy belongs to {what.owner!r}, not {who!r}")
            fixed = {who: what}
        else:
            fixed = dict(what)
        for p, s in fixed.items():
            if s.owner != p:
                raise ValueError(f"strategy for {p!r} belongs to {s.owner!r}")
        infoset = self._target_infoset(target)
        idx = {self.players.index(p): self.strategy_index(s) for p, s in fixed.items()}
        for profile, (_, visited) in self._play.items():
            if any(profile[k] != v for k, v in idx.items()):
                continue
            if infoset is not None:
                if infoset in self.profile_infosets[profile]:
                    return True
            elif target in visited:
                return True
        return False

    # -------------------------------------------------------------- outcomes
    def outcome(self, profile: Mapping[str, Strategy] | tuple[int, ...]) -> OutcomeSet:
        if not isinstance(profile, tuple):
            missing = set(self.players) - set(profile)
            if missing:
                raise ValueError(f"incomplete profile, missing {sorted(missing)}")
            profile = tuple(self.strategy_index(profile[p]) for p in self.players)
        dist = self._play[profile][0]
        terms = frozenset(z for z, _ in dist)
        return OutcomeSet(terms, {z: dict(self.nodes[z].payoffs) for z in terms})

    def outcomes(self, sets: Mapping[str, Iterable[Strategy]]) -> OutcomeSet:
        """Z(S') for the product of the given per-player strategy sets."""
        idx = [[self.strategy_index(s) for s in sets[p]] for p in self.players]
        terms: set[str] = set()
        for profile in itertools.product(*idx):
            terms.update(z for z, _ in self._play[profile][0])
        return OutcomeSet(frozenset(terms), {z: dict(self.nodes[z].payoffs) for z in terms})

    # ------------------------------------------------------- continuations
    def continuation(self, strategy: Strategy, at: str) -> dict[str, str]:
        """Restriction of ``strategy`` to its information sets weakly following ``at``."""
        return {
            i: a for i, a in zip(strategy.infosets, strategy.actions) if self.weakly_follows(i, at)
        }

    def continuation_key(self, player: str, index: int, at: str) -> tuple[str, ...]:
        key = (player, at)
        positions = self._cont_positions.get(key)
        if positions is None:
            positions = tuple(
                n for n, i in enumerate(self.player_infosets[player]) if self.weakly_follows(i, at)
            )
            self._cont_positions[key] = positions
        acts = self.strategies(player)[index].actions
        return tuple(acts[n] for n in positions)

    @cached_property
    def _cont_positions(self) -> dict:
        return {}

    def bracket(self, strategies: Iterable[Strategy] | Iterable[int], at: str, player: str | None = None) -> tuple[Strategy, ...]:
        """``[X_{i|at}]``: strategies whose continuation from ``at`` is that of some member of X.

        When the player has no information set weakly following ``at`` the
        result is all of the player's strategies.
        """
        items = list(strategies)
        if player is None:
            if not items or not isinstance(items[0], Strategy):
                raise ValueError("player must be given for index sets or empty sets")
            player = items[0].owner
        idx = [self.strategy_index(s) if isinstance(s, Strategy) else s for s in items]
        return tuple(self.strategies(player)[n] for n in self.bracket_indices(player, idx, at))

    def bracket_indices(self, player: str, indices: Iterable[int], at: str) -> tuple[int, ...]:
        conts = {self.continuation_key(player, n, at) for n in indices}
        n_all = len(self.strategies(player))
        if not conts or conts == {()}:
            return tuple(range(n_all))
        return tuple(n for n in range(n_all) if self.continuation_key(player, n, at) in conts)

    # ---------------------------------------------------------- normal form
    @cached_property
    def normal_form_game(self) -> Game:
        """The associated normal form as a one-shot simultaneous-move game."""
        return game_from_normal_form(self.to_normal_form(), name=self.name)

    def to_normal_form(self) -> NormalForm:
        return NormalForm(
            self.players,
            {p: tuple(s.label for s in self.strategies(p)) for p in self.players},
            dict(self.payoff_table),
        )

    # ----------------------------------------------------------------- rank
    def _require_perfect_information(self) -> None:
        for node in self.nodes.values():
            if node.is_terminal:
                continue
            if node.kind == "chance" or CHANCE in node.movers:
                raise PreconditionError("game has chance moves")
            if len(node.movers) != 1:
                raise PreconditionError(f"simultaneous moves at node {node.id!r}")
        for info in self.info_sets.values():
            if len(info.members) != 1:
                raise PreconditionError(f"information set {info.id!r} is not a singleton")

    @cached_property
    def _ranks(self) -> dict[str, int]:
        ranks: dict[str, int] = {}
        for nid in reversed(self.preorder):
            node = self.nodes[nid]
            if node.is_terminal:
                ranks[nid] = 0
            else:
                ranks[nid] = 1 + max(ranks[c] for _, c in node.children)
        return ranks

    def subgame_rank(self, node: str) -> int:
        """Maximal number of decision nodes on a path from ``node`` to a terminal."""
        self._require_perfect_information()
        if node not in self.nodes:
            raise KeyError(f"unknown node {node!r}")
        if self.nodes[node].is_terminal:
            raise PreconditionError(f"{node!r} is terminal")
        return self._ranks[node]

    def __repr__(self) -> str:
        return f"Game({self.name or 'unnamed'!r}, players={list(self.players)}, nodes={len(self.nodes)})"


@dataclass(frozen=True)
class NormalForm:
    """Strategic form: labels per player and a payoff vector per pure profile."""

    players: tuple[str, ...]
    labels: Mapping[str, tuple[str, ...]]
    payoffs: Mapping[tuple[int, ...], tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "players", tuple(self.players))

    @classmethod
    def from_matrix(
        cls,
        rows: Sequence[str],
        cols: Sequence[str],
        cells: Sequence[Sequence[tuple[Any, Any]]],
        players: tuple[str, str] = ("1", "2"),
    ) -> NormalForm:
        payoffs = {
            (r, c): (Fraction(cells[r][c][0]), Fraction(cells[r][c][1]))
            for r in range(len(rows))
            for c in range(len(cols))
        }
        return cls(players, {players[0]: tuple(rows), players[1]: tuple(cols)}, payoffs)

    def size(self, player: str) -> int:
        return len(self.labels[player])

    def opponents(self, player: str) -> tuple[str, ...]:
        return tuple(p for p in self.players if p != player)

    def opponent_profiles(self, player: str) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(self.size(p)) for p in self.opponents(player))))

    def join(self, player: str, own: int, others: tuple[int, ...]) -> tuple[int, ...]:
        pos = self.players.index(player)
        return others[:pos] + (own,) + others[pos:]

    def utility(self, player: str, own: int, others: tuple[int, ...]) -> Fraction:
        return self.payoffs[self.join(player, own, others)][self.players.index(player)]

    def rescaled(self, player: str, scale: Fraction, shift: Fraction) -> NormalForm:
        k = self.players.index(player)
        payoffs = {
            prof: tuple(v * scale + shift if n == k else v for n, v in enumerate(vec))
            for prof, vec in self.payoffs.items()
        }
        return NormalForm(self.players, self.labels, payoffs)


def game_from_normal_form(nf: NormalForm, name: str = "") -> Game:
    """One simultaneous-move node whose actions are the normal-form strategies."""
    nodes = []
    children = []
    for profile, vec in sorted(nf.payoffs.items()):
        tid = "z" + "_".join(str(k) for k in profile)
        nodes.append(Node(tid, "terminal", payoffs=tuple(zip(nf.players, vec))))
        labels = tuple(nf.labels[p][k] for p, k in zip(nf.players, profile))
        children.append((labels, tid))
    nodes.insert(0, Node("root", "decision", nf.players, tuple(children)))
    return Game(nf.players, nodes, (), "root", name=name)


# ---------------------------------------------------------------- validation
def validate_game(game: Game) -> list[Violation]:
    """Check tree shape, information sets, chance, payoffs and perfect recall.

    Returns an empty list for a valid game.
    """
    out: list[Violation] = []
    parents = game._parent_lists
    for nid, plist in parents.items():
        if nid == game.root and plist:
            out.append(Violation("tree", "root has a parent", (nid,)))
        elif nid != game.root and len(plist) != 1:
            what = "unreachable node" if not plist else "node has several parents"
            out.append(Violation("tree", what, (nid, *plist)))
    if out:
        return out
    if len(game.preorder) != len(game.nodes):
        missing = sorted(set(game.nodes) - set(game.preorder))
        return [Violation("tree", "nodes not reachable from root (cycle?)", tuple(missing))]

    for node in game.nodes.values():
        if node.is_terminal:
            have = {p for p, _ in node.payoffs}
            if have != set(game.players):
                out.append(Violation("payoffs", "terminal payoffs must name every player", (node.id,)))
            continue
        if not node.movers:
            out.append(Violation("movers", "decision node without movers", (node.id,)))
            continue
        if node.kind == "chance" and tuple(node.movers) != (CHANCE,):
            out.append(Violation("chance", "chance node must have chance as its only mover", (node.id,)))
        for mover in node.movers:
            if mover != CHANCE and mover not in game.players:
                out.append(Violation("movers", f"unknown mover {mover!r}", (node.id,)))
        per_mover = [node.actions_of(m) for m in node.movers]
        expected = set(itertools.product(*per_mover))
        keys = [profile for profile, _ in node.children]
        if len(keys) != len(set(keys)) or set(keys) != expected:
            out.append(Violation("actions", "children must be keyed by every action profile exactly once", (node.id,)))
        if CHANCE in node.movers:
            probs = dict(node.chance_probs)
            if set(probs) != set(node.actions_of(CHANCE)):
                out.append(Violation("chance", "chance probabilities must cover chance actions", (node.id,)))
            elif any(p <= 0 for p in probs.values()) or sum(probs.values()) != 1:
                out.append(Violation("chance", "chance probabilities must be positive and sum to 1", (node.id,)))
        elif node.chance_probs:
            out.append(Violation("chance", "chance probabilities on a node where chance does not move", (node.id,)))

    seen: dict[tuple[str, str], list[str]] = {}
    for info in game.info_sets.values():
        for m in info.members:
            seen.setdefault((info.player, m), []).append(info.id)
            node = game.nodes[m]
            if info.player not in node.movers:
                out.append(Violation("infoset", f"{info.player!r} does not move at member of {info.id!r}", (m,)))
    for (player, m), ids in seen.items():
        if len(ids) > 1:
            out.append(Violation("infoset", f"node in several information sets of {player!r}", (m,)))
    for info in game.info_sets.values():
        movable = [m for m in info.members if info.player in game.nodes[m].movers]
        actions = {game.nodes[m].actions_of(info.player) for m in movable}
        if len(actions) > 1:
            out.append(Violation("infoset", f"action sets differ within {info.id!r}", info.members))
    if out:
        return out
    out.extend(_perfect_recall_violations(game))
    return out


def _own_history(game: Game, player: str, node: str) -> tuple[tuple[str, str], ...]:
    hist = []
    cur = node
    while game.parent[cur] is not None:
        par, profile = game.parent[cur]
        pnode = game.nodes[par]
        if player in pnode.movers:
            act = profile[pnode.movers.index(player)]
            hist.append((game.node_infoset[(player, par)], act))
        cur = par
    return tuple(reversed(hist))


def _perfect_recall_violations(game: Game) -> list[Violation]:
    out = []
    for info in game.info_sets.values():
        histories = {m: _own_history(game, info.player, m) for m in info.members}
        if len(set(histories.values())) > 1:
            out.append(
                Violation(
                    "perfect-recall",
                    f"player {info.player!r} cannot recall own past at {info.id!r}",
                    info.members,
                )
            )
    return out


def is_valid(game: Game) -> bool:
    return not validate_game(game)


# ------------------------------------------------------------------ parsing
def _reject_unknown(raw: Mapping[str, Any], allowed: set[str], what: str) -> None:
    if not isinstance(raw, Mapping):
        raise GameFormatError(f"{what} must be an object")
    extra = set(raw) - allowed
    if extra:
        raise GameFormatError(f"{what} has unknown fields: {sorted(extra)}")


def _parse_node(raw: Mapping[str, Any]) -> Node:
    _reject_unknown(raw, {"id", "kind", "movers", "actions", "chance_probs", "payoffs"}, "node")
    if "id" not in raw or "kind" not in raw:
        raise GameFormatError("node needs 'id' and 'kind'")
    nid, kind = str(raw["id"]), raw["kind"]
    if kind == "terminal":
        if "payoffs" not in raw:
            raise GameFormatError(f"terminal node {nid!r} lacks payoffs")
        payoffs = tuple((str(p), parse_rational(v)) for p, v in raw["payoffs"].items())
        return Node(nid, "terminal", payoffs=payoffs)
    movers = tuple(str(m) for m in raw.get("movers", [CHANCE] if kind == "chance" else []))
    children = []
    for act in raw.get("actions", []):
        _reject_unknown(act, {"profile", "child"}, f"action of node {nid!r}")
        profile = act["profile"]
        if isinstance(profile, Mapping):
            if set(profile) != set(movers):
                raise GameFormatError(f"node {nid!r}: action profile must name exactly the movers")
            key = tuple(str(profile[m]) for m in movers)
        elif isinstance(profile, str) and len(movers) == 1:
            key = (profile,)
        else:
            key = tuple(str(a) for a in profile)
            if len(key) != len(movers):
                raise GameFormatError(f"node {nid!r}: profile length differs from movers")
        children.append((key, str(act["child"])))
    probs = tuple((str(a), parse_rational(p)) for a, p in raw.get("chance_probs", {}).items())
    return Node(nid, kind, movers, tuple(children), probs)
