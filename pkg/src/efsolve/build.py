"""Compact constructors for game trees.

>>> g = build(["1", "2"], move("1", {"Out": leaf(2, 0), "In": move("2", {"l": leaf(3, 1), "r": leaf(0, 0)})}))
>>> [s.label for s in g.strategies("1")]
['Out', 'In']
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .game import CHANCE, Game, InfoSet, Node


@dataclass(frozen=True)
class _Leaf:
    payoffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class _Move:
    movers: tuple[str, ...]
    branches: tuple[tuple[tuple[str, ...], Any], ...]
    infosets: tuple[str | None, ...]
    probs: tuple[tuple[str, Fraction], ...] = ()


def leaf(*payoffs: Any) -> _Leaf:
    return _Leaf(tuple(Fraction(p) for p in payoffs))


def move(player: str, branches: Mapping[str, Any], infoset: str | None = None) -> _Move:
    """A single mover choosing among ``branches``; equal ``infoset`` labels share an information set."""
    return _Move((player,), tuple(((a,), t) for a, t in branches.items()), (infoset,))


def simultaneous(players: Sequence[str], branches: Mapping[tuple[str, ...], Any], infosets: Sequence[str | None] | None = None) -> _Move:
    players = tuple(players)
    return _Move(players, tuple((tuple(k), t) for k, t in branches.items()), tuple(infosets or (None,) * len(players)))


def chance(branches: Mapping[str, tuple[Any, Any]]) -> _Move:
    """Nature picks each branch with the given probability."""
    return _Move(
        (CHANCE,),
        tuple(((a,), t) for a, (_, t) in branches.items()),
        (None,),
        tuple((a, Fraction(p)) for a, (p, _) in branches.items()),
    )


def build(players: Sequence[str], tree: Any, *, name: str = "", caption: str = "") -> Game:
    nodes: list[Node] = []
    groups: dict[str, tuple[str, list[str]]] = {}

    def walk(t: Any, nid: str) -> None:
        if isinstance(t, _Leaf):
            if len(t.payoffs) != len(players):
                raise ValueError(f"leaf {nid} needs {len(players)} payoffs")
            nodes.append(Node(nid, "terminal", payoffs=tuple(zip(players, t.payoffs))))
            return
        kind = "chance" if t.movers == (CHANCE,) else "decision"
        children = []
        for profile, sub in t.branches:
            cid = nid + "." + "+".join(profile)
            children.append((profile, cid))
        nodes.append(Node(nid, kind, t.movers, tuple(children), t.probs))
        for mover, label in zip(t.movers, t.infosets):
            if mover != CHANCE and label is not None:
                groups.setdefault(label, (mover, []))[1].append(nid)
        for (profile, sub), (_, cid) in zip(t.branches, children):
            walk(sub, cid)

    walk(tree, "r")
    infos = [InfoSet(label, player, tuple(members)) for label, (player, members) in groups.items()]
    return Game(players, nodes, infos, "r", name=name, caption=caption)
