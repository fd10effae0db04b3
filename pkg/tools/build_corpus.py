"""Regenerate src/efsolve/corpus/{games/*.json,index.json}.

Payoffs are written out here once; tables.json holds the published
solution tables in cell notation.  Run from the repository root:

    python3 tools/build_corpus.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from efsolve.build import build, leaf, move, simultaneous  # noqa: E402
from efsolve.corpus import bos_outside_option  # noqa: E402

OUT = ROOT / "src" / "efsolve" / "corpus"
NOTE = "figure payoffs not available as text; values chosen to reproduce the printed tables"


def centipede(o1, o2, p1, p2, end, name):
    # four moves; capital letters for the first pair, lower case for the second
    return build(
        ["1", "2"],
        move("1", {
            "O1": leaf(*o1),
            "C1": move("2", {
                "O2": leaf(*o2),
                "C2": move("1", {"o1": leaf(*p1), "c1": move("2", {"o2": leaf(*p2), "c2": leaf(*end)})}),
            }),
        }),
        name=name,
    )


def hms():
    # player 2 does not observe player 1's first move
    return build(
        ["1", "2"],
        move("1", {
            "O1": move("2", {"O2": leaf(4, 2), "C2": leaf(7, 3)}, infoset="J"),
            "C1": move("2", {
                "O2": leaf(4, 2),
                "C2": move("1", {"o1": leaf(5, -10), "c1": move("2", {"o2": leaf(8, 3), "c2": leaf(6, 3)})}),
            }, infoset="J"),
        }),
        name="hms",
    )


def hms2(be2, name):
    return build(
        ["1", "2"],
        move("1", {
            "a": leaf(3, 2),
            "b": move("2", {"d": leaf(2, 8), "e": leaf(1, be2), "f": leaf(7, 2)}, infoset="J"),
            "c": move("2", {"d": leaf(0, 3), "e": leaf(3, 8), "f": leaf(0, 4)}, infoset="J"),
        }),
        name=name,
    )


def outside_option(out, acts1, acts2, cells, name, out_label="Out"):
    sub = simultaneous(["1", "2"], {(a, b): leaf(*cells[a, b]) for a in acts1 for b in acts2})
    return build(["1", "2"], move("1", {out_label: leaf(*out), "In": sub}), name=name)


def matching_pennies():
    cells = {("U", "L"): (2, -1), ("U", "R"): (-1, 2), ("D", "L"): (-1, 1), ("D", "R"): (1, -1)}
    return build(["1", "2"], simultaneous(["1", "2"], {k: leaf(*v) for k, v in cells.items()}), name="matching-pennies-variant")


def entries():
    yield "reny", "Reny (1992) Game", centipede((4, 0), (0, 2), (3, 1), (2, 4), (6, 3), "reny"), {}
    yield "hms", "HMS Game", hms(), {}
    yield "centipede", "Centipede game", centipede((4, 1), (2, 8), (16, 4), (8, 32), (64, 16), "centipede"), {}
    yield "bos1", "Battle-of-the-sexes with an outside option I", bos_outside_option(3, name="bos1"), {}
    yield "bos2", "Battle-of-the-sexes with an outside option II", bos_outside_option(2, name="bos2"), {}
    yield "bos3", "Battle-of-the-sexes with an outside option III", bos_outside_option(
        100, bb=(600, 200), ss=(200, 600), name="bos3"), {}
    yield "hms2", "HMS2 Game", hms2(2, "hms2"), {}
    yield "hms3", "HMS2 Game, player 2's payoff at (b, e) raised from 2 to 3", hms2(3, "hms3"), {}
    coop = {("1", "1"): (0, 0), ("1", "2"): (200, 600), ("2", "1"): (600, 200), ("2", "2"): (0, 0)}
    yield "cooper", "Game used by Cooper et al. (1993)", outside_option(
        (300, 0), "12", "12", coop, "cooper", out_label="O"), {"row": "1", "column": "2"}
    bn = {("L", "l"): (9, 3), ("L", "r"): (0, 0), ("R", "l"): (0, 0), ("R", "r"): (6, 6)}
    yield "bn", "Game used by Balkenborg and Nagel (2016)", outside_option((7, 0), "LR", "lr", bn, "bn"), {}
    er = {("L", "L"): (5, 1), ("L", "R"): (0, 0), ("R", "L"): (0, 0), ("R", "R"): (1, 5)}
    yield "er", "Game used by Evdokimov and Rustichini (2016)", outside_option((3, 0), "LR", "LR", er, "er"), {}
    yield "matching-pennies-variant", "Matching-pennies variant", matching_pennies(), {}


def main() -> None:
    tables = json.loads((Path(__file__).parent / "tables.json").read_text(encoding="utf-8"))
    (OUT / "games").mkdir(parents=True, exist_ok=True)
    index = []
    for gid, caption, game, roles in entries():
        game.caption = caption
        file = f"{gid}.json"
        (OUT / "games" / file).write_text(json.dumps(game.to_dict(), indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        doc = {"id": gid, "file": file, "caption": caption}
        if gid not in ("matching-pennies-variant", "bos1", "bos2"):
            doc["note"] = NOTE
        if roles:
            doc["roles"] = roles
        if gid == "matching-pennies-variant":
            doc["matrix"] = {
                "rows": ["U", "D"],
                "cols": ["L", "R"],
                "cells": [[["2", "-1"], ["-1", "2"]], [["-1", "1"], ["1", "-1"]]],
            }
        doc["expected"] = tables.get(gid, {})
        index.append(doc)
    (OUT / "index.json").write_text(json.dumps({"games": index}, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {len(index)} games to {OUT}")


if __name__ == "__main__":
    main()
