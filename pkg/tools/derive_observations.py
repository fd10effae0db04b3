"""Regenerate the bundled observation files from published consistency shares.

The raw session data are not redistributed.  Each file below is the smallest
distribution over observed paths that reproduces the published percentages
for the strong level-k and strong rationalizability columns.  Each
percentage is the share of a union of paths, so the path weights come from
differences of published shares.  Responder rows are conditional on the
responder's move being reached.

    python3 tools/derive_observations.py
"""
from __future__ import annotations

from fractions import Fraction as F
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "efsolve" / "corpus" / "observations"


def pct(x: str) -> F:
    return F(x) / 100


def cooper():
    # Row: {Out} is 20%; {(In, 2)} is 78%; {Out, (In, 2)} is 98%.
    out, in2 = pct("20"), pct("78")
    # Column: {1} is 92% and {2} is 8%.
    c1 = pct("92")
    return [
        ("row", "O", out),
        ("row", "In/2", in2),
        ("row", "In/1", 1 - out - in2),
        ("column", "1", c1),
        ("column", "2", 1 - c1),
    ]


def bn():
    # Player 1: {Out} is 88%; {Out, (In, L)} is 90.2%; {(In, L)} alone is 2.2%,
    # which prints as 2%.
    out, in_l = pct("88"), pct("90.2") - pct("88")
    # Player 2: {r} is 43%; {l} is 57%.
    r = pct("43")
    return [
        ("1", "Out", out),
        ("1", "In/L", in_l),
        ("1", "In/R", 1 - out - in_l),
        ("2", "r", r),
        ("2", "l", 1 - r),
    ]


def er():
    # Player 1: {Out} is 62%; {(In, L)} is 36%; {Out, (In, L)} is 98%.
    out, in_l = pct("62"), pct("36")
    # Player 2: {R} is 22%; {L} is 78%.
    r = pct("22")
    return [
        ("1", "Out", out),
        ("1", "In/L", in_l),
        ("1", "In/R", 1 - out - in_l),
        ("2", "R", r),
        ("2", "L", 1 - r),
    ]


def write(name: str, rows) -> Path:
    lines = ["role,path,weight"] + [f"{role},{path},{w}" for role, path, w in rows]
    path = OUT / f"{name}.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, rows in (("cooper", cooper()), ("bn", bn()), ("er", er())):
        print(write(name, rows))


if __name__ == "__main__":
    main()
