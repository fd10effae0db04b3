"""Collects one line per acceptance criterion for the terminal summary."""

LINES: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    LINES[number] = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
