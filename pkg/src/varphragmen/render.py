"""Display rendering: fixed-decimal cells, plain-text tables, JSON payloads.

Underlying values stay exact; only the presentation rounds, using
half-to-even at the requested number of decimals (default 4, the precision
used throughout the trace tables).
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from typing import Sequence

from .model import (
    ElectionResult,
    Profile,
    Rational,
    rational_str,
    render_profile,
)


def decimal_str(value: Rational, decimals: int = 4) -> str:
    """Render a value with a fixed number of decimals, rounding half-to-even."""
    if decimals < 1:
        raise ValueError("decimals must be >= 1")
    quantum = decimal.Decimal(1).scaleb(-decimals)
    with decimal.localcontext() as ctx:
        ctx.prec = decimals + 30
        if isinstance(value, Fraction):
            d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
        else:
            d = decimal.Decimal(value)
        return str(d.quantize(quantum, rounding=decimal.ROUND_HALF_EVEN))


def type_label(profile: Profile, index: int) -> str:
    t = profile.types[index]
    return f"{rational_str(t.weight)} : {', '.join(t.approvals)}"


def render_table(rows: Sequence[Sequence[str]], right_align_from: int = 2) -> str:
    """Fixed-width table; first columns left-aligned, numeric columns right."""
    if not rows:
        return ""
    width = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [
            cell.ljust(width[i]) if i < right_align_from else cell.rjust(width[i])
            for i, cell in enumerate(row)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def election_json(
    profile: Profile,
    result: ElectionResult,
    *,
    backend: str,
    decimals: int = 4,
) -> dict:
    """JSON payload carrying both exact rationals and decimal renderings.

    The profile text is embedded so the payload is a self-contained
    reproduction of the run.
    """
    records = []
    for rec in result.records:
        sol = rec.solution
        records.append(
            {
                "seat": rec.seat_index,
                "winner": sol.candidate,
                "x": [rational_str(v) for v in sol.x],
                "x_display": [decimal_str(v, decimals) for v in sol.x],
                "level": rational_str(sol.level),
                "level_display": decimal_str(sol.level, decimals),
                "score": rational_str(sol.score),
                "score_display": decimal_str(sol.score, decimals),
                "corrected": sol.corrected,
                "tied": list(rec.tied_with),
                "loads_after": [rational_str(v) for v in rec.loads_after.values],
                "variance_after": rational_str(rec.variance_after),
            }
        )
    return {
        "method": result.method.value,
        "mode": result.mode.value,
        "seats": len(result.records),
        "backend": backend,
        "profile": render_profile(profile),
        "records": records,
        "counts": {name: result.seat_counts.get(name, 0) for name in profile.candidates},
    }
