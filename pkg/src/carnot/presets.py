"""Embedded presets: the rank-3 reduction strata and flow starting points."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .lie import GradedAlgebra
from .orbits import Stratum
from .poly import Point

# Rank-3 stratum where the third reduced row vanishes: x313 = x323 = 0 and the
# dependent word x312 = x213 - x123 collapses, identifying x123 with x213.
RANK3_STRATUM = {
    "set_zero": ["x313", "x323"],
    "identify": [["x123", "x213"]],
    "witness_point": {"x112": "1", "x212": "2", "x113": "3", "x213": "5", "x223": "7"},
}

# Same stratum with a degenerate bordered matrix D: additionally
# x123 = x213 = x223 = 0, leaving Ker D spanned by the x23 direction.
RANK3_STRATUM_DEGENERATE = {
    "set_zero": ["x313", "x323", "x123", "x213", "x223"],
    "witness_point": {"x112": "1", "x212": "2", "x113": "3"},
}

STRATA = {
    "example-5.1": (3, 3, RANK3_STRATUM),
    "example-5.1-degenerate": (3, 3, RANK3_STRATUM_DEGENERATE),
}

FLOW_POINTS = {
    # rank-2 step-3 orbit where the first layer traces a circle of period 2*pi
    "cartan-circle": (2, 3, {"x1": "1", "x12": "1"}),
    # all bracket coordinates vanish: the vertical field is identically zero
    "zero-bracket": (2, 3, {"x1": "1", "x2": "2"}),
}


def stratum_preset(alg: GradedAlgebra, name: str) -> Stratum:
    if name not in STRATA:
        raise InputError(f"unknown stratum preset {name!r}")
    r, s, data = STRATA[name]
    if (alg.r, alg.s) != (r, s):
        raise InputError(f"preset {name!r} needs rank {r}, step {s}")
    return Stratum.from_dict(alg, data, description=name)


def flow_point_preset(alg: GradedAlgebra, name: str) -> Point:
    if name not in FLOW_POINTS:
        raise InputError(f"unknown flow preset {name!r}")
    r, s, data = FLOW_POINTS[name]
    if (alg.r, alg.s) != (r, s):
        raise InputError(f"preset {name!r} needs rank {r}, step {s}")
    return Point.from_dict(alg, {k: Fraction(v) for k, v in data.items()})
