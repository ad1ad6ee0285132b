"""Rank-one-generated spectrahedral cones.

Thin layer over the C++ core. Structured results come back as dicts with the
same schemas as the ``rog`` command-line tool.
"""

import json

from . import _core
from ._core import (
    Cone,
    RogError,
    classify,
    codim1_cone,
    chordal_cone,
    congruence,
    cross_ratio,
    cross_ratio_cone,
    degree,
    diagonal_cone,
    direct_sum,
    full_extension,
    full_psd_cone,
    hankel_cone,
    intertwine,
    is_simple,
    isolated_rays,
    membership,
    same_s4_orbit,
    ternary_quartic_cone,
    tridiag_cone,
)

__all__ = [
    "Cone",
    "RogError",
    "build",
    "classify",
    "codim1_cone",
    "chordal_cone",
    "cone_from_json",
    "cones_isomorphic",
    "congruence",
    "cross_ratio",
    "cross_ratio_cone",
    "decompose",
    "degree",
    "diagonal_cone",
    "direct_sum",
    "full_extension",
    "full_psd_cone",
    "hankel_cone",
    "intertwine",
    "is_simple",
    "isolated_rays",
    "membership",
    "pencil_decompose",
    "rank1_complete",
    "same_s4_orbit",
    "solve_qcqp",
    "ternary_quartic_cone",
    "tridiag_cone",
]


def build(expr):
    """Build a cone from an expression tree (dict or JSON text)."""
    return _core.build(expr if isinstance(expr, str) else json.dumps(expr))


def cone_from_json(doc):
    return _core.cone_from_json(doc if isinstance(doc, str) else json.dumps(doc))


def decompose(cone, x, method="auto"):
    return _core.decompose(cone, x, method)


def cones_isomorphic(a, b, max_candidates=10000):
    return json.loads(_core.cones_isomorphic(a, b, max_candidates))


def rank1_complete(shape, entries, signs=False):
    """``entries`` is an iterable of (i, j, value)."""
    rows, cols = shape
    return json.loads(_core.rank1_complete(rows, cols, list(entries), signs))


def pencil_decompose(q1, q2):
    return json.loads(_core.pencil_decompose(q1, q2))


def solve_qcqp(S, B, A=(), samples=100000, seed=0x5EED0C9C0001):
    return json.loads(_core.solve_qcqp(S, B, list(A), samples, seed))
