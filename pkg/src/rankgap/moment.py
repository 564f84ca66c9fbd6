"""Quadratic systems to pseudo-moment subspaces, over any finite field.

The direct construction: given a system of degree-at-most-2 polynomials
f_1..f_m over x_1..x_n and a target rank gap k, take coordinates over
V_{n,2d} with d = k and impose one localizing row per equation and
shifting set W of size at most 2d-2:

    sum over U in supp(f)  of  c_{f,U} * y_{U union W}  =  0.

For the honest vector of a point a the row value collapses to a^W * f(a),
so common zeros give members whose expanded matrix has rank one.  Rows
whose coefficients cancel entirely are kept as empty rows so the count
m * |V_{n,2d-2}| stays exact.
"""

from __future__ import annotations

import math

from .boolalg import basis_make
from .errors import PreconditionError
from .frontends import QuadSystemSource
from .subspace import SubspaceSpec

__all__ = [
    "build_moment_subspace",
    "localizing_row_count",
]


def localizing_row_count(n: int, m: int, d: int) -> int:
    return m * sum(math.comb(n, j) for j in range(0, min(2 * d - 2, n) + 1))


def build_moment_subspace(
    src: QuadSystemSource,
    k: int,
    degree: int | None = None,
    provenance: dict | None = None,
) -> SubspaceSpec:
    """The pseudo-moment subspace of a quadratic system at rank gap k.

    The matrix degree is k unless overridden; an override is stamped into
    the provenance since only d = k carries the intended gap guarantee.
    """
    if k < 1:
        raise PreconditionError(f"the rank gap target must be at least 1, got {k}")
    d = k if degree is None else degree
    if d < 1:
        raise PreconditionError(f"the matrix degree must be at least 1, got {d}")
    n = src.n
    coords = basis_make(n, 2 * d, "V")
    shifts = basis_make(n, 2 * d - 2, "V")
    field = src.field
    rows = []
    for f in src.equations:
        for w in shifts.masks:
            acc: dict[int, int] = {}
            for mask, coeff in f.coeffs.items():
                pos = coords.rank(mask | w)
                c = field.add(acc.get(pos, 0), coeff)
                if c:
                    acc[pos] = c
                else:
                    acc.pop(pos, None)
            rows.append(tuple(sorted(acc.items())))
    if len(rows) != localizing_row_count(n, src.m, d):
        raise AssertionError("localizing row enumeration drifted from the formula")
    base = {
        "construction": "direct",
        "n": n,
        "m": src.m,
        "k": k,
        "d": d,
    }
    if d != k:
        base["degree_override"] = True
    base.update(provenance or {})
    return SubspaceSpec(
        field=field,
        coords=coords,
        index=basis_make(n, d, "V"),
        rows=tuple(rows),
        provenance=base,
    )
