"""From 3SAT to matrix subspaces over characteristic two.

The pipeline has three stops.  A CNF formula first becomes a constant-free
polynomial system: every clause polynomial and every booleanity polynomial,
multiplied by all monomials of low enough degree so the products stay
within degree d.  That system linearizes into a quadratic system over one
variable per monomial index set, with multiplicativity equations tying
products of monomial variables to the variable of the union set.  Finally
the quadratic system becomes a linear subspace of symmetric matrices in
quotient coordinates; the multiplicativity equations cancel identically
there (the quotient ties the two sides together entry by entry), which is
asserted and then dropped.

Two soundness-facing utilities live here as well: the decomposition of a
low-rank member into a family of assignments that satisfies every
quadratic equation in superposition, and the lower bound on the rank of a
nonzero member read off its first nonzero coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .boolalg import MonomialBasis, SquarefreePoly, basis_make
from .errors import InternalConsistencyError, PreconditionError
from .frontends import CnfFormula, booleanity_polynomial, clause_polynomial
from .gfarith import FieldSpec, make_field
from .gflinalg import symmetric_rank_one_decomposition
from .subspace import PseudoMomentVector, SubspaceSpec

__all__ = [
    "ConstantFreeSystem",
    "QuadEquation",
    "MonomialQuadSystem",
    "DegreeChoice",
    "SuperpositionWitness",
    "RankCertificate",
    "choose_degree",
    "degree_regime",
    "build_constant_free_system",
    "build_monomial_quad_system",
    "build_matrix_subspace",
    "low_rank_to_superposition",
    "rank_certificate",
]

_GF2 = make_field(2)


# -- degree selection ---------------------------------------------------------


def degree_regime(d: int, k0: int) -> str:
    """"faithful" when d meets every soundness-side requirement for a rank
    gap of k0, "relaxed" otherwise (structure and completeness hold either
    way)."""
    if d >= 8 and d % 4 == 0 and math.comb(d + 1, (d + 1) // 2) > k0:
        return "faithful"
    return "relaxed"


@dataclass(frozen=True)
class DegreeChoice:
    """Degree selection for a target rank gap k over GF(2^r).

    k0 = r*k is the gap after descending to GF(2); t = floor(3*k0/2) bounds
    the number of assignments a rank-k0 member can decompose into; d is the
    smallest multiple of 4 that is at least max{8, c*log2(t+1)} and has
    C(d+1, floor((d+1)/2)) > k0.  c is a configured soundness constant, not
    derived from anything.
    """

    k: int
    r: int
    c: float
    k0: int
    t: int
    d: int

    @property
    def regime(self) -> str:
        return degree_regime(self.d, self.k0)


def choose_degree(k: int, r: int = 1, c: float = 4.0) -> DegreeChoice:
    if k < 1 or r < 1:
        raise PreconditionError(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    if not c > 0:
        raise PreconditionError(f"the soundness constant must be positive, got {c}")
    k0 = r * k
    t = 3 * k0 // 2
    lower = max(8.0, c * math.log2(t + 1))
    d = 4 * math.ceil(lower / 4)
    while math.comb(d + 1, (d + 1) // 2) <= k0:
        d += 4
    return DegreeChoice(k=k, r=r, c=c, k0=k0, t=t, d=d)


# -- the constant-free polynomial system --------------------------------------


@dataclass(frozen=True)
class ConstantFreeSystem:
    """Degree-at-most-d polynomials over GF(2) in x_0..x_n, none of which
    carries a constant term."""

    n: int
    d: int
    equations: tuple[SquarefreePoly, ...]

    def __post_init__(self):
        for k, f in enumerate(self.equations):
            if f.field != _GF2:
                raise PreconditionError(f"equation {k} is not over GF(2)")
            if f.constant_term() != 0:
                raise InternalConsistencyError(
                    f"equation {k} has a constant term"
                )
            if f.degree > self.d:
                raise InternalConsistencyError(
                    f"equation {k} has degree {f.degree} > {self.d}"
                )
            for mask in f.coeffs:
                if mask >> (self.n + 1):
                    raise PreconditionError(
                        f"equation {k} mentions a variable beyond x{self.n}"
                    )


def _low_degree_masks(n: int, limit: int) -> list[int]:
    """All subsets of {0..n} of size <= limit, smallest first, lex within a
    size.  The empty set is included: multiplying by it keeps the original
    equation."""
    out = []
    for size in range(0, min(limit, n + 1) + 1):
        for combo in combinations(range(n + 1), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            out.append(mask)
    return out


def expected_equation_count(n: int, m: int, d: int) -> int:
    clause_multipliers = sum(math.comb(n + 1, j) for j in range(0, d - 2))
    bool_multipliers = sum(math.comb(n + 1, j) for j in range(0, d - 1))
    return m * clause_multipliers + n * bool_multipliers


def build_constant_free_system(cnf: CnfFormula, d: int) -> ConstantFreeSystem:
    """Clause polynomials shifted by all monomials of degree <= d-3, then
    booleanity polynomials shifted by all monomials of degree <= d-2, in
    that order, clause-major then variable-major.

    d >= 3 is accepted; instances with d < 8 or d not a multiple of 4 only
    carry the completeness direction (see degree_regime).
    """
    if d < 3:
        raise PreconditionError(f"degree {d} leaves no room for clause polynomials")
    n = cnf.n
    equations: list[SquarefreePoly] = []
    clause_shifts = _low_degree_masks(n, d - 3)
    for clause in cnf.clauses:
        p = clause_polynomial(clause, n)
        for mask in clause_shifts:
            equations.append(p.shift(mask))
    bool_shifts = _low_degree_masks(n, d - 2)
    for i in range(1, n + 1):
        b = booleanity_polynomial(i, n)
        for mask in bool_shifts:
            equations.append(b.shift(mask))
    if len(equations) != expected_equation_count(n, cnf.m, d):
        raise InternalConsistencyError(
            f"built {len(equations)} equations, the count formula says "
            f"{expected_equation_count(n, cnf.m, d)}"
        )
    return ConstantFreeSystem(n=n, d=d, equations=tuple(equations))


# -- linearization ------------------------------------------------------------


@dataclass(frozen=True)
class QuadEquation:
    """One equation over monomial variables: sum of coeff*u_S*u_T over quad
    plus sum of coeff*u_R over linear, equated to zero in GF(2).  Masks are
    monomial index sets; quad pairs are stored with mask_s first in basis
    order."""

    quad: tuple[tuple[int, int, int], ...]
    linear: tuple[tuple[int, int], ...]

    def value(self, assignment, basis: MonomialBasis) -> int:
        """Evaluate at a 0/1 assignment indexed by basis position."""
        acc = 0
        for mask_s, mask_t, coeff in self.quad:
            acc ^= coeff & assignment[basis.rank(mask_s)] & assignment[basis.rank(mask_t)]
        for mask, coeff in self.linear:
            acc ^= coeff & assignment[basis.rank(mask)]
        return acc


@dataclass(frozen=True)
class MonomialQuadSystem:
    """The linearized system: one variable per index set in U_{n,d}.

    linearized holds the images of the constant-free equations (monomials
    replaced by their variables); multiplicativity holds u_S*u_T = u_{S
    union T} for every unordered pair, diagonal included, whose union stays
    within degree d.
    """

    n: int
    d: int
    basis: MonomialBasis
    linearized: tuple[QuadEquation, ...]
    multiplicativity: tuple[QuadEquation, ...]

    @property
    def equations(self) -> tuple[QuadEquation, ...]:
        return self.linearized + self.multiplicativity

    def superposition_value(self, eq: QuadEquation, vectors) -> int:
        acc = 0
        for v in vectors:
            acc ^= eq.value(v, self.basis)
        return acc


def build_monomial_quad_system(system: ConstantFreeSystem) -> MonomialQuadSystem:
    n, d = system.n, system.d
    basis = basis_make(n, d, "U")
    linearized = []
    for f in system.equations:
        linear = tuple(
            (mask, coeff)
            for mask, coeff in sorted(
                f.coeffs.items(), key=lambda kv: basis.rank(kv[0])
            )
        )
        linearized.append(QuadEquation(quad=(), linear=linear))
    multiplicativity = []
    masks = basis.masks
    for a in range(len(masks)):
        for b in range(a, len(masks)):
            union = masks[a] | masks[b]
            if union in basis:
                multiplicativity.append(
                    QuadEquation(
                        quad=((masks[a], masks[b], 1),),
                        linear=((union, 1),),
                    )
                )
    return MonomialQuadSystem(
        n=n,
        d=d,
        basis=basis,
        linearized=tuple(linearized),
        multiplicativity=tuple(multiplicativity),
    )


# -- the subspace -------------------------------------------------------------


def build_matrix_subspace(
    quad: MonomialQuadSystem,
    field: FieldSpec | None = None,
    provenance: dict | None = None,
) -> SubspaceSpec:
    """Quotient-coordinate subspace on U_{n,2d} cut out by the linearized
    equations.

    In quotient coordinates an entry at (S, T) is the coordinate of the
    union, so each multiplicativity equation lands on a single coordinate
    with coefficient 1 + 1 = 0: those rows are asserted identically zero
    and dropped.  The constraint rows are 0/1-valued and define the same
    subspace over any field of characteristic two, which is the only kind
    accepted here.
    """
    field = field or _GF2
    if field.p != 2:
        raise PreconditionError("the subspace constraints need characteristic two")
    n, d = quad.n, quad.d
    coords = basis_make(n, 2 * d, "U")
    rows = []
    for eq in quad.linearized:
        if eq.quad:
            raise PreconditionError("linearized equations must be linear")
        acc: dict[int, int] = {}
        for mask, coeff in eq.linear:
            pos = coords.rank(mask)
            c = (acc.get(pos, 0) + _GF2.validate(coeff)) % 2
            if c:
                acc[pos] = c
            else:
                acc.pop(pos, None)
        rows.append(tuple(sorted(acc.items())))
    for k, eq in enumerate(quad.multiplicativity):
        acc = {}
        for mask_s, mask_t, coeff in eq.quad:
            pos = coords.rank(mask_s | mask_t)
            acc[pos] = (acc.get(pos, 0) + _GF2.validate(coeff)) % 2
        for mask, coeff in eq.linear:
            pos = coords.rank(mask)
            acc[pos] = (acc.get(pos, 0) + _GF2.validate(coeff)) % 2
        if any(acc.values()):
            raise InternalConsistencyError(
                f"multiplicativity equation {k} survived the quotient"
            )
    base = {
        "construction": "superposition",
        "n": n,
        "d": d,
        "multiplicativity_cancelled": len(quad.multiplicativity),
    }
    base.update(provenance or {})
    return SubspaceSpec(
        field=field,
        coords=coords,
        index=quad.basis,
        rows=tuple(rows),
        provenance=base,
    )


# -- soundness-facing utilities ----------------------------------------------


@dataclass(frozen=True)
class SuperpositionWitness:
    """A family of 0/1 assignments to the monomial variables whose
    per-equation evaluation sums all vanish, plus their coordinatewise
    sum."""

    vectors: tuple[tuple[int, ...], ...]
    aggregate: tuple[int, ...]
    matrix_rank: int


def low_rank_to_superposition(
    values, subspace: SubspaceSpec, quad: MonomialQuadSystem
) -> SuperpositionWitness:
    """Decompose the member's matrix into symmetric rank-one pieces and
    read the pieces as assignments; they satisfy every equation of the
    quadratic system in superposition, which is re-verified here and is an
    internal failure if broken."""
    if subspace.field.q != 2:
        raise PreconditionError(
            "decomposition works over GF(2); descend extension members first"
        )
    if subspace.index is not quad.basis:
        raise PreconditionError("subspace and quadratic system disagree on the basis")
    bad = subspace.membership_violation(values)
    if bad is not None:
        raise PreconditionError(f"not a subspace member: row {bad} violated")
    matrix = subspace.expand(values)
    decomposition = symmetric_rank_one_decomposition(matrix)
    vectors = decomposition.vectors
    aggregate = [0] * subspace.matrix_side
    for v in vectors:
        for i, bit in enumerate(v):
            aggregate[i] ^= bit
    for idx, eq in enumerate(quad.equations):
        if quad.superposition_value(eq, vectors):
            raise InternalConsistencyError(
                f"superposition value of equation {idx} is nonzero"
            )
    return SuperpositionWitness(
        vectors=vectors,
        aggregate=tuple(aggregate),
        matrix_rank=matrix.rank(),
    )


@dataclass(frozen=True)
class RankCertificate:
    """Lower bound on the rank of the expanded matrix of a nonzero
    coordinate vector, read off a minimum-size set with nonzero
    coordinate.  The bound is only guaranteed when half that size fits
    within the matrix degree; `applies` records that."""

    mask: int
    size: int
    bound: int
    applies: bool


def rank_certificate(
    vector: PseudoMomentVector, matrix_degree: int | None = None
) -> RankCertificate | None:
    """None for the zero vector; otherwise the first nonzero coordinate in
    graded order gives a minimum-size set (ties broken lexicographically by
    the basis order) and the bound C(|R|, floor(|R|/2))."""
    d = vector.matrix_degree if matrix_degree is None else matrix_degree
    for mask, value in zip(vector.basis.masks, vector.values):
        if value:
            size = bin(mask).count("1")
            return RankCertificate(
                mask=mask,
                size=size,
                bound=math.comb(size, size // 2),
                applies=(size + 1) // 2 <= d,
            )
    return None
