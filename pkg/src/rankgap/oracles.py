"""Brute-force ground truth for the reduction pipeline.

Nothing in this module is clever on purpose.  Membership is rechecked from
the dense constraint matrix, minrank enumerates every kernel member within
an explicit budget, and point isolation / sum-of-points representations
come from solving their defining linear systems directly.  The pipeline is
validated against these routines, never the other way around.

Budgets are hard limits: when an enumeration would exceed one, the answer
is a refusal, not a subsample.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .boolalg import MonomialBasis, SquarefreePoly, basis_make, mask_of
from .errors import BudgetExceededError, InternalConsistencyError, PreconditionError
from .gfarith import make_field
from .gflinalg import FFMatrix, packed_rank
from .subspace import SubspaceSpec
from .superposition import MonomialQuadSystem

__all__ = [
    "MembershipReport",
    "MinrankReport",
    "MonomialAssignment",
    "PointSet",
    "SuperpositionReport",
    "check_membership",
    "minrank_bruteforce",
    "point_isolator",
    "subspace_digest",
    "sum_of_points",
    "superposition_check",
]

_GF2 = make_field(2)


def subspace_digest(space: SubspaceSpec) -> str:
    """sha256 of the canonical text serialization; names a subspace in
    oracle reports."""
    return hashlib.sha256(space.to_text().encode("utf-8")).hexdigest()


# -- membership ---------------------------------------------------------------


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    violated_row: int | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "violated_row": self.violated_row}


def check_membership(values, space: SubspaceSpec) -> MembershipReport:
    """Re-derive membership through the dense constraint matrix rather than
    the sparse row evaluations the builders use."""
    vec = tuple(space.field.validate(v) for v in values)
    if len(vec) != space.coord_count:
        raise PreconditionError(
            f"vector has {len(vec)} coordinates, the subspace has {space.coord_count}"
        )
    image = space.dense_rows().mat_vec(vec)
    for k, entry in enumerate(image):
        if entry:
            return MembershipReport(False, k)
    return MembershipReport(True, None)


# -- minrank by exhaustion ----------------------------------------------------


@dataclass(frozen=True)
class MinrankReport:
    """Outcome of a full kernel scan.

    status is "ok", "empty" (the subspace is {0}), or "budget_exceeded"
    (the scan was refused; required says how many members it would visit).
    """

    status: str
    subspace_hash: str
    kernel_dimension: int
    enumerated: int
    minrank: int | None = None
    witness: tuple[int, ...] | None = None
    required: int | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "subspace_hash": self.subspace_hash,
            "kernel_dimension": self.kernel_dimension,
            "enumerated": self.enumerated,
            "minrank": self.minrank,
            "witness": None if self.witness is None else list(self.witness),
            "required": self.required,
        }


def _scan_packed(basis_y, basis_rows, side, coord_count, lo, hi):
    # Gray-code walk over member indices [lo, hi); each step flips one
    # kernel basis vector in the running vector and its expansion
    y = 0
    rows = [0] * side
    start = lo ^ (lo >> 1)
    b = 0
    while start:
        if start & 1:
            y ^= basis_y[b]
            for r, br in enumerate(basis_rows[b]):
                rows[r] ^= br
        start >>= 1
        b += 1
    best_rank = None
    best_witness = None
    for i in range(lo, hi):
        if i != lo:
            flip = (i ^ (i >> 1)) ^ ((i - 1) ^ ((i - 1) >> 1))
            b = flip.bit_length() - 1
            y ^= basis_y[b]
            for r, br in enumerate(basis_rows[b]):
                rows[r] ^= br
        if y == 0:
            continue
        rank = packed_rank(rows)
        if best_rank is not None and rank > best_rank:
            continue
        wit = tuple((y >> c) & 1 for c in range(coord_count))
        if best_rank is None or rank < best_rank or wit < best_witness:
            best_rank, best_witness = rank, wit
    return best_rank, best_witness


def _scan_generic(field, kernel, positions, side, coord_count, lo, hi):
    q = field.q
    m = len(kernel)
    best_rank = None
    best_witness = None
    for idx in range(lo, hi):
        digits = []
        t = idx
        for _ in range(m):
            digits.append(t % q)
            t //= q
        digits.reverse()
        y = [0] * coord_count
        for c, vec in zip(digits, kernel):
            if c == 0:
                continue
            for pos, v in enumerate(vec):
                if v:
                    y[pos] = field.add(y[pos], field.mul(c, v))
        h = FFMatrix(field, [[y[positions[i][j]] for j in range(side)] for i in range(side)])
        rank = h.rank()
        if best_rank is not None and rank > best_rank:
            continue
        wit = tuple(y)
        if best_rank is None or rank < best_rank or wit < best_witness:
            best_rank, best_witness = rank, wit
    return best_rank, best_witness


def minrank_bruteforce(
    space: SubspaceSpec,
    level: int | None = None,
    budget: int = 1 << 20,
    workers: int = 1,
) -> MinrankReport:
    """Minimum rank of the level-d expansion over every nonzero member.

    Visits all q^m kernel combinations, m the kernel dimension; refuses
    when q^m exceeds the budget.  The witness is the lexicographically
    smallest coordinate vector among the rank minimizers, so the answer
    does not depend on the worker count.
    """
    if level is None:
        level = space.d
    if not 0 <= level <= space.d:
        raise PreconditionError(f"expansion level {level} is outside 0..{space.d}")
    if budget < 1:
        raise PreconditionError("budget must be positive")
    if workers < 1:
        raise PreconditionError("worker count must be positive")
    digest = subspace_digest(space)
    kernel = space.kernel_basis()
    m = len(kernel)
    if m == 0:
        return MinrankReport("empty", digest, 0, 0)
    total = space.field.q**m
    if total > budget:
        return MinrankReport("budget_exceeded", digest, m, 0, required=total)

    masks = basis_make(space.n, level, space.variant).masks
    side = len(masks)
    coords = space.coords
    coord_count = space.coord_count
    if space.field.q == 2:
        basis_y = [sum(v << c for c, v in enumerate(vec)) for vec in kernel]
        basis_rows = [
            [
                sum(vec[coords.rank(masks[i] | masks[j])] << j for j in range(side))
                for i in range(side)
            ]
            for vec in kernel
        ]
        job = lambda lo, hi: _scan_packed(basis_y, basis_rows, side, coord_count, lo, hi)
    else:
        positions = [[coords.rank(masks[i] | masks[j]) for j in range(side)] for i in range(side)]
        job = lambda lo, hi: _scan_generic(
            space.field, kernel, positions, side, coord_count, lo, hi
        )

    nmembers = total - 1
    shards = min(workers, nmembers)
    bounds = [1 + (nmembers * k) // shards for k in range(shards + 1)]
    ranges = [(bounds[k], bounds[k + 1]) for k in range(shards)]
    if workers == 1:
        results = [job(lo, hi) for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: job(*r), ranges))

    best_rank = None
    best_witness = None
    for rank, wit in results:
        if rank is None:
            continue
        if best_rank is None or rank < best_rank or (rank == best_rank and wit < best_witness):
            best_rank, best_witness = rank, wit
    if best_rank is None:
        raise InternalConsistencyError("a nonempty kernel produced no nonzero member")
    return MinrankReport("ok", digest, m, nmembers, minrank=best_rank, witness=best_witness)


# -- superposition ------------------------------------------------------------


@dataclass(frozen=True)
class SuperpositionReport:
    ok: bool
    violated_equation: int | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "violated_equation": self.violated_equation}


def superposition_check(assignments, quad: MonomialQuadSystem) -> SuperpositionReport:
    """Per-equation sum of evaluations over GF(2) across the whole family.

    Evaluates each equation with its own loop over the stored terms; does
    not share code with the decomposition that produced the family.
    """
    basis = quad.basis
    taus = []
    for t, a in enumerate(assignments):
        tau = tuple(a)
        if len(tau) != len(basis):
            raise PreconditionError(
                f"assignment {t} has {len(tau)} entries, the monomial basis has {len(basis)}"
            )
        for v in tau:
            if v not in (0, 1):
                raise PreconditionError(f"assignment {t} has a non-bit entry {v!r}")
        taus.append(tau)
    for idx, eq in enumerate(quad.equations):
        acc = 0
        for tau in taus:
            val = 0
            for left, right, _ in eq.quad:
                val ^= tau[basis.rank(left)] & tau[basis.rank(right)]
            for mono, _ in eq.linear:
                val ^= tau[basis.rank(mono)]
            acc ^= val
        if acc:
            return SuperpositionReport(False, idx)
    return SuperpositionReport(True, None)


# -- points and monomial assignments ------------------------------------------


@dataclass(frozen=True)
class PointSet:
    """Finite subset of GF(2)^{n+1}, stored sorted."""

    n: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("need n >= 0")
        seen = set()
        for p in self.points:
            if len(p) != self.n + 1:
                raise PreconditionError(
                    f"point {p!r} does not have {self.n + 1} coordinates"
                )
            if any(v not in (0, 1) for v in p):
                raise PreconditionError(f"point {p!r} has non-bit entries")
            if p in seen:
                raise PreconditionError(f"point {p!r} appears twice")
            seen.add(p)
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point) -> bool:
        return tuple(point) in set(self.points)


def _point_ones(point) -> int:
    return mask_of(i for i, v in enumerate(point) if v)


@dataclass(frozen=True)
class MonomialAssignment:
    """GF(2) value for every monomial of degree 1..d over x_0..x_n.

    The empty monomial is pinned to 1 and not stored.
    """

    n: int
    d: int
    values: tuple[int, ...]

    def __post_init__(self):
        want = len(self.basis)
        if len(self.values) != want:
            raise PreconditionError(
                f"degree-{self.d} assignment over {self.n + 1} variables needs "
                f"{want} values, got {len(self.values)}"
            )
        if any(v not in (0, 1) for v in self.values):
            raise PreconditionError("assignment values must be bits")

    @property
    def basis(self) -> MonomialBasis:
        return basis_make(self.n, self.d, "U")

    def value(self, mask: int) -> int:
        if mask == 0:
            return 1
        return self.values[self.basis.rank(mask)]

    def poly_value(self, f: SquarefreePoly) -> int:
        """Apply the assignment linearly to a GF(2) polynomial."""
        if f.field.q != 2:
            raise PreconditionError("monomial assignments live over GF(2)")
        acc = 0
        for mask, c in f.terms():
            if c:
                acc ^= self.value(mask)
        return acc

    @classmethod
    def from_point(cls, point, d: int) -> "MonomialAssignment":
        """Honest evaluations x^S = prod_{i in S} point_i."""
        pt = tuple(point)
        if not pt or any(v not in (0, 1) for v in pt):
            raise PreconditionError("need a nonempty bit point")
        n = len(pt) - 1
        ones = _point_ones(pt)
        basis = basis_make(n, d, "U")
        return cls(n, d, tuple(1 if mask & ~ones == 0 else 0 for mask in basis.masks))


# -- point isolation ----------------------------------------------------------


def _pack_bits(bits) -> int:
    return sum(b << i for i, b in enumerate(bits))


def _echelon_insert(echelon: dict[int, int], vec: int) -> int:
    """Reduce vec against the echelon rows (keyed by top bit); residue is
    inserted when nonzero.  Returns the residue."""
    while vec:
        top = vec.bit_length() - 1
        row = echelon.get(top)
        if row is None:
            echelon[top] = vec
            return vec
        vec ^= row
    return 0


def _in_span(vec: int, echelon: dict[int, int]) -> bool:
    while vec:
        row = echelon.get(vec.bit_length() - 1)
        if row is None:
            return False
        vec ^= row
    return True


def _support_lex_min(particular: int, kernel: list[int], width: int) -> int:
    """Pick, from the affine solution set particular + span(kernel), the
    vector whose support sequence (sorted list of nonzero positions) is
    lexicographically smallest.

    Scans positions left to right keeping the kernel reduced so that all
    its vectors live in the unscanned suffix.  At each position: stop if
    the rest of the suffix can be cancelled entirely, otherwise take a
    nonzero entry whenever one is available.
    """
    ks = [k for k in kernel if k]
    p = particular
    for j in range(width):
        echelon: dict[int, int] = {}
        for k in ks:
            _echelon_insert(echelon, k)
        tail = (p >> j) << j
        if _in_span(tail, echelon):
            return p & ((1 << j) - 1)
        bit = 1 << j
        pivot = None
        rest = []
        for k in ks:
            if pivot is None and k & bit:
                pivot = k
            else:
                rest.append(k ^ pivot if (pivot is not None and k & bit) else k)
        if pivot is not None:
            ks = [k for k in rest if k]
            if not p & bit:
                p ^= pivot
    return p


def point_isolator(points: PointSet, target, rho: int) -> SquarefreePoly:
    """Multilinear q over GF(2) with deg(q) <= rho, q(target) = 1, and
    q = 0 on the rest of the point set.  Needs |points| < 2^rho.

    Among all isolators the one with the lexicographically smallest
    support sequence (monomials in graded order) is returned.
    """
    a = tuple(target)
    if a not in points:
        raise PreconditionError("the target point is not in the point set")
    if rho < 0:
        raise PreconditionError("need rho >= 0")
    if len(points) >= 1 << rho:
        raise PreconditionError(
            f"isolation needs |T| < 2^rho: got {len(points)} points at rho={rho}"
        )
    n = points.n
    monomials = [0] + list(basis_make(n, min(rho, n + 1), "U").masks)
    rows = []
    targets = []
    for b in points:
        ones = _point_ones(b)
        rows.append([1 if mask & ~ones == 0 else 0 for mask in monomials])
        targets.append(1 if b == a else 0)
    system = FFMatrix(_GF2, rows, ncols=len(monomials))
    particular = system.solve(targets)
    if particular is None:
        raise InternalConsistencyError(
            "the isolation system is infeasible, which the size bound rules out"
        )
    kernel = [_pack_bits(v) for v in system.kernel_basis()]
    chosen = _support_lex_min(_pack_bits(particular), kernel, len(monomials))
    coeffs = {mask: 1 for i, mask in enumerate(monomials) if chosen >> i & 1}
    q = SquarefreePoly(_GF2, coeffs)
    if q.degree > rho:
        raise InternalConsistencyError("isolator degree escaped the bound")
    for b in points:
        if q.evaluate(b) != (1 if b == a else 0):
            raise InternalConsistencyError("isolator fails on the point set")
    return q


# -- sums of point evaluations ------------------------------------------------


def sum_of_points(sigma: MonomialAssignment, budget: int = 1 << 20) -> PointSet:
    """A point set whose evaluation sums reproduce the assignment on every
    monomial of degree <= d (and 1 on the empty monomial).

    Solves for an indicator vector over all 2^{n+1} points; any valid set
    is acceptable, no minimality is attempted.  The result always has odd
    size: the empty-monomial row forces it.
    """
    n = sigma.n
    npoints = 1 << (n + 1)
    if npoints > budget:
        raise BudgetExceededError(
            f"solving over GF(2)^{n + 1} needs {npoints} indicator columns, "
            f"budget allows {budget}"
        )
    all_points = list(product((0, 1), repeat=n + 1))
    masks = [0] + list(sigma.basis.masks)
    rows = []
    targets = []
    for mask in masks:
        rows.append([1 if mask & ~_point_ones(b) == 0 else 0 for b in all_points])
        targets.append(sigma.value(mask))
    indicator = FFMatrix(_GF2, rows, ncols=npoints).solve(targets)
    if indicator is None:
        raise InternalConsistencyError(
            "no point set reproduces the assignment; the representation "
            "guarantee says one always exists"
        )
    beta = PointSet(n, tuple(b for b, v in zip(all_points, indicator) if v))
    for mask in masks:
        acc = 0
        for b in beta:
            if mask & ~_point_ones(b) == 0:
                acc ^= 1
        if acc != sigma.value(mask):
            raise InternalConsistencyError("returned point set fails to reproduce the assignment")
    if len(beta) % 2 == 0:
        raise InternalConsistencyError("point set has even size despite the pinned empty monomial")
    return beta
