"""Direct construction: localizing rows, honest membership, rank-one
expansion."""

import random
from itertools import product

import pytest

from rankgap.boolalg import SquarefreePoly, basis_make, indices_of
from rankgap.errors import PreconditionError
from rankgap.frontends import QuadSystemSource, parse_quadeq
from rankgap.gfarith import make_field
from rankgap.moment import build_moment_subspace, localizing_row_count
from rankgap.subspace import honest_moment_vector

GF2 = make_field(2)
GF3 = make_field(3)
GF4 = make_field(2, 2)
GF5 = make_field(5)


def random_satisfiable_system(rng, field, n, m):
    """Plant a Boolean point and zero each random polynomial at it."""
    a = tuple(rng.randint(0, 1) for _ in range(n))
    support = basis_make(n, 2, "V").masks
    eqs = []
    for _ in range(m):
        coeffs = {
            mask: c
            for mask in support
            if mask and (c := rng.randrange(field.q))
        }
        f = SquarefreePoly(field, coeffs)
        f = f - SquarefreePoly.constant(field, f.evaluate(a, first_var=1))
        eqs.append(f)
    return QuadSystemSource(field=field, n=n, equations=tuple(eqs)), a


def test_unsatisfiable_pair_pins_the_space_to_zero():
    src = parse_quadeq("GF(2)\nx1\nx1 + 1\n")
    space = build_moment_subspace(src, 1)
    assert space.variant == "V"
    assert len(space.rows) == 2
    assert space.rows == (((1, 1),), ((0, 1), (1, 1)))
    assert space.dimension() == 0
    assert space.kernel_basis() == []


def test_single_equation_frozen_kernel():
    src = parse_quadeq("GF(2)\nx1 + x2\n")
    space = build_moment_subspace(src, 1)
    assert space.rows == (((1, 1), (2, 1)),)
    assert space.coord_count == 4
    assert space.dimension() == 3


def test_row_count_formula():
    rng = random.Random(31)
    for _ in range(12):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        field = rng.choice([GF2, GF3, GF5])
        src, _ = random_satisfiable_system(rng, field, n, m)
        for k in (1, 2):
            space = build_moment_subspace(src, k)
            assert len(space.rows) == localizing_row_count(n, m, k)
            assert space.provenance["k"] == k
            assert "degree_override" not in space.provenance


def test_localizing_rows_evaluate_like_shifted_polynomials():
    rng = random.Random(32)
    for field in (GF2, GF3, GF4, GF5):
        src, _ = random_satisfiable_system(rng, field, 3, 2)
        k = 2
        space = build_moment_subspace(src, k)
        shifts = basis_make(3, 2 * k - 2, "V")
        for _ in range(10):
            point = tuple(rng.randint(0, 1) for _ in range(3))
            y = honest_moment_vector(field, point, n=3, degree=2 * k)
            for li, f in enumerate(src.equations):
                for wi, w in enumerate(shifts.masks):
                    row = li * len(shifts) + wi
                    a_w = 1
                    for i in indices_of(w):
                        a_w *= point[i - 1]
                    direct = field.mul(a_w, f.evaluate(point, first_var=1))
                    assert space.row_value(row, y.values) == direct


def test_honest_membership_and_rank_one():
    rng = random.Random(33)
    for field in (GF2, GF3, GF4, GF5):
        for _ in range(8):
            n, m = rng.randint(1, 4), rng.randint(1, 3)
            k = rng.randint(1, 2)
            src, a = random_satisfiable_system(rng, field, n, m)
            space = build_moment_subspace(src, k)
            y = honest_moment_vector(field, a, n=n, degree=2 * k)
            assert space.contains(y.values)
            assert space.expand(y.values).rank() == 1
            # every satisfying Boolean point is a member, not just the planted one
            for z in product((0, 1), repeat=n):
                if src.satisfied_by(z):
                    yz = honest_moment_vector(field, z, n=n, degree=2 * k)
                    assert space.contains(yz.values)


def test_degree_override_is_stamped():
    src = parse_quadeq("GF(2)\nx1 + x2\n")
    space = build_moment_subspace(src, 1, degree=2)
    assert space.d == 2
    assert space.coords.degree == 4
    assert space.provenance["degree_override"] is True
    assert space.provenance["k"] == 1


def test_bad_parameters():
    src = parse_quadeq("GF(2)\nx1\n")
    with pytest.raises(PreconditionError, match="rank gap target"):
        build_moment_subspace(src, 0)
    with pytest.raises(PreconditionError, match="matrix degree"):
        build_moment_subspace(src, 1, degree=0)


def test_provenance_merge():
    src = parse_quadeq("GF(3)\nx1*x2\n")
    space = build_moment_subspace(src, 1, provenance={"source": "deadbeef"})
    assert space.provenance["source"] == "deadbeef"
    assert space.provenance["construction"] == "direct"
