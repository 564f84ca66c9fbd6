"""Exact arithmetic in prime and prime-power finite fields.

An element of GF(p^e) is stored as a plain int in range(p**e) whose base-p
digits are the coefficients of the residue polynomial: digit i is the
coefficient of alpha^i, where alpha is the class of x modulo the field's
irreducible modulus.  For e == 1 this degenerates to ordinary mod-p ints.
Coefficient vectors, never discrete logs, so there is no table-size ceiling;
small extension fields still get lazy multiplication tables for speed.

The modulus may be supplied explicitly (low-to-high coefficient order) or
omitted, in which case the lexicographically smallest irreducible monic
polynomial of degree e is chosen: candidates are scanned in ascending order
of their non-leading coefficient word, high degree most significant, which
reproduces the usual textbook moduli (x^2+x+1 for GF(4), x^3+x+1 for GF(8),
x^4+x+1 for GF(16), ...).
"""

from __future__ import annotations

import re
from typing import Iterator, Sequence

from .errors import ParseError, PreconditionError

__all__ = [
    "FieldSpec",
    "FieldElement",
    "LinearFunctional",
    "make_field",
    "make_linear_functional",
    "format_field",
    "parse_field_descriptor",
]

# Lazy result tables are only built for extension fields this small.
_TABLE_LIMIT = 256


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


# -- polynomial helpers over GF(p), coefficients as low-to-high tuples --


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mod(num: Sequence[int], den: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of num by monic den, coefficients mod p."""
    r = list(num)
    dd = len(den) - 1
    while len(r) - 1 >= dd and any(r):
        if r[-1] == 0:
            r.pop()
            continue
        shift = len(r) - 1 - dd
        lead = r[-1]
        for i, d in enumerate(den):
            r[shift + i] = (r[shift + i] - lead * d) % p
        r.pop()
    return _poly_trim(r)


def _irreducible_witness(coeffs: Sequence[int], p: int) -> tuple[int, ...] | None:
    """Return a nontrivial monic factor of the monic polynomial, or None.

    Trial division by every monic polynomial of degree 1..deg//2 suffices:
    any factorization contains a factor in that range.
    """
    deg = len(coeffs) - 1
    for fdeg in range(1, deg // 2 + 1):
        for word in range(p**fdeg):
            cand = list(_digits(word, p, fdeg)) + [1]
            if not _poly_mod(coeffs, cand, p):
                return tuple(cand)
    return None


def _digits(value: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        out.append(value % p)
        value //= p
    return tuple(out)


def _undigits(digs: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(digs):
        v = v * p + d
    return v


class FieldSpec:
    """A concrete finite field GF(p^e) with a fixed monic irreducible modulus.

    All operations take and return int-encoded elements.  Instances are
    immutable and compare equal when (p, e, modulus) agree.
    """

    __slots__ = ("p", "e", "q", "modulus", "_mul_table", "_inv_table")

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus  # low-to-high, length e+1, monic
        self._mul_table: list[list[int]] | None = None
        self._inv_table: list[int] | None = None

    # -- identity --

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec({format_field(self)})"

    # -- element plumbing --

    def validate(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise PreconditionError(f"{a!r} is not an element of {format_field(self)}")
        return a

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector of a, low degree first, length e."""
        return _digits(a, self.p, self.e)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.e:
            raise PreconditionError(
                f"expected {self.e} coefficients, got {len(coeffs)}"
            )
        return _undigits([c % self.p for c in coeffs], self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def element(self, a: int) -> "FieldElement":
        return FieldElement(self, self.validate(a))

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    # -- arithmetic on int encodings --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        return _undigits(
            [(x + y) % p for x, y in zip(_digits(a, p, self.e), _digits(b, p, self.e))],
            p,
        )

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        return _undigits([(-x) % p for x in _digits(a, p, self.e)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        table = self._mul_table
        if table is not None:
            return table[a][b]
        if self.q <= _TABLE_LIMIT:
            self._build_tables()
            return self._mul_table[a][b]  # type: ignore[index]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if p == 2:
            # carry-less multiply, then reduce by the modulus bit pattern
            acc = 0
            x = a
            while x:
                low = x & -x
                acc ^= b << low.bit_length() - 1
                x ^= low
            mbits = _undigits(self.modulus, 2)
            top = mbits.bit_length() - 1
            while acc.bit_length() > e:
                acc ^= mbits << (acc.bit_length() - 1 - top)
            return acc
        da, db = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = list(_poly_mod(prod, self.modulus, p))
        rem += [0] * (e - len(rem))
        return _undigits(rem, p)

    def _build_tables(self) -> None:
        q = self.q
        table = [[self._mul_poly(a, b) for b in range(q)] for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if table[a][b] == 1:
                    inv[a] = b
                    break
        self._inv_table = inv
        self._mul_table = table

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {format_field(self)}")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is None and self.q <= _TABLE_LIMIT:
            self._build_tables()
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out


class FieldElement:
    """An int-encoded field element bound to its field.

    Thin operator sugar over FieldSpec; mixing elements of different fields
    raises rather than coercing.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        self.field = field
        self.value = field.validate(value)

    def _peer(self, other: object) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise PreconditionError(
                    f"mixed fields: {format_field(self.field)} vs "
                    f"{format_field(other.field)}"
                )
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.validate(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __mul__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.value, v))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{format_field(self.field)}[{self.value}]"


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Construct GF(p^e).

    modulus, when given, lists the coefficients of a monic irreducible
    degree-e polynomial low degree first (length e+1).  When omitted the
    lexicographically smallest irreducible monic polynomial is found by
    scanning candidates and rejecting each reducible one by exhibiting a
    factor.  Prime fields take the trivial modulus x.
    """
    if not _is_prime(p):
        raise PreconditionError(f"characteristic {p} is not prime")
    if e < 1:
        raise PreconditionError(f"extension degree must be positive, got {e}")
    if modulus is not None:
        coeffs = tuple(int(c) for c in modulus)
        if len(coeffs) != e + 1:
            raise PreconditionError(
                f"modulus for GF({p}^{e}) needs {e + 1} coefficients, got {len(coeffs)}"
            )
        if any(not 0 <= c < p for c in coeffs):
            raise PreconditionError(f"modulus coefficients must lie in [0, {p})")
        if coeffs[-1] != 1:
            raise PreconditionError("modulus must be monic")
        if e > 1:
            factor = _irreducible_witness(coeffs, p)
            if factor is not None:
                raise PreconditionError(
                    f"modulus is reducible: divisible by {_poly_str(factor)}"
                )
        return FieldSpec(p, e, coeffs)
    if e == 1:
        return FieldSpec(p, 1, (0, 1))
    for word in range(p**e):
        cand = _digits(word, p, e) + (1,)
        if _irreducible_witness(cand, p) is None:
            return FieldSpec(p, e, cand)
    raise AssertionError("unreachable: GF(p^e) always has an irreducible modulus")


def _poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            base = "x" if i == 1 else f"x^{i}"
            terms.append(base if c == 1 else f"{c}*{base}")
    return " + ".join(terms) if terms else "0"


# -- field descriptors -------------------------------------------------------

_DESCRIPTOR_RE = re.compile(
    r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?(?:;\s*([0-9,\s]+))?\)\s*$"
)


def format_field(field: FieldSpec) -> str:
    """Text form of a field: GF(p) for prime fields, otherwise the modulus is
    spelled out high degree first, e.g. GF(2^2; 1,1,1) for x^2+x+1."""
    if field.e == 1:
        return f"GF({field.p})"
    body = ",".join(str(c) for c in reversed(field.modulus))
    return f"GF({field.p}^{field.e}; {body})"


def parse_field_descriptor(text: str) -> FieldSpec:
    """Parse GF(p), GF(p^e) (canonical modulus) or GF(p^e; c_e,...,c_0)."""
    m = _DESCRIPTOR_RE.match(text)
    if not m:
        raise ParseError(f"bad field descriptor {text!r}")
    p = int(m.group(1))
    e = int(m.group(2)) if m.group(2) else 1
    if m.group(3) is None:
        return make_field(p, e)
    coeffs = [int(tok) for tok in m.group(3).replace(" ", "").split(",") if tok]
    return make_field(p, e, tuple(reversed(coeffs)))


# -- GF(2)-linear functionals on GF(2^r) ------------------------------------


class LinearFunctional:
    """A GF(2)-linear map GF(2^r) -> GF(2) given by a coefficient row.

    phi(x) is the mod-2 dot product of the row with x's coefficient vector.
    gram[a][b] records phi(theta_a * theta_b) for the power basis
    theta_a = alpha^(a-1), which is what a bilinear-form computation needs.
    """

    __slots__ = ("field", "row", "gram")

    def __init__(self, field: FieldSpec, row: Sequence[int]):
        if field.p != 2:
            raise PreconditionError("linear functionals require characteristic 2")
        if len(row) != field.e or any(c not in (0, 1) for c in row):
            raise PreconditionError(
                f"row must have {field.e} entries over GF(2), got {tuple(row)}"
            )
        self.field = field
        self.row = tuple(row)
        r = field.e
        theta = [1 << a for a in range(r)] if r > 1 else [1]
        self.gram = tuple(
            tuple(self._apply_int(field.mul(theta[a], theta[b])) for b in range(r))
            for a in range(r)
        )

    def _apply_int(self, x: int) -> int:
        acc = 0
        for lam, c in zip(self.row, self.field.coeffs(x)):
            acc ^= lam & c
        return acc

    def __call__(self, x: int | FieldElement) -> int:
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise PreconditionError("element belongs to a different field")
            x = x.value
        return self._apply_int(self.field.validate(x))

    def __repr__(self) -> str:
        return f"LinearFunctional({format_field(self.field)}, row={self.row})"


def make_linear_functional(field: FieldSpec, target: int | FieldElement) -> LinearFunctional:
    """The coordinate functional keyed to target: it extracts the lowest-index
    nonzero coefficient of target, so phi(target) == 1 by construction.

    Deterministic, which keeps everything downstream reproducible.
    """
    if isinstance(target, FieldElement):
        target = target.value
    if field.p != 2:
        raise PreconditionError("linear functionals require characteristic 2")
    field.validate(target)
    if target == 0:
        raise PreconditionError("cannot key a functional to the zero element")
    digs = field.coeffs(target)
    pivot = next(i for i, c in enumerate(digs) if c)
    row = [0] * field.e
    row[pivot] = 1
    return LinearFunctional(field, row)
