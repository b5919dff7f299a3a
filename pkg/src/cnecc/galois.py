"""Exact arithmetic over F_q, the polynomial ring F_q[z], the rational
function field F_q(z), and small dense matrices over them.

Everything is immutable and exact. Matrices stay desk-scale (the network
dimension is a min-cut), so determinants go through cofactor expansion and
rank through fraction-free elimination; asymptotics are irrelevant here,
exactness is not.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


# Irreducible moduli (ascending coefficients) for the shipped extension fields.
BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),      # 1 + x + x^2
    (2, 3): (1, 1, 0, 1),   # 1 + x + x^3
    (3, 2): (1, 0, 1),      # 1 + x^2
}

_TABLE_LIMIT = 512  # largest q for which extension-field tables are built


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if is_prime(p):
            m = n
            while m % p == 0:
                m //= p
            if m == 1:
                return True
            if n % p == 0:
                return False
    return False


def _poly_mod(coeffs, modulus, p):
    """Reduce a coefficient list modulo a monic modulus over F_p."""
    coeffs = list(coeffs)
    deg_m = len(modulus) - 1
    for i in range(len(coeffs) - 1, deg_m - 1, -1):
        c = coeffs[i] % p
        if c:
            for j, mj in enumerate(modulus[:-1]):
                coeffs[i - deg_m + j] = (coeffs[i - deg_m + j] - c * mj) % p
        coeffs[i] = 0
    return [c % p for c in coeffs[:deg_m]]


def _irreducible_over_prime(modulus, p) -> bool:
    """Trial check that a monic polynomial over F_p has no nontrivial factor."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] != 1:
        return False
    # Linear factors: roots in F_p.
    for a in range(p):
        if sum(c * pow(a, i, p) for i, c in enumerate(modulus)) % p == 0:
            return False
    # Trial division by monic polynomials of degree 2..deg//2.
    for d in range(2, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            # Remainder of modulus by div.
            rem = list(modulus)
            for i in range(len(rem) - 1, d - 1, -1):
                c = rem[i] % p
                if c:
                    for j in range(d + 1):
                        rem[i - d + j] = (rem[i - d + j] - c * div[j]) % p
            if not any(c % p for c in rem):
                return False
    return True


class Field:
    """The finite field F_q with q = p**m; elements are the ints 0..q-1.

    For m > 1 the int encodes a polynomial over F_p in base p
    (value = c0 + c1*p + ...) reduced by a monic irreducible modulus of
    degree m, checked for irreducibility by trial factorization.
    """

    __slots__ = ("p", "m", "q", "modulus", "_mul_table", "_inv_table", "_add_table")

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            self.modulus = ()
            self._mul_table = self._inv_table = self._add_table = None
            return
        if modulus is None:
            modulus = BUILTIN_MODULI.get((p, m))
            if modulus is None:
                raise ValueError(f"no built-in modulus for F_{p}^{m}; supply one")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or not _irreducible_over_prime(modulus, p):
            raise ValueError("modulus must be monic irreducible of the extension degree")
        self.modulus = modulus
        if self.q > _TABLE_LIMIT:
            raise ValueError(f"extension field F_{self.q} too large for table arithmetic")
        self._build_tables()

    def _digits(self, a):
        p = self.p
        return [(a // p**i) % p for i in range(self.m)]

    def _from_digits(self, ds):
        return sum(int(d) % self.p * self.p**i for i, d in enumerate(ds))

    def _build_tables(self):
        q, p = self.q, self.p
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                add[a, b] = self._from_digits((x + y) % p for x, y in zip(da, db))
                prod = [0] * (2 * self.m - 1)
                for i, x in enumerate(da):
                    for j, y in enumerate(db):
                        prod[i + j] = (prod[i + j] + x * y) % p
                mul[a, b] = self._from_digits(_poly_mod(prod, self.modulus, p))
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self._add_table = add
        self._mul_table = mul
        self._inv_table = inv

    # -- scalar arithmetic -------------------------------------------------

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return int(self._add_table[a, b])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._from_digits((-d) % self.p for d in self._digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        return int(self._mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def elements(self):
        return range(self.q)

    # -- vectorized arithmetic on numpy arrays -----------------------------

    def np_add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        return self._add_table[a, b]

    def np_mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        return self._mul_table[a, b]

    def np_matmul(self, a, b):
        """Exact matrix product of integer arrays over this field."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a @ b) % self.p
        acc = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for i in range(a.shape[-1]):
            term = self._mul_table[a[..., i, None], b[i, ...]]
            acc = self._add_table[acc, term]
        return acc

    # -- plumbing -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"F{self.q}"


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1, modulus=None) -> Field:
    """Shared Field instances; modulus must be a tuple when given."""
    return Field(p, m, modulus)


def _same_field(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"mixed fields {a.field} and {b.field}")
    return a.field


class Poly:
    """A polynomial in z over one F_q.

    coeffs[i] multiplies z**i; no trailing zeros are stored, and the zero
    polynomial is the empty tuple (degree -1).
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        coeffs = tuple(field.check(c) for c in coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def z(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field, deg, coeff=1):
        return cls(field, (0,) * deg + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other):
        f = _same_field(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(f, (f.add(self[i], other[i]) for i in range(n)))

    def __neg__(self):
        return Poly(self.field, (self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = _same_field(self, other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def scale(self, c: int) -> "Poly":
        f = self.field
        return Poly(f, (f.mul(c, a) for a in self.coeffs))

    def shifted(self, d: int) -> "Poly":
        if self.is_zero():
            return self
        return Poly(self.field, (0,) * d + self.coeffs)

    def __divmod__(self, other):
        f = _same_field(self, other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = f.inv(other.lc)
        quo = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = f.mul(c, inv_lead)
            quo[i - db] = c
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(c, b))
        return Poly(f, quo), Poly(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError(f"{self} is not divisible by {other}")
        return q

    def gcd(self, other) -> "Poly":
        """Monic greatest common divisor."""
        _same_field(self, other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def monic(self) -> "Poly":
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(self.field.inv(self.lc))

    def eval_at(self, a: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, a), c)
        return acc

    def weight(self) -> int:
        """Number of nonzero F_q coefficients."""
        return sum(1 for c in self.coeffs if c)

    def is_monomial(self) -> bool:
        return bool(self.coeffs) and self.weight() == 1

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return self.to_str()

    def to_str(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("z" if c == 1 else f"{c}*z")
            else:
                terms.append(f"z^{i}" if c == 1 else f"{c}*z^{i}")
        return "+".join(terms)

    @classmethod
    def parse(cls, field: Field, text: str) -> "Poly":
        """Parse sparse forms like '1+z^2', '2*z^3', '2z^3' or '0'."""
        text = text.replace("**", "^").replace(" ", "")
        if not text:
            raise ValueError("empty polynomial")
        text = text.replace("-", "+-")
        coeffs: dict[int, int] = {}
        for term in text.split("+"):
            if not term:
                continue
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "z" in term:
                head, _, tail = term.partition("z")
                coeff = head.rstrip("*")
                c = int(coeff) if coeff else 1
                if tail.startswith("^"):
                    deg = int(tail[1:])
                elif tail == "":
                    deg = 1
                else:
                    raise ValueError(f"bad polynomial term {term!r}")
            else:
                c = int(term)
                deg = 0
            c %= field.p if field.m == 1 else field.q
            c = field.check(c)
            if neg:
                c = field.neg(c)
            coeffs[deg] = field.add(coeffs.get(deg, 0), c)
        out = [0] * (max(coeffs) + 1 if coeffs else 0)
        for d, c in coeffs.items():
            out[d] = c
        return cls(field, out)


class RationalFunction:
    """num/den over F_q[z], stored normalized: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        _same_field(num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree >= 0:
            if not num.is_zero():
                num = num.exact_div(g)
                den = den.exact_div(g)
        if num.is_zero():
            den = Poly.one(num.field)
        lead = den.lc
        if lead != 1:
            inv = den.field.inv(lead)
            num = num.scale(inv)
            den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p, Poly.one(p.field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    @property
    def realizable(self) -> bool:
        """True when the function is implementable causally: den(0) != 0."""
        return self.den.eval_at(0) != 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(self.field.inv(self.den.coeffs[0]))

    def __add__(self, other):
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.from_poly(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.from_poly(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return self.num.to_str()
        return f"({self.num})/({self.den})"


class PolyMatrix:
    """Dense rows x cols matrix of Poly entries over one field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("matrix must be non-empty")
        cols = len(entries[0])
        field = entries[0][0].field
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.field != field:
                    raise FieldMismatchError("mixed fields in matrix")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *_):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, field, n):
        one, zero = Poly.one(field), Poly.zero(field)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, field, grid):
        """Constant matrix from an integer grid."""
        return cls([[Poly.const(field, field.check(v)) for v in row] for row in grid])

    @classmethod
    def parse(cls, field, text: str):
        """Rows separated by ';', entries by ','."""
        rows = [r for r in text.split(";") if r.strip()]
        return cls([[Poly.parse(field, e) for e in r.split(",")] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            return RationalMatrix.from_polymatrix(self) @ other
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly.zero(f)
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other):
        return self + other.scale_const(self.field.neg(1))

    def scale(self, p: Poly) -> "PolyMatrix":
        return PolyMatrix([[p * e for e in row] for row in self.entries])

    def scale_const(self, c: int) -> "PolyMatrix":
        return PolyMatrix([[e.scale(c) for e in row] for row in self.entries])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.entries)))

    def max_degree(self) -> int:
        return max(e.degree for row in self.entries for e in row)

    def subst(self, a: int):
        """Evaluate every entry at z = a; returns an integer grid."""
        return tuple(tuple(e.eval_at(a) for e in row) for row in self.entries)

    def _minor_det(self, rows, cols):
        if len(rows) == 1:
            return self.entries[rows[0]][cols[0]]
        f = self.field
        acc = Poly.zero(f)
        r0 = rows[0]
        for idx, c in enumerate(cols):
            e = self.entries[r0][c]
            if e.is_zero():
                continue
            sub = self._minor_det(rows[1:], cols[:idx] + cols[idx + 1 :])
            term = e * sub
            if idx % 2:
                term = -term
            acc = acc + term
        return acc

    def det(self) -> Poly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return self._minor_det(tuple(range(self.rows)), tuple(range(self.cols)))

    def det_adjugate(self):
        """Cofactor determinant and adjugate: self @ adj == det * I exactly."""
        if self.rows != self.cols:
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0][0], PolyMatrix([[Poly.one(self.field)]])
        det = self.det()
        all_idx = tuple(range(n))
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            rows = all_idx[:i] + all_idx[i + 1 :]
            for j in range(n):
                cols = all_idx[:j] + all_idx[j + 1 :]
                c = self._minor_det(rows, cols)
                if (i + j) % 2:
                    c = -c
                adj[j][i] = c  # transposed cofactor
        return det, PolyMatrix(adj)

    def rank(self) -> int:
        """Rank over F_q(z) by fraction-free (Bareiss) elimination."""
        a = [list(row) for row in self.entries]
        nrows, ncols = self.rows, self.cols
        prev = Poly.one(self.field)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            for i in range(r + 1, nrows):
                for j in range(c + 1, ncols):
                    num = a[r][c] * a[i][j] - a[i][c] * a[r][j]
                    a[i][j] = num.exact_div(prev)
                a[i][c] = Poly.zero(self.field)
            prev = a[r][c]
            r += 1
        return r

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_str(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(e.to_str() for e in row) + "]" for row in self.entries
        ) + "]"

    def __repr__(self):
        return self.to_str()


class RationalMatrix:
    """Matrix of RationalFunction entries; the fraction-field counterpart."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        field = entries[0][0].field
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", len(entries[0]))
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *_):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def from_polymatrix(cls, m: PolyMatrix):
        return cls(
            [[RationalFunction.from_poly(e) for e in row] for row in m.entries]
        )

    @classmethod
    def inverse_of(cls, m: PolyMatrix):
        """Exact inverse of a square PolyMatrix with nonzero determinant."""
        det, adj = m.det_adjugate()
        if det.is_zero():
            raise ZeroDivisionError("matrix is singular over F_q(z)")
        return cls(
            [[RationalFunction(e, det) for e in row] for row in adj.entries]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            other = RationalMatrix.from_polymatrix(other)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RationalFunction.from_poly(Poly.zero(self.field))
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return RationalMatrix(out)

    def __rmatmul__(self, other):
        if isinstance(other, PolyMatrix):
            return RationalMatrix.from_polymatrix(other) @ self
        return NotImplemented

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for row in self.entries for e in row)

    def as_polymatrix(self) -> PolyMatrix:
        return PolyMatrix([[e.as_poly() for e in row] for row in self.entries])

    @property
    def realizable(self) -> bool:
        return all(e.realizable for row in self.entries for e in row)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __repr__(self):
        return "[" + ", ".join(
            "[" + ", ".join(repr(e) for e in row) + "]" for row in self.entries
        ) + "]"


# -- numeric (constant) matrices over F_q -----------------------------------

def ff_matmul(field: Field, a, b):
    out = []
    for row in a:
        orow = []
        for j in range(len(b[0])):
            acc = 0
            for k, x in enumerate(row):
                acc = field.add(acc, field.mul(x, b[k][j]))
            orow.append(acc)
        out.append(tuple(orow))
    return tuple(out)


def ff_rank(field: Field, grid) -> int:
    a = [list(row) for row in grid]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, v) for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [field.sub(v, field.mul(f, w)) for v, w in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def ff_inv(field: Field, grid):
    n = len(grid)
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(grid)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix over F_q")
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, v) for v in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [field.sub(v, field.mul(f, w)) for v, w in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row[n:]) for row in a)
