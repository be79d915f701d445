"""Exact arithmetic in GF(p^k).

Elements are plain integers in ``[0, q)``.  An element with polynomial
representative ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is encoded as
``sum(c_i * p**i)``, so ``0`` is zero, ``1`` is one and, for ``k > 1``,
``p`` is the class of ``x``.

All operations go through lookup tables built once at construction, which
keeps the hot loops in the geometry code cheap.  The tables are also exposed
as numpy arrays for batched work.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

DEFAULT_FIELD_CAP = 64


class FieldError(ValueError):
    """Invalid field parameters or an impossible field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomial helpers over GF(p); coefficient lists, low degree first -----

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def monic_polynomials(p: int, degree: int):
    """All monic polynomials of ``degree``, lexicographic on (c_0, c_1, ...)."""
    for key in itertools.product(range(p), repeat=degree):
        yield list(key) + [1]


def is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    k = len(m) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for f in monic_polynomials(p, d):
            if not poly_mod(m, f, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> list[int]:
    for m in monic_polynomials(p, k):
        if is_irreducible(m, p):
            return m
    raise FieldError(f"no monic irreducible polynomial of degree {k} over GF({p})")


class Field:
    """The finite field GF(p^k) with a deterministic modulus.

    The modulus is the lexicographically smallest monic irreducible of degree
    ``k`` (coefficients compared from the constant term upwards).
    """

    def __init__(self, p: int, k: int = 1, cap: int = DEFAULT_FIELD_CAP):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError(f"extension degree must be >= 1, got {k}")
        if p**k > cap:
            raise FieldError(f"GF({p}^{k}) has {p**k} elements, above the cap of {cap}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = smallest_irreducible(p, k)
        self._build_tables()

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    # -- encoding ---------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def encode(self, coeffs: list[int]) -> int:
        coeffs = poly_mod(coeffs, self.modulus, self.p)
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    @property
    def elements(self) -> range:
        return range(self.q)

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        polys = [self.coeffs(a) for a in range(q)]
        self.add_table = [[self.encode([(x + y) % p for x, y in zip(polys[a], polys[b])])
                           for b in range(q)] for a in range(q)]
        self.neg_table = [self.encode([(-x) % p for x in polys[a]]) for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * self.k - 1)
                for i, x in enumerate(polys[a]):
                    if x:
                        for j, y in enumerate(polys[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                mul[a][b] = mul[b][a] = self.encode(prod)
        self.mul_table = mul
        self.inv_table = [0] * q
        for a in range(1, q):
            self.inv_table[a] = next(b for b in range(1, q) if mul[a][b] == 1)

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul_table[result][a]
        return result

    def arithmetic(self, op: str, a: int, b: int | None = None) -> int:
        """Dispatch by name: one of add, sub, mul, inv, neg."""
        for x in (a, b):
            if x is not None and not 0 <= x < self.q:
                raise FieldError(f"{x} is not an element of GF({self.q})")
        if op in ("inv", "neg"):
            return getattr(self, op)(a)
        if op in ("add", "sub", "mul"):
            if b is None:
                raise FieldError(f"{op} needs two operands")
            return getattr(self, op)(a, b)
        raise FieldError(f"unknown field operation {op!r}")

    # -- automorphisms ----------------------------------------------------

    def frobenius(self, j: int) -> tuple[int, ...]:
        """Value table of x -> x^(p^j)."""
        e = self.p ** (j % self.k)
        return tuple(self.pow(a, e) for a in range(self.q))

    def preserves_operations(self, table) -> bool:
        q = self.q
        if sorted(table) != list(range(q)):
            return False
        add, mul = self.add_table, self.mul_table
        for a in range(q):
            for b in range(q):
                if table[add[a][b]] != add[table[a]][table[b]]:
                    return False
                if table[mul[a][b]] != mul[table[a]][table[b]]:
                    return False
        return True

    def automorphisms(self) -> list[FieldAut]:
        """The ``k`` Frobenius powers, each checked exhaustively."""
        auts = []
        for j in range(self.k):
            h = FieldAut(self, j)
            if not self.preserves_operations(h.table):
                raise AssertionError(f"Frobenius power {j} of {self!r} is not an automorphism")
            auts.append(h)
        return auts

    # -- numpy views ------------------------------------------------------

    @cached_property
    def np_add(self) -> np.ndarray:
        return np.array(self.add_table, dtype=np.int64)

    @cached_property
    def np_mul(self) -> np.ndarray:
        return np.array(self.mul_table, dtype=np.int64)

    @cached_property
    def np_inv(self) -> np.ndarray:
        return np.array(self.inv_table, dtype=np.int64)

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


class FieldAut:
    """The automorphism x -> x^(p^j) of a field."""

    __slots__ = ("field", "j", "table")

    def __init__(self, field: Field, j: int):
        self.field = field
        self.j = j % field.k
        self.table = field.frobenius(self.j)

    def __call__(self, a: int) -> int:
        return self.table[a]

    def __mul__(self, other: FieldAut) -> FieldAut:
        return FieldAut(self.field, self.j + other.j)

    def inverse(self) -> FieldAut:
        return FieldAut(self.field, -self.j)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldAut) and self.field == other.field and self.j == other.j

    def __hash__(self) -> int:
        return hash((self.field, self.j))

    def __repr__(self) -> str:
        return f"FieldAut(j={self.j})"


def make_field(p: int, k: int = 1, cap: int = DEFAULT_FIELD_CAP) -> Field:
    return Field(p, k, cap=cap)


# -- exact linear algebra over a Field --------------------------------------

def row_reduce(field: Field, rows) -> list[list[int]]:
    """Reduced row echelon form (zero rows dropped)."""
    m = [list(r) for r in rows]
    if not m:
        return m
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(m)) if m[r][col]), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        inv = field.inv(m[pivot_row][col])
        m[pivot_row] = [field.mul(inv, x) for x in m[pivot_row]]
        for r in range(len(m)):
            if r != pivot_row and m[r][col]:
                f = m[r][col]
                m[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[r], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return m[:pivot_row]


def rank(field: Field, rows) -> int:
    return len(row_reduce(field, rows))


def solve(field: Field, matrix, rhs) -> list[int] | None:
    """Unique solution of ``matrix @ x = rhs``, or None when singular."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red = row_reduce(field, aug)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        return None
    return [red[i][n] for i in range(n)]
