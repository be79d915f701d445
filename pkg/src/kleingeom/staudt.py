"""Semilinear maps and the permutations they induce on projective space.

A semilinear map is stored as a pair ``(A, j)``: the field automorphism
``x -> x^(p^j)`` is applied to every coordinate first, then the matrix.
Under this convention

    (A1, j1) o (A2, j2) = (A1 * h1(A2), j1 + j2)

where ``h1(A2)`` applies the first automorphism entrywise.

Group construction enumerates matrices exhaustively and pushes them through
a numpy pipeline (field tables as lookup arrays); PGL(3, 4), with 262144
candidate matrices, takes a couple of seconds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .finite_field import Field, FieldAut, rank, solve
from .perm_group import DEFAULT_ORDER_CAP, CapExceeded, Perm, PermGroup, compose, conjugate, inverse
from .projective_space import AffinePatch, ProjSpace

DEFAULT_MATRIX_CAP = 10**7
_CHUNK = 1 << 16

Matrix = tuple[tuple[int, ...], ...]


class StaudtError(ValueError):
    pass


@dataclass(frozen=True)
class SemilinearMap:
    matrix: Matrix
    j: int = 0

    @property
    def size(self) -> int:
        return len(self.matrix)

    def to_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "frobenius_exponent": self.j}


def identity_matrix(d: int) -> Matrix:
    return tuple(tuple(int(i == k) for k in range(d)) for i in range(d))


def mat_mul(F: Field, A: Matrix, B: Matrix) -> Matrix:
    d = len(A)
    out = []
    for i in range(d):
        row = []
        for k in range(d):
            acc = 0
            for t in range(d):
                acc = F.add(acc, F.mul(A[i][t], B[t][k]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def apply_aut(h: FieldAut, A: Matrix) -> Matrix:
    return tuple(tuple(h(x) for x in row) for row in A)


def is_invertible(F: Field, A: Matrix) -> bool:
    return rank(F, A) == len(A)


def compose_semilinear(F: Field, f1: SemilinearMap, f2: SemilinearMap) -> SemilinearMap:
    """``f1 o f2`` (apply f2 first)."""
    if f1.size != f2.size:
        raise StaudtError("semilinear maps of different sizes")
    h1 = FieldAut(F, f1.j)
    return SemilinearMap(mat_mul(F, f1.matrix, apply_aut(h1, f2.matrix)), (f1.j + f2.j) % F.k)


# -- batched projectivization ------------------------------------------------

def _images(space: ProjSpace, mats: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Point ids of ``A v`` for every matrix and every point; -1 if ``A v = 0``."""
    F = space.field
    add, mul, inv = F.np_add, F.np_mul, F.np_inv
    d = space.n + 1
    out = np.empty((mats.shape[0], coords.shape[0], d), dtype=np.int64)
    for r in range(d):
        acc = mul[mats[:, r, 0][:, None], coords[None, :, 0]]
        for c in range(1, d):
            acc = add[acc, mul[mats[:, r, c][:, None], coords[None, :, c]]]
        out[:, :, r] = acc
    nonzero = out != 0
    alive = nonzero.any(axis=2)
    lead = np.take_along_axis(out, nonzero.argmax(axis=2)[..., None], axis=2)
    normed = mul[inv[lead], out]
    ids = space.code_lookup[space.encode_rows(normed)]
    ids[~alive] = -1
    return ids


def _twisted_coords(space: ProjSpace, j: int) -> np.ndarray:
    table = np.array(space.field.frobenius(j), dtype=np.int64)
    return table[space.coord_array]


def projectivize(space: ProjSpace, f: SemilinearMap) -> Perm:
    """The permutation of point ids induced by ``f``."""
    d = space.n + 1
    if f.size != d:
        raise StaudtError(f"matrix size {f.size} does not match P_{space.n}")
    mats = np.array(f.matrix, dtype=np.int64).reshape(1, d, d)
    ids = _images(space, mats, _twisted_coords(space, f.j))[0]
    if (ids < 0).any():
        raise StaudtError("singular matrix")
    return tuple(ids.tolist())


def projectivize_many(space: ProjSpace, maps) -> list[Perm]:
    """``projectivize`` over a sequence of maps, batched per automorphism."""
    d = space.n + 1
    maps = list(maps)
    out: list[Perm | None] = [None] * len(maps)
    for j in sorted({f.j for f in maps}):
        idx = [i for i, f in enumerate(maps) if f.j == j]
        mats = np.array([maps[i].matrix for i in idx], dtype=np.int64).reshape(-1, d, d)
        ids = _images(space, mats, _twisted_coords(space, j))
        if (ids < 0).any():
            raise StaudtError("singular matrix")
        for i, row in zip(idx, ids.tolist()):
            out[i] = tuple(row)
    return out


def _matrix_chunks(q: int, d: int):
    total = q ** (d * d)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = np.empty((idx.shape[0], d * d), dtype=np.int64)
        for pos in range(d * d - 1, -1, -1):
            idx, digits[:, pos] = np.divmod(idx, q)
        yield digits.reshape(-1, d, d)


def _check_matrix_cap(space: ProjSpace, cap: int) -> None:
    d = space.n + 1
    total = space.field.q ** (d * d)
    if total > cap:
        raise StaudtError(f"{total} candidate matrices exceed the enumeration cap of {cap}")


def _enumerate_projectivities(space: ProjSpace, js, cap: int) -> tuple[np.ndarray, int]:
    """Distinct permutations over all invertible matrices and automorphisms in ``js``.

    Also returns how many (matrix, automorphism) pairs were invertible.
    """
    _check_matrix_cap(space, cap)
    d = space.n + 1
    found = []
    invertible = 0
    for j in js:
        coords = _twisted_coords(space, j)
        for mats in _matrix_chunks(space.field.q, d):
            ids = _images(space, mats, coords)
            ok = (ids >= 0).all(axis=1)
            invertible += int(ok.sum())
            found.append(np.unique(ids[ok], axis=0))
    return np.unique(np.concatenate(found), axis=0), invertible


def _as_group(space: ProjSpace, perms: np.ndarray, order_cap: int) -> PermGroup:
    if len(perms) > order_cap:
        raise CapExceeded(f"group of order {len(perms)} exceeds the order cap of {order_cap}")
    elements = [tuple(row) for row in perms.tolist()]
    return PermGroup.from_elements(elements, len(space))


def pgl_group(space: ProjSpace, cap: int = DEFAULT_MATRIX_CAP,
              order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """PGL(n+1, q) acting on the points of P_n."""
    perms, n_gl = _enumerate_projectivities(space, [0], cap)
    if n_gl != len(perms) * (space.field.q - 1):
        raise AssertionError(
            f"|GL| = {n_gl} is not (q-1) * |PGL| = {(space.field.q - 1) * len(perms)}")
    return _as_group(space, perms, order_cap)


def pgammal_group(space: ProjSpace, cap: int = DEFAULT_MATRIX_CAP,
                  order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """All Staudt projectivities: PGammaL(n+1, q) acting on P_n."""
    F = space.field
    linear, _ = _enumerate_projectivities(space, [0], cap)
    perms = linear
    if F.k > 1:
        twisted, _ = _enumerate_projectivities(space, range(1, F.k), cap)
        perms = np.unique(np.concatenate([linear, twisted]), axis=0)
    pgl_count = len(linear)
    if len(perms) != pgl_count * F.k:
        raise AssertionError(f"|PGammaL| = {len(perms)} is not {F.k} * |PGL| = {F.k * pgl_count}")
    return _as_group(space, perms, order_cap)


# -- the projective line: translations, homotheties, field extraction --------

def _require_line(space: ProjSpace) -> None:
    if space.n != 1:
        raise StaudtError("this operation is defined on the projective line only")


def point_at(space: ProjSpace, lam: int | None) -> int:
    """Id of P_lam = (1, lam) on the line; ``None`` gives P_inf = (0, 1)."""
    return space.index[(0, 1)] if lam is None else space.index[(1, lam)]


def translation_homothety(patch: AffinePatch, kind: str, mu: int) -> Perm:
    space = patch.space
    _require_line(space)
    if kind == "translation":
        A = ((1, 0), (mu, 1))
    elif kind == "homothety":
        if mu == 0:
            raise StaudtError("a homothety needs a nonzero ratio")
        A = ((1, 0), (0, mu))
    else:
        raise StaudtError(f"unknown kind {kind!r}")
    return projectivize(space, SemilinearMap(A))


def standard_frame(space: ProjSpace) -> list[int]:
    """Coordinate points e_0..e_n followed by the unit point."""
    d = space.n + 1
    ids = [space.index[tuple(int(i == k) for k in range(d))] for i in range(d)]
    return ids + [space.index[(1,) * d]]


def frame_matrix(space: ProjSpace, images: list[int]) -> Matrix | None:
    """Matrix sending the standard frame to ``images``, or None if degenerate.

    Columns are representatives of the first n+1 images, scaled so that they
    sum to a representative of the last one.
    """
    F = space.field
    d = space.n + 1
    cols = [space.points[i] for i in images[:d]]
    unit = space.points[images[d]]
    if rank(F, cols) < d:
        return None
    basis = tuple(tuple(cols[c][r] for c in range(d)) for r in range(d))
    scal = solve(F, basis, unit)
    if scal is None or 0 in scal:
        return None
    return tuple(tuple(F.mul(basis[r][c], scal[c]) for c in range(d)) for r in range(d))


def reference_map(space: ProjSpace, images: list[int]) -> Perm:
    A = frame_matrix(space, images)
    if A is None:
        raise StaudtError(f"points {images} are not a projective frame")
    return projectivize(space, SemilinearMap(A))


def extract_field_aut(space: ProjSpace, phi: Perm) -> tuple[int, ...]:
    """Read off the map lam -> h(lam) with phi(P_lam) = P'_{h(lam)}.

    The primed reference is the image of (P_0, P_inf, P_1); primed affine
    coordinates are measured through the projectivity taking the standard
    reference to the primed one.
    """
    _require_line(space)
    F = space.field
    ref = [point_at(space, 0), point_at(space, None), point_at(space, 1)]
    psi_inv = inverse(reference_map(space, [phi[x] for x in ref]))
    table = []
    for lam in range(F.q):
        v = space.points[psi_inv[phi[point_at(space, lam)]]]
        table.append(v[1])
    return tuple(table)


def frobenius_exponent(field: Field, table) -> int | None:
    for j in range(field.k):
        if tuple(table) == field.frobenius(j):
            return j
    return None


def verify_lemma2(space: ProjSpace, phi: Perm, h: tuple[int, ...]) -> dict[str, bool]:
    """Check the four facts that make ``h`` a field automorphism.

    Conjugating each translation (homothety) by ``phi`` must give the primed
    translation (homothety) by ``h(mu)``, and ``h`` must be additive and
    multiplicative.  Failures come back as False flags.
    """
    _require_line(space)
    F = space.field
    patch = space.affine_patch()
    ref = [point_at(space, 0), point_at(space, None), point_at(space, 1)]
    psi = reference_map(space, [phi[x] for x in ref])
    psi_inv = inverse(psi)

    def primed(kind, mu):
        return compose(psi, compose(translation_homothety(patch, kind, mu), psi_inv))

    translation = all(
        conjugate(phi, translation_homothety(patch, "translation", mu)) == primed("translation", h[mu])
        for mu in range(F.q))
    homothety = all(
        h[mu] != 0 and
        conjugate(phi, translation_homothety(patch, "homothety", mu)) == primed("homothety", h[mu])
        for mu in range(1, F.q))
    pairs = list(itertools.product(range(F.q), repeat=2))
    return {
        "translation_conjugation": translation,
        "homothety_conjugation": homothety,
        "additive": all(h[F.add(a, b)] == F.add(h[a], h[b]) for a, b in pairs),
        "multiplicative": all(h[F.mul(a, b)] == F.mul(h[a], h[b]) for a, b in pairs),
    }


# -- recovering (A, h) from a permutation ------------------------------------

def decompose_staudt(space: ProjSpace, phi: Perm) -> SemilinearMap | None:
    """Find ``(A, j)`` with ``projectivize(A, j) == phi``, or None.

    The frame images fix A up to a global scalar because every automorphism
    fixes 0 and 1; each automorphism is then tried in turn.
    """
    A = frame_matrix(space, [phi[x] for x in standard_frame(space)])
    if A is None:
        return None
    phi = tuple(phi)
    for j in range(space.field.k):
        f = SemilinearMap(A, j)
        if projectivize(space, f) == phi:
            return f
    return None


def is_collineation(space: ProjSpace, phi: Perm) -> bool:
    if space.n < 2:
        raise StaudtError("alignment is vacuous on a projective line")
    lines = set(space.lines)
    return all(frozenset(phi[x] for x in L) in lines for L in space.lines)


def collineations_backtrack(space: ProjSpace) -> list[Perm]:
    """Every collineation, found by a search that never builds a matrix.

    Points are assigned images in id order; a partial assignment survives only
    while it preserves both collinearity and non-collinearity of all assigned
    triples.
    """
    if space.n < 2:
        raise StaudtError("alignment is vacuous on a projective line")
    m = len(space)
    line_of = {}
    for L in space.lines:
        for a, b in itertools.combinations(sorted(L), 2):
            line_of[a, b] = line_of[b, a] = L
    img = [-1] * m
    used = [False] * m
    out: list[Perm] = []

    def consistent(x: int, y: int) -> bool:
        for a in range(x):
            for b in range(a + 1, x):
                if (x in line_of[a, b]) != (y in line_of[img[a], img[b]]):
                    return False
        return True

    def extend(x: int) -> None:
        if x == m:
            out.append(tuple(img))
            return
        for y in range(m):
            if not used[y] and consistent(x, y):
                img[x] = y
                used[y] = True
                extend(x + 1)
                used[y] = False
        img[x] = -1

    extend(0)
    return sorted(out)


def collineations_scan(space: ProjSpace) -> list[Perm]:
    """Every collineation, by filtering all m! bijections."""
    return [g for g in itertools.permutations(range(len(space))) if is_collineation(space, g)]
