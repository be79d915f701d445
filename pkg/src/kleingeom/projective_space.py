"""Point sets of P_n(F_q) with canonical indexing, lines and the affine patch."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .finite_field import Field, rank

DEFAULT_POINT_CAP = 1000


class SpaceError(ValueError):
    pass


def normalize(F: Field, v) -> tuple[int, ...]:
    """Scale ``v`` so its first nonzero coordinate is 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        raise SpaceError("the zero vector is not a projective point")
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def point_count(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


class ProjSpace:
    """All points of P_n over a finite field.

    Points are listed in lexicographic order of their canonical coordinate
    tuples, so point ids are stable across runs.
    """

    def __init__(self, field: Field, n: int, cap: int = DEFAULT_POINT_CAP):
        if n < 1:
            raise SpaceError(f"projective dimension must be >= 1, got {n}")
        count = point_count(field.q, n)
        if count > cap:
            raise SpaceError(f"P_{n}(F_{field.q}) has {count} points, above the cap of {cap}")
        self.field = field
        self.n = n
        self.points: list[tuple[int, ...]] = [
            v for v in itertools.product(range(field.q), repeat=n + 1)
            if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1
        ]
        self.index: dict[tuple[int, ...], int] = {v: i for i, v in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"ProjSpace(q={self.field.q}, n={self.n})"

    @property
    def label(self) -> str:
        return f"P{self.n}(F{self.field.q})"

    def point_id(self, v) -> int:
        return self.index[normalize(self.field, v)]

    def _check_distinct(self, *ids) -> None:
        if len(set(ids)) != len(ids):
            raise SpaceError(f"point ids must be distinct, got {ids}")
        for i in ids:
            if not 0 <= i < len(self.points):
                raise SpaceError(f"no point with id {i}")

    def collinear_rank(self, p1: int, p2: int, p3: int) -> bool:
        """Rank test on the 3 x (n+1) coordinate matrix."""
        self._check_distinct(p1, p2, p3)
        return rank(self.field, [self.points[i] for i in (p1, p2, p3)]) <= 2

    def line_through(self, p1: int, p2: int) -> frozenset[int]:
        self._check_distinct(p1, p2)
        F = self.field
        u, v = self.points[p1], self.points[p2]
        out = {p1}
        for a in range(F.q):
            w = tuple(F.add(F.mul(a, x), y) for x, y in zip(u, v))
            out.add(self.point_id(w))
        return frozenset(out)

    @cached_property
    def lines(self) -> list[frozenset[int]]:
        """Every line, each listed once, sorted by their sorted point ids."""
        seen = set()
        for a, b in itertools.combinations(range(len(self)), 2):
            seen.add(self.line_through(a, b))
        return sorted(seen, key=sorted)

    def affine_patch(self) -> AffinePatch:
        return AffinePatch.of(self)

    # -- numpy helpers used by batched projectivization --------------------

    @cached_property
    def coord_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64)

    @cached_property
    def code_lookup(self) -> np.ndarray:
        """Map ``encode_rows(canonical vector)`` to point id; -1 elsewhere."""
        table = np.full(self.field.q ** (self.n + 1), -1, dtype=np.int64)
        table[self.encode_rows(self.coord_array)] = np.arange(len(self))
        return table

    def encode_rows(self, arr: np.ndarray) -> np.ndarray:
        weights = self.field.q ** np.arange(self.n, -1, -1, dtype=np.int64)
        return arr @ weights

    def to_dict(self) -> dict:
        return {"field": self.field.to_dict(), "n": self.n, "points": [list(v) for v in self.points]}


def enumerate_points(field: Field, n: int, cap: int = DEFAULT_POINT_CAP) -> ProjSpace:
    return ProjSpace(field, n, cap=cap)


@dataclass(frozen=True)
class AffinePatch:
    """Complement of the hyperplane x_0 = 0.

    ``affine_points[i]`` is the projective id of the affine point whose
    coordinate vector is ``vectors[i]``, i.e. the point (1, v_1, ..., v_n).
    """

    space: ProjSpace
    infinity: frozenset[int]
    affine_points: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...] = dc_field(repr=False)

    @classmethod
    def of(cls, space: ProjSpace) -> AffinePatch:
        infinity = frozenset(i for i, v in enumerate(space.points) if v[0] == 0)
        affine = tuple(i for i in range(len(space)) if i not in infinity)
        vectors = tuple(space.points[i][1:] for i in affine)
        return cls(space, infinity, affine, vectors)

    @cached_property
    def position(self) -> dict[int, int]:
        """Projective id -> affine index."""
        return {pid: i for i, pid in enumerate(self.affine_points)}

    def point_of(self, vector) -> int:
        """Projective id of the affine point with the given coordinates."""
        return self.space.index[(1, *vector)]

    def __len__(self) -> int:
        return len(self.affine_points)
