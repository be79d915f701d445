"""Permutations of ``{0, ..., m-1}`` and fully enumerated permutation groups.

A permutation is a tuple of images: ``g[i]`` is the image of ``i``.
Products follow the functional convention, ``compose(a, b)`` applies ``b``
first.  Groups keep their whole element set, which is affordable for the
instances handled here (orders up to a few hundred thousand) and keeps every
membership test exact.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from operator import itemgetter
from typing import Iterable, Sequence

Perm = tuple[int, ...]

DEFAULT_ORDER_CAP = 10**6
DEFAULT_FACTORIAL_CAP = 4 * 10**6


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


def identity(m: int) -> Perm:
    return tuple(range(m))


def compose(a: Perm, b: Perm) -> Perm:
    if len(a) != len(b):
        raise GroupError(f"degree mismatch: {len(a)} vs {len(b)}")
    return tuple(a[i] for i in b)


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def conjugate(g: Perm, h: Perm) -> Perm:
    """``g h g^-1``."""
    out = [0] * len(g)
    for i, x in enumerate(h):
        out[g[i]] = g[x]
    return tuple(out)


def perm_algebra(op: str, a: Perm, b: Perm | None = None) -> Perm:
    if op == "compose":
        return compose(a, b)
    if op == "inverse":
        return inverse(a)
    if op == "identity":
        return identity(len(a))
    raise GroupError(f"unknown permutation operation {op!r}")


def is_permutation(a: Sequence[int]) -> bool:
    return sorted(a) == list(range(len(a)))


def cycle_type(a: Perm) -> tuple[int, ...]:
    seen = [False] * len(a)
    lengths = []
    for i in range(len(a)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def fixed_points(a: Perm) -> list[int]:
    return [i for i, x in enumerate(a) if i == x]


def _closure(gens: Sequence[Perm], m: int, cap: int) -> set[Perm]:
    e = identity(m)
    elements = {e}
    frontier = deque([e])
    while frontier:
        x = frontier.popleft()
        for s in gens:
            y = tuple(s[i] for i in x)
            if y not in elements:
                elements.add(y)
                if len(elements) > cap:
                    raise CapExceeded(
                        f"closure exceeded the order cap of {cap} ({len(elements)} elements so far)")
                frontier.append(y)
    return elements


class PermGroup:
    """A permutation group stored with generators and its full element set."""

    def __init__(self, degree: int, generators: Iterable[Perm], elements: Iterable[Perm]):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        self.elements = frozenset(elements)

    @classmethod
    def from_generators(cls, gens: Sequence[Perm], degree: int | None = None,
                        cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
        gens = [tuple(g) for g in gens]
        if degree is None:
            if not gens:
                raise GroupError("cannot infer the degree from an empty generator list")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise GroupError(f"generator {g} does not have degree {degree}")
            if not is_permutation(g):
                raise GroupError(f"{g} is not a permutation")
        return cls(degree, gens, _closure(gens, degree, cap))

    @classmethod
    def from_elements(cls, elements: Iterable[Perm], degree: int, seed: int = 0) -> PermGroup:
        """Wrap a known element set, choosing a small generating set.

        Generators are drawn at random (seeded) until they generate the whole
        set; the final closure doubles as a check that the set is a group.
        """
        elements = frozenset(elements)
        pool = sorted(elements)
        rng = random.Random(seed)
        gens: list[Perm] = []
        current = {identity(degree)}
        while len(current) < len(elements):
            candidates = [x for x in pool if x not in current] if len(pool) < 64 else None
            g = rng.choice(candidates) if candidates is not None else rng.choice(pool)
            if g in current:
                continue
            gens.append(g)
            current = _closure(gens, degree, len(elements))
        if current != elements:
            raise GroupError("element set is not closed under composition")
        return cls(degree, gens, elements)

    @classmethod
    def symmetric(cls, m: int) -> PermGroup:
        if m == 1:
            return cls(1, [], [identity(1)])
        gens = [(1, 0) + tuple(range(2, m)), tuple(range(1, m)) + (0,)]
        return cls(m, gens, itertools.permutations(range(m)))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def fingerprint(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.elements))

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.elements <= other.elements

    def orbit(self, point: int) -> set[int]:
        seen = {point}
        todo = [point]
        while todo:
            x = todo.pop()
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def to_dict(self) -> dict:
        return {"degree": self.degree, "order": self.order,
                "generators": [list(g) for g in self.generators]}


def generate(gens: Sequence[Perm], cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    return PermGroup.from_generators(gens, cap=cap)


def normalizes(g: Perm, H: PermGroup) -> bool:
    """Whether ``g H g^-1 = H``.

    Only generators are conjugated: conjugation by ``g`` is an injective
    homomorphism, so ``g <gens> g^-1 <= H`` gives a subgroup of H of the same
    finite order, hence equality.
    """
    if len(g) != H.degree:
        raise GroupError(f"degree mismatch: {len(g)} vs {H.degree}")
    return all(conjugate(g, h) in H.elements for h in H.generators)


def stabilizer_orbit(G: PermGroup, fixed: Iterable[int], moving: int) -> set[int]:
    """Orbit of ``moving`` under the pointwise stabilizer of ``fixed``."""
    fixed = list(fixed)
    return {g[moving] for g in G.elements if all(g[f] == f for f in fixed)}


# -- exhaustive scans over the symmetric group --------------------------------
#
# Candidates are produced in lexicographic order.  A scan can be split by the
# image of 0: each block is a contiguous lexicographic range, so concatenating
# the per-block results in block order reproduces the sequential scan.

def _candidates(m: int, first: int | None):
    if first is None:
        yield from itertools.permutations(range(m))
        return
    rest = [x for x in range(m) if x != first]
    for tail in itertools.permutations(rest):
        yield (first, *tail)


def _check_factorial(m: int, cap: int) -> None:
    if math.factorial(m) > cap:
        raise CapExceeded(f"{m}! = {math.factorial(m)} candidates exceed the scan cap of {cap}")


def _getter(idx: Sequence[int]):
    if len(idx) == 1:
        i = idx[0]
        return lambda s: (s[i],)
    return itemgetter(*idx)


def _normalizer_block(args) -> list[Perm]:
    m, first, gens, elements = args
    m_range = range(m)
    getters = [_getter(h) for h in gens]
    out = []
    for g in _candidates(m, first):
        ginv = _getter(sorted(m_range, key=g.__getitem__))
        for get in getters:
            # g h g^-1 == (g o h) o g^-1
            if ginv(get(g)) not in elements:
                break
        else:
            out.append(g)
    return out


def _run_blocks(worker, m: int, payload: tuple, jobs: int) -> list:
    if jobs <= 1:
        return [worker((m, None, *payload))]
    tasks = [(m, first, *payload) for first in range(m)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def normalizer_brute(H: PermGroup, factorial_cap: int = DEFAULT_FACTORIAL_CAP,
                     jobs: int = 1) -> PermGroup:
    """Normalizer of H in Sym(m) by scanning all m! permutations."""
    m = H.degree
    _check_factorial(m, factorial_cap)
    gens = H.generators or [identity(m)]
    blocks = _run_blocks(_normalizer_block, m, (gens, H.elements), jobs)
    found = [g for block in blocks for g in block]
    N = PermGroup(m, H.generators, found)
    if not H.elements <= N.elements or N.order % H.order:
        raise AssertionError("normalizer scan lost elements of H")
    return N


def _conjugate_block(args) -> list[tuple[Perm, frozenset]]:
    m, first, gens, elements = args
    getters = [_getter(h) for h in gens]
    m_range = range(m)
    found: list[frozenset] = []
    reps: list[Perm] = []
    containing: dict[Perm, list[int]] = {}
    for g in _candidates(m, first):
        ginv = _getter(sorted(m_range, key=g.__getitem__))
        conj_gens = [ginv(get(g)) for get in getters]
        hit = False
        for idx in containing.get(conj_gens[0], ()):
            if all(c in found[idx] for c in conj_gens[1:]):
                hit = True
                break
        if hit:
            continue
        new = frozenset(ginv(_getter(h)(g)) for h in elements)
        found.append(new)
        reps.append(g)
        for x in new:
            containing.setdefault(x, []).append(len(found) - 1)
    return list(zip(reps, found))


def conjugates_of(H: PermGroup, factorial_cap: int = DEFAULT_FACTORIAL_CAP,
                  jobs: int = 1) -> list[PermGroup]:
    """Distinct conjugates g H g^-1 over Sym(m), in first-encounter order.

    The lexicographic scan starts at the identity, so the first entry is H.
    """
    m = H.degree
    _check_factorial(m, factorial_cap)
    gens = H.generators or [identity(m)]
    blocks = _run_blocks(_conjugate_block, m, (gens, sorted(H.elements)), jobs)
    seen: set[frozenset] = set()
    out = []
    for block in blocks:
        for g, elems in block:
            if elems not in seen:
                seen.add(elems)
                out.append(PermGroup(m, [conjugate(g, h) for h in H.generators], elems))
    return out
