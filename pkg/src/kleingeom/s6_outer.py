"""The outer automorphism of S6 from the projective line over GF(5).

PGL(2, 5) acts on the six points of P_1(F_5) as a subgroup of index 6 that
is self-normalizing, so it has exactly six conjugates.  Conjugation permutes
those six subgroups, giving a map F: S6 -> S6 that turns out to be an
automorphism, and not an inner one.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field

from .finite_field import Field
from .klein import REPORT_VERSION, projective_geometry
from .perm_group import (
    Perm, PermGroup, compose, conjugate, conjugates_of, cycle_type, identity,
)

DEGREE = 6


@dataclass
class OuterAutReport:
    pgl: PermGroup
    conjugates: list[PermGroup]
    table: dict[Perm, Perm]
    labeling: str = "lex"
    flags: dict = dc_field(default_factory=dict)
    witnesses: dict = dc_field(default_factory=dict)
    duration_ms: int = 0

    @property
    def passed(self) -> bool:
        return bool(self.flags) and all(self.flags.values())

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "report": "s6_outer",
            "version": REPORT_VERSION,
            "geometry": "P1(F5)",
            "labeling": self.labeling,
            "orders": {"points": DEGREE, "pgl": self.pgl.order, "symmetric": len(self.table),
                       "index": len(self.table) // self.pgl.order,
                       "conjugates": len(self.conjugates)},
            "conjugates": [
                {"label": f"H{i + 1}", "order": H.order,
                 "generators": [list(g) for g in H.generators],
                 "fingerprint_head": [list(g) for g in H.fingerprint()[:3]]}
                for i, H in enumerate(self.conjugates)
            ],
            "table": [[list(t), list(self.table[t])] for t in sorted(self.table)],
            "flags": dict(sorted(self.flags.items())),
            "witnesses": self.witnesses,
            "passed": self.passed,
        }
        if include_timing:
            d["duration_ms"] = self.duration_ms
        return d


def _label_conjugates(pgl: PermGroup, labeling: str) -> list[PermGroup]:
    conj = conjugates_of(pgl)
    if labeling == "lex":
        return conj
    if labeling == "revlex":
        # first encounter when scanning S6 in reverse lexicographic order
        order: list[PermGroup] = []
        for g in sorted(itertools.permutations(range(DEGREE)), reverse=True):
            gens = [conjugate(g, h) for h in pgl.generators]
            H = next(c for c in conj if all(x in c.elements for x in gens))
            if H not in order:
                order.append(H)
            if len(order) == len(conj):
                break
        return order
    raise ValueError(f"unknown labeling {labeling!r}")


def induced_action(conj: list[PermGroup], tau: Perm) -> Perm:
    """The permutation i -> j of labels with tau H_i tau^-1 = H_j."""
    out = []
    for H in conj:
        gens = [conjugate(tau, h) for h in H.generators]
        out.append(next(j for j, K in enumerate(conj) if all(x in K.elements for x in gens)))
    return tuple(out)


def build_outer_automorphism(labeling: str = "lex") -> OuterAutReport:
    start = time.perf_counter()
    geom = projective_geometry(Field(5, 1), 1)
    pgl = geom.G
    if geom.degree != DEGREE or pgl.order != 120:
        raise AssertionError(f"unexpected P1(F5) data: {geom.degree} points, |PGL| = {pgl.order}")
    conj = _label_conjugates(pgl, labeling)
    if len(conj) != 6 or (labeling == "lex" and conj[0] != pgl):
        raise AssertionError("expected six conjugates with PGL first")
    table = {tau: induced_action(conj, tau) for tau in itertools.permutations(range(DEGREE))}
    rep = OuterAutReport(pgl, conj, table, labeling)
    rep.duration_ms = round(1000 * (time.perf_counter() - start))
    return rep


def verify_outer(rep: OuterAutReport) -> dict[str, bool]:
    """Recompute every flag from the table alone (plus PGL and its conjugates)."""
    start = time.perf_counter()
    F = rep.table
    S6 = sorted(F)
    flags = {}

    flags["is_homomorphism"] = all(
        F[compose(s, t)] == compose(F[s], F[t]) for s in S6 for t in S6)
    flags["is_bijective"] = len(set(F.values())) == len(S6) == 720
    flags["trivial_kernel"] = [t for t in S6 if F[t] == identity(DEGREE)] == [identity(DEGREE)]

    h1 = rep.conjugates.index(rep.pgl)
    image = {F[g] for g in rep.pgl.elements}
    stab = {t for t in S6 if t[h1] == h1}
    flags["fixes_stabilizer_image"] = image == stab and len(image) == 120

    # an inner automorphism would carry PGL, which moves every point, to a
    # subgroup that also moves every point; F(PGL) fixes the label of H1
    no_fixed = all(len(rep.pgl.orbit(x)) == DEGREE for x in range(DEGREE))
    flags["outer_by_fixed_point"] = no_fixed and all(g[h1] == h1 for g in image)

    disagreements = []
    for g in S6:
        disagreements.append(sum(F[t] != conjugate(g, t) for t in S6))
    flags["outer_exhaustive"] = min(disagreements) > 0
    flags["is_outer"] = flags["outer_by_fixed_point"] and flags["outer_exhaustive"]

    transposition = (1, 0) + tuple(range(2, DEGREE))
    image_types = sorted({cycle_type(F[t]) for t in S6 if cycle_type(t) == (2, 1, 1, 1, 1)})
    flags["moves_transposition_class"] = image_types == [(2, 2, 2)]

    rep.flags = flags
    rep.witnesses = {
        "transposition": list(transposition),
        "transposition_image": list(F[transposition]),
        "transposition_image_cycle_type": list(cycle_type(F[transposition])),
        "min_disagreements_with_inner": min(disagreements),
        "h1_label": f"H{h1 + 1}",
    }
    rep.duration_ms += round(1000 * (time.perf_counter() - start))
    return flags


def relabeling_conjugator(a: OuterAutReport, b: OuterAutReport) -> Perm | None:
    """Some g with b.F(t) = g a.F(t) g^-1 for all t, or None."""
    for g in itertools.permutations(range(DEGREE)):
        if all(b.table[t] == conjugate(g, a.table[t]) for t in a.table):
            return g
    return None
