"""Acceptance criteria, one recorded pass/fail line each.

Every tolerance is exact (set or integer equality).  Wall-clock limits are
the stated runtime budgets and are asserted alongside the result.
"""

import io
import itertools
import json
import math
import random
import time

from kleingeom import cli
from kleingeom.klein import (
    HSetCache, automorphism_group, verify_lemma1, verify_lemma2_campaign,
    verify_theorem_affine,
)
from kleingeom.perm_group import compose, cycle_type, identity
from kleingeom.s6_outer import build_outer_automorphism, verify_outer
from kleingeom.staudt import (
    SemilinearMap, collineations_scan, compose_semilinear, decompose_staudt, is_invertible,
    pgammal_group, pgl_group, projectivize, projectivize_many,
)

# runs shared with the orbit-stabilizer check of criterion 8
BRUTE_RUNS = {}

class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start

def test_c1_s6_outer(criterion):
    with Clock() as clk:
        rep = build_outer_automorphism()
        flags = verify_outer(rep)
    F = rep.table
    checks = {
        "points": len(rep.pgl.orbit(0)) == 6,
        "pgl_order": rep.pgl.order == 120 == 6 * 5 * 4,
        "index": math.factorial(6) // rep.pgl.order == 6,
        "conjugates": len(rep.conjugates) == 6 == len({C.elements for C in rep.conjugates}),
        "identity": F[identity(6)] == identity(6),
        "transposition_to_2_2_2": cycle_type(F[(1, 0, 2, 3, 4, 5)]) == (2, 2, 2),
        **flags,
        "runtime": clk.seconds < 10,
    }
    failed = [k for k, ok in checks.items() if not ok]
    assert criterion("C1 S6 outer automorphism from P1(F5)", not failed,
                     f"{len(checks)} checks, failed={failed}, "
                     f"min inner disagreement={rep.witnesses['min_disagreements_with_inner']}, "
                     f"{clk.seconds:.1f}s")

THEOREM1 = [
    # (p, k, n, points, normalizer order, PGL order, budget seconds)
    (5, 1, 1, 6, 120, 120, 1),
    (2, 2, 1, 5, 120, 60, 1),
    (7, 1, 1, 8, 336, 336, 30),
    (2, 1, 2, 7, 168, 168, 5),
    (2, 3, 1, 9, 1512, 504, 300),
    (3, 2, 1, 10, 1440, 720, 1800),
]

def test_c2_theorem1_brute(criterion, proj):
    details, ok = [], True
    for p, k, n, points, order, pgl_order, budget in THEOREM1:
        geom = proj(p, k, n)
        with Clock() as clk:
            rep = automorphism_group(geom)
        BRUTE_RUNS[geom.space.label] = rep
        # equal orders plus inclusion both ways is equality of element sets
        good = (geom.degree == points and rep.passed
                and rep.normalizer_order == rep.reference_order == order
                and rep.structural_order == pgl_order and clk.seconds < budget)
        ok &= good
        details.append(f"{geom.space.label}: |N|={rep.normalizer_order} "
                       f"|PGL|={rep.structural_order} {clk.seconds:.1f}s")
    assert criterion("C2 Theorem 1 brute force", ok, "; ".join(details))

def test_c3_theorem1_sampled(criterion, proj):
    with Clock() as clk:
        geom = proj(2, 2, 2)
        rep = automorphism_group(geom, "sampled", samples=10**5, seed=0)
    s = rep.sampling
    ok = (geom.degree == 21 and rep.passed and rep.reference_order == 120960
          and rep.flags["reference_in_normalizer"]
          and rep.flags["outside_samples_fail_normalizes"]
          and s["outside_reference"] >= 10**5 and clk.seconds < 300)
    assert criterion("C3 Theorem 1 sampled on P2(F4)", ok,
                     f"|PGammaL|={rep.reference_order} in N exhaustively; "
                     f"{s['outside_reference']} outside samples, "
                     f"{s['normalizing']} normalizing; {clk.seconds:.1f}s")

def test_c4_lemma1(criterion, proj):
    expected = {(2, 1, 2): (35, 7), (3, 1, 2): (286, 52), (5, 1, 1): (20, 20)}
    details, ok = [], True
    with Clock() as clk:
        for (p, k, n), (triples, collinear) in expected.items():
            rep = verify_lemma1(proj(p, k, n))
            ok &= (rep.passed and rep.triples == rep.agreements == triples
                   and rep.collinear == collinear and not rep.disagreements)
            details.append(f"{rep.geometry['label']} {rep.agreements}/{rep.triples}")
    ok &= clk.seconds < 60
    assert criterion("C4 Lemma 1 against the rank oracle", ok,
                     f"{', '.join(details)}; {clk.seconds:.1f}s")

def test_c5_lemma2(criterion, fields, space):
    details, ok = [], True
    with Clock() as clk:
        for p, k in [(2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]:
            F = fields(p, k)
            rep = verify_lemma2_campaign(F)
            order = pgammal_group(space(p, k, 1)).order
            good = rep.passed and rep.checked == order and not rep.failures
            if rep.negative_witness is None:
                # no bijection of the line lies outside PGammaL, so the
                # negative half holds vacuously; confirm that directly
                good &= order == math.factorial(F.q + 1)
                details.append(f"F{F.q}: {rep.checked} pass, negative vacuous")
            else:
                good &= not all(rep.negative_flags.values())
                details.append(f"F{F.q}: {rep.checked} pass, negative has a false flag")
            ok &= good
    ok &= clk.seconds < 120
    assert criterion("C5 Lemma 2 field automorphism extraction", ok,
                     f"{'; '.join(details)}; {clk.seconds:.1f}s")

def test_c6_affine(criterion, fields):
    details, ok = [], True
    with Clock() as clk:
        for p, k, n, order in [(2, 2, 1, 24), (3, 1, 2, 432), (5, 1, 1, 20)]:
            rep = verify_theorem_affine(fields(p, k), n)
            ok &= (rep.asserted and rep.passed
                   and rep.normalizer_order == rep.reference_order == order)
            details.append(f"{rep.geometry['label']}: {rep.normalizer_order}")
        for n in (1, 2):
            rep = verify_theorem_affine(fields(2), n)
            ok &= not rep.asserted and "excluded case" in rep.note
            details.append(f"{rep.geometry['label']}: excluded")
    ok &= clk.seconds < 300
    assert criterion("C6 affine normalizers", ok, f"{'; '.join(details)}; {clk.seconds:.1f}s")

def test_c7_fano_collineations(criterion, space):
    S = space(2, 1, 2)
    with Clock() as clk:
        found = collineations_scan(S)
        pgl = pgl_group(S)
        decomposed = [decompose_staudt(S, phi) for phi in found]
    ok = (set(found) == pgl.elements and len(found) == 168
          and all(f is not None for f in decomposed)
          and all(projectivize(S, f) == phi for f, phi in zip(decomposed, found))
          and clk.seconds < 60)
    assert criterion("C7 Fano collineations equal PGL3(F2)", ok,
                     f"{len(found)} collineations from a 5040-scan, all decompose; "
                     f"{clk.seconds:.1f}s")

def _gammal(F, d):
    mats = (tuple(tuple(row[i * d:(i + 1) * d]) for i in range(d))
            for row in itertools.product(range(F.q), repeat=d * d))
    return [SemilinearMap(A, j) for A in mats if is_invertible(F, A) for j in range(F.k)]

def _law_holds(S, pairs):
    F = S.field
    maps = list({f for pair in pairs for f in pair})
    single = dict(zip(maps, projectivize_many(S, maps)))
    lhs = projectivize_many(S, [compose_semilinear(F, f, g) for f, g in pairs])
    return all(p == compose(single[f], single[g]) for (f, g), p in zip(pairs, lhs))

def test_c8_structural(criterion, fields, space, proj, tmp_path):
    parts = {}
    with Clock() as clk:
        # homomorphism law, exhaustive over GammaL_2(q) for q <= 5
        for p, k in [(2, 1), (3, 1), (2, 2), (5, 1)]:
            S = space(p, k, 1)
            maps = _gammal(S.field, 2)
            parts[f"law exhaustive {S.label} ({len(maps) ** 2} pairs)"] = _law_holds(
                S, list(itertools.product(maps, repeat=2)))
        rng = random.Random(2024)
        for p, k, n in [(2, 2, 2), (3, 1, 2), (3, 2, 1), (2, 3, 1)]:
            S = space(p, k, n)
            F, d = S.field, n + 1
            pool = []
            while len(pool) < 500:
                A = tuple(tuple(rng.randrange(F.q) for _ in range(d)) for _ in range(d))
                if is_invertible(F, A):
                    pool.append(SemilinearMap(A, rng.randrange(F.k)))
            pairs = [(rng.choice(pool), rng.choice(pool)) for _ in range(10**4)]
            parts[f"law sampled {S.label} (10^4 pairs)"] = _law_holds(S, pairs)

        # H-set transport, every g in PGL and every ordered triple of the Fano plane
        geom = proj(2, 1, 2)
        hset = HSetCache(geom)
        parts["H-set transport P2(F2)"] = all(
            frozenset(g[x] for x in hset(*t)) == hset(g[t[0]], g[t[1]], g[t[2]])
            for g in geom.G.elements for t in itertools.permutations(range(7), 3))

        # orbit-stabilizer on every normalizer run of this module and the affine ones
        runs = dict(BRUTE_RUNS) or {
            proj(p, k, n).space.label: automorphism_group(proj(p, k, n))
            for p, k, n in [(5, 1, 1), (2, 2, 1), (2, 1, 2)]}
        for label, (F, n) in [("A1(F4)", (fields(2, 2), 1)), ("A1(F5)", (fields(5), 1))]:
            runs[label] = verify_theorem_affine(F, n)
        parts[f"orbit-stabilizer on {len(runs)} normalizer runs"] = all(
            r.flags["orbit_stabilizer"]
            and r.conjugate_count * r.normalizer_order == r.symmetric_order
            for r in runs.values())

        # report byte-stability
        stable = True
        for argv in (["theorem1", "5", "1", "1"], ["s6-outer"], ["lemma2", "7", "1"],
                     ["theorem1", "2", "1", "2", "--strategy", "sampled", "--samples", "300"]):
            blobs = []
            for i in range(2):
                out = tmp_path / f"run{i}.json"
                cli.main(argv + ["--out", str(out)], stdout=io.StringIO())
                blobs.append(out.read_bytes())
            stable &= blobs[0] == blobs[1] and json.loads(blobs[0])["passed"]
        parts["byte-stable reports"] = stable
    failed = [k for k, ok in parts.items() if not ok]
    assert criterion("C8 structural property suites", not failed,
                     f"{len(parts)} suites, failed={failed}; {clk.seconds:.1f}s")
