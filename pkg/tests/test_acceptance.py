"""Acceptance criteria, one check per criterion.

Each check returns (ok, detail).  Under pytest every check prints a single
PASS/FAIL line; ``python3 tests/test_acceptance.py`` runs them standalone.
"""

import json
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fpsdual.cli import EXIT_EVAL, EXIT_INPUT, EXIT_USAGE, run
from fpsdual.duality import continuity_modulus, extract_poly, ones_on_diracs, phi
from fpsdual.expr import normalize, parse, pretty
from fpsdual.field import Q, R64, FieldDescriptor, Fp, discrete, parse_descriptor
from fpsdual.monoid import IndexSpace, Word
from fpsdual.poly import pair
from fpsdual.rowfinite import apply, compose, extract_matrix
from fpsdual.series import (
    Status,
    Topology,
    alphabet_family,
    cauchy_product,
    dirac_decomposition,
    embed,
    from_function,
    letter,
    lin,
    one,
    star,
    sum_family,
)

from builders import random_ast, random_matrix, random_poly, random_proper, random_series

SEED = 20261016
NAT = IndexSpace.naturals()
AB = IndexSpace.free("ab")
F7 = Fp(7)


def check_duality_roundtrip(rng):
    failures = []
    cases = [
        (parse_descriptor("Q/discrete"), NAT),
        (parse_descriptor("F7/discrete"), AB),
        (parse_descriptor("Q/padic:5:3"), AB),
    ]
    for d, space in cases:
        bad = 0
        for _ in range(1000):
            p = random_poly(rng, space, d.field, max_support=10, index_range=50)
            got, report = extract_poly(phi(p), 100)
            if got != p or not report.exhausted:
                bad += 1
            elif continuity_modulus(p, d).coordinates != list(p):
                bad += 1
        if bad:
            failures.append(f"{d}: {bad}/1000")
    d = parse_descriptor("R64/arch:1e-9")
    bad = 0
    for _ in range(1000):
        p = random_poly(rng, NAT, R64, max_support=10, index_range=50)
        got, report = extract_poly(phi(p), 100)
        if list(got) != list(p) or not report.exhausted:
            bad += 1
        elif any(abs(got[x].v - p[x].v) > 1e-12 for x in p):
            bad += 1
    if bad:
        failures.append(f"{d}: {bad}/1000")
    return not failures, "; ".join(failures) or "4 x 1000 polynomials recovered at H=100"


def check_matrix_equipotence(rng):
    bad_extract = 0
    for _ in range(200):
        m = random_matrix(rng, Q, NAT, 20, 20)
        got, reports = extract_matrix(lambda f: apply(m, f), NAT, NAT, Q, 20, 20)
        if got != m:
            bad_extract += 1
    bad_compose = 0
    for _ in range(100):
        m = random_matrix(rng, Q, NAT, 60, 60)
        n = random_matrix(rng, Q, NAT, 60, 60)
        f = random_series(rng, NAT, Q)
        lhs = apply(compose(n, m), f)
        rhs = apply(n, apply(m, f))
        if any(lhs.coeff(x) != rhs.coeff(x) for x in range(50)):
            bad_compose += 1
    ok = not (bad_extract or bad_compose)
    return ok, f"extract mismatches {bad_extract}/200, compose mismatches {bad_compose}/100"


def check_star_mobius(rng):
    failures = []
    words = list(AB.words_up_to(8))
    for field in (Q, F7):
        u = one(AB, field)
        bad = 0
        for _ in range(100):
            f = embed(random_proper(rng, AB, field, max_len=3))
            mobius = cauchy_product(lin(-field.one, f, u), star(f))
            if any(mobius.coeff(w) != u.coeff(w) for w in words):
                bad += 1
        if bad:
            failures.append(f"{field.name}: {bad}/100")
    x = IndexSpace.free("x")
    geo = star(letter(x, Q, "x"))
    if any(geo.coeff(Word("x" * k)) != Q.one for k in range(65)):
        failures.append("star(x) is not 1 on x^n")
    return not failures, "; ".join(failures) or "200 series to degree 8, star(x) to x^64"


def check_dirac_decomposition(rng):
    topo = Topology.product(discrete(Q))
    bad = 0
    for _ in range(100):
        f = random_series(rng, NAT, Q)
        verdict, total = sum_family(dirac_decomposition(f), topo, 256, 128)
        if verdict.status is not Status.CONVERGED_EXACTLY:
            bad += 1
        elif any(total.coeff(x) != f.coeff(x) for x in range(128)):
            bad += 1
    return not bad, f"{bad}/100 failures on 128 coordinates"


def check_krull_counterexample(rng):
    _, members = alphabet_family(64, Q)
    krull, _ = sum_family(members, Topology.krull(), 64, 8)
    prod, _ = sum_family(members, Topology.product(discrete(Q)), 64, 8)
    ind, _ = sum_family(members, Topology.product(FieldDescriptor(Q, "indiscrete")), 64, 8)
    got = (krull.status, prod.status, ind.status)
    want = (Status.DIVERGENT_AT_HORIZON, Status.CONVERGED_EXACTLY, Status.CONVERGED_EXACTLY)
    return got == want, "krull/product/indiscrete = " + "/".join(s.value for s in got)


def check_discontinuity_signature(rng):
    ell = ones_on_diracs(NAT, Q)
    seen = []
    ok = True
    for h in (10, 100, 1000):
        _, report = extract_poly(ell, h)
        seen.append(f"H={h}: exhausted={report.exhausted} support={len(report.detected_support)}")
        ok = ok and report.exhausted is False and len(report.detected_support) == h
    return ok, ", ".join(seen)


def check_continuity_modulus(rng):
    eps = 1e-6
    d = parse_descriptor("R64/arch:1e-9")
    bad = skipped = 0
    worst = 0.0
    for _ in range(1000):
        p = random_poly(rng, NAT, R64, max_support=10, index_range=50)
        mod = continuity_modulus(p, d)
        f = random_series(rng, NAT, R64)
        radius = eps / mod.bound if mod.bound else 1.0
        shift = {x: rng.uniform(-0.999, 0.999) * radius for x in p}
        g = from_function(NAT, R64, lambda x, shift=shift, f=f: f.coeff(x) + R64(shift.get(x, 0.0)))
        gap = max((abs(f.coeff(x) - g.coeff(x)) for x in p), default=0.0)
        if mod.bound and gap >= eps / mod.bound:
            skipped += 1  # rounding pushed the gap to the boundary; not a valid instance
            continue
        diff = abs(pair(p, f) - pair(p, g))
        worst = max(worst, diff)
        if not diff < eps or not mod.holds(p, f, g):
            bad += 1
    checked = 1000 - skipped
    return not bad and checked >= 990, f"{bad}/{checked} violations, largest |difference| {worst:.3g}"


def check_permutation_invariance(rng):
    bad = 0
    for i in range(50):
        field = (Q, F7)[i % 2]
        topo = Topology.product(discrete(field))
        size = rng.randint(0, 150)
        fam = [embed(random_poly(rng, NAT, field, 5, 60)) for _ in range(size)]
        v0, s0 = sum_family(fam, topo, 256, 64, space=NAT, field=field)
        if v0.status is not Status.CONVERGED_EXACTLY:
            bad += 1
            continue
        base = [s0.coeff(x) for x in range(64)]
        for _ in range(10):
            shuffled = fam[:]
            rng.shuffle(shuffled)
            v, s = sum_family(shuffled, topo, 256, 64, space=NAT, field=field)
            if v.status is not v0.status or [s.coeff(x) for x in range(64)] != base:
                bad += 1
                break
    return not bad, f"{bad}/50 families changed under shuffling"


def check_parser(rng):
    bad = 0
    for _ in range(500):
        e = random_ast(rng, Q, "ab")
        if parse(pretty(e), "ab", Q) != normalize(e):
            bad += 1
    codes = {
        "usage": run(["converge", "--family", "alphabet:4", "--horizon", "0x0"]).exit_code,
        "input": run(["coeff", "--series", "a + ", "--index", "a"]).exit_code,
        "eval": run(["coeff", "--series", "(1+a)*", "--index", "a"]).exit_code,
    }
    want = {"usage": EXIT_USAGE, "input": EXIT_INPUT, "eval": EXIT_EVAL}
    ok = not bad and codes == want and len(set(codes.values())) == 3
    return ok, f"{bad}/500 roundtrip failures, exit codes {json.dumps(codes, sort_keys=True)}"


CRITERIA = [
    (1, "duality roundtrip", check_duality_roundtrip),
    (2, "matrix equipotence", check_matrix_equipotence),
    (3, "star and Moebius inversion", check_star_mobius),
    (4, "Dirac decomposition", check_dirac_decomposition),
    (5, "Krull counterexample", check_krull_counterexample),
    (6, "discontinuity signature", check_discontinuity_signature),
    (7, "continuity modulus", check_continuity_modulus),
    (8, "permutation invariance", check_permutation_invariance),
    (9, "parser roundtrip and exit codes", check_parser),
]


def run_criterion(number, name, check):
    start = time.perf_counter()
    ok, detail = check(random.Random(SEED + number))
    took = time.perf_counter() - start
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail} [{took:.2f}s]"
    return ok, line


@pytest.mark.parametrize("number, name, check", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check, capsys):
    ok, line = run_criterion(number, name, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    start = time.perf_counter()
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    print(f"total {time.perf_counter() - start:.1f}s")
    sys.exit(0 if all(ok for ok, _ in results) else 1)
