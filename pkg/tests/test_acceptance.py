"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 9's monotonicity clause is implemented exactly as stated
and currently fails: at radius 1/2 - 1/16 the sampled maxima over 200
random centers grow (8, 16, 32 for n = 3, 4, 5) because binomial
concentration has not set in at these block lengths; the checker reports
the counterexample rather than papering over it.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

from rmlab import (
    CodeParams,
    SimplexFunction,
    agreement_prob,
    ball_count,
    delta,
    distance,
    enumerate_code,
    htilde_uniformity_deviation,
    johnson_radius,
    min_distance_bruteforce,
    one_sided_regularize,
    random_field_word,
    sampled_max_list_size,
    tightness_family,
    tightness_family_size,
    weak_regularize,
    Word,
)
from rmlab.verify import run_check

embed = SimplexFunction.from_field_word


def criterion(num: int, desc: str, ok: bool) -> None:
    print(f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}  {desc}")
    assert ok, f"criterion {num}: {desc}"


def test_c01_min_distance_reproduction():
    cases = [
        (2, 3, 1), (2, 4, 1), (2, 4, 2), (2, 4, 3),
        (3, 2, 1), (3, 3, 2), (3, 2, 2), (5, 2, 1),
    ]
    start = time.monotonic()
    ok = all(
        min_distance_bruteforce(CodeParams(p, n, d)) == delta(p, d)
        for p, n, d in cases
    )
    elapsed = time.monotonic() - start
    criterion(1, f"min distance equals delta on 8 cases in {elapsed:.1f}s < 60s",
              ok and elapsed < 60)


def _weak_reg_setting():
    params = CodeParams(2, 3, 1)
    family_words = [w for _, w in enumerate_code(params)]
    rng = random.Random(2024)
    centers = [random_field_word(2, 3, rng) for _ in range(100)]
    return family_words, centers


def test_c02_weak_regularity_contract():
    eps = Fraction(2, 5)
    family_words, centers = _weak_reg_setting()
    family = [embed(w) for w in family_words]
    ok = True
    for g_word in centers:
        g = embed(g_word)
        res = weak_regularize(g, family, eps)
        if len(res.chosen) > 6:
            ok = False
        for f in family:  # post-hoc full scan, exact rationals
            if abs(agreement_prob(res.proxy, f) - agreement_prob(g, f)) > eps:
                ok = False
        for before, after in zip(res.trace, res.trace[1:]):
            if after.energy < before.energy + Fraction(4, 25):
                ok = False
    criterion(2, "weak regularity: |H| <= 6, eps-contract, +4/25 energy steps "
                 "on 100 seeded words", ok)


def test_c03_one_sided_contract():
    eps = Fraction(2, 5)
    family_words, centers = _weak_reg_setting()
    violations = 0
    for g_word in centers:
        res = one_sided_regularize(g_word, family_words, eps)
        for i, f in enumerate(family_words):
            lhs = 1 - distance(res.composed_word(i), f)
            rhs = 1 - distance(g_word, f)
            if lhs < rhs - eps:
                violations += 1
    criterion(3, f"one-sided bound, zero violations (saw {violations})",
              violations == 0)


def test_c04_sz1_exhaustive():
    start = time.monotonic()
    r2 = run_check("SZ1", {"p": 2, "dmax": 2, "n1max": 2, "n2max": 2})
    r3 = run_check("SZ1", {"p": 3, "dmax": 2, "n1max": 1, "n2max": 1})
    elapsed = time.monotonic() - start
    criterion(4, f"SZ1 exhaustive grids pass in {elapsed:.1f}s < 600s",
              r2.passed and r3.passed and elapsed < 600)


def test_c05_delta_product():
    start = time.monotonic()
    ok = all(
        run_check("DELTA_PRODUCT", {"p": p, "dmax": 30}).passed
        for p in (2, 3, 5, 7)
    )
    elapsed = time.monotonic() - start
    criterion(5, f"delta-product inequality p in 2,3,5,7 d<=30 in {elapsed:.2f}s < 1s",
              ok and elapsed < 1)


def test_c06_lucas_digits():
    runs = [
        {"p": 2, "r": 14, "A": 1, "k": 2},
        {"p": 2, "r": 7, "A": 2, "k": 2},
        {"p": 2, "r": 4, "A": 3, "k": 1},
        {"p": 3, "r": 9, "A": 1, "k": 1},
        {"p": 3, "r": 3, "A": 3, "k": 1},
    ]
    ok = all(run_check("LUCAS", params).passed for params in runs)
    criterion(6, "Lucas digit identity exhaustive up to rA=14 (p=2), rA=9 (p=3)", ok)


def test_c07_nonclassical_laws():
    r2 = run_check(
        "SCALAR_DEGREE",
        {"p": 2, "nmax": 3, "depthmax": 2, "count": 500, "seed": 1, "trials": 10000},
    )
    r3 = run_check(
        "SCALAR_DEGREE",
        {"p": 3, "nmax": 3, "depthmax": 2, "count": 500, "seed": 2, "trials": 10000},
    )
    ok = r2.passed and r3.passed and r2.cases_checked + r3.cases_checked == 1000
    criterion(7, "scalar degree/depth laws + derivative degree agreement on "
                 "1000 seeded polynomials", ok)


def test_c08_tightness_family():
    ok = True
    members2 = list(tightness_family(2, 2, 1, 5))
    zero2 = Word.zeros(2, 5)
    target2 = delta(2, 1) * Fraction(1, 2)
    ok &= len(members2) == tightness_family_size(2, 2, 1, 5) == 16
    ok &= all(
        distance(m.classical_field_word(), zero2) == target2 for m in members2
    )
    members3 = list(tightness_family(3, 3, 2, 4))
    zero3 = Word.zeros(3, 4)
    target3 = delta(3, 2) * Fraction(2, 3)
    ok &= len(members3) == tightness_family_size(3, 3, 2, 4) == 9
    ok &= all(
        distance(m.classical_field_word(), zero3) == target3 for m in members3
    )
    ok &= target2 == Fraction(1, 4) and target3 == Fraction(2, 9)
    criterion(8, "tightness families: 16 members at 1/4 and 9 members at 2/9", ok)


def test_c09_sampled_max_desk_evidence():
    # clause 2: inside half the minimum distance every codeword ball is a
    # singleton
    clause2 = True
    for n in (3, 4, 5):
        params = CodeParams(2, n, 1)
        inner = delta(2, 1) / 2 - Fraction(1, 2 * 2**n)
        for _, word in enumerate_code(params):
            if ball_count(params, word, inner) != 1:
                clause2 = False
    # clause 1, exactly as stated: radius delta - 1/16, 200 seeded samples,
    # non-increasing across n = 3, 4, 5
    eta = delta(2, 1) - Fraction(1, 16)
    maxima = [
        sampled_max_list_size(CodeParams(2, n, 1), eta, 200, seed=0).count
        for n in (3, 4, 5)
    ]
    clause1 = all(a >= b for a, b in zip(maxima, maxima[1:]))
    criterion(9, f"sampled max non-increasing at eta=7/16 (saw {maxima}) "
                 f"and unique decoding inside delta/2", clause1 and clause2)


def test_c10_johnson_gap():
    gap = float(delta(2, 2)) - johnson_radius(2, Fraction(1, 4))
    criterion(10, f"delta(2,2) beats Johnson by {gap:.4f} > 0.10", gap > 0.10 - 1e-9)


def test_c11_htilde_uniformity_decay():
    devs = [htilde_uniformity_deviation(r, 1, 1, 2) for r in (2, 4, 8, 16)]
    strict = all(a > b for a, b in zip(devs, devs[1:]))
    hit = None
    for r in range(2, 65):
        if htilde_uniformity_deviation(r, 1, 1, 2) < Fraction(1, 10):
            hit = r
            break
    criterion(11, f"htilde deviation strictly decays over r=2,4,8,16 "
                  f"({[str(d) for d in devs]}) and dips below 1/10 at r={hit}",
              strict and hit is not None and hit <= 64)


def test_c12_deg_coef():
    report = run_check(
        "DEG_COEF",
        {"p": 2, "k": 1, "A": 1, "r": 4, "d": 4, "n1": 2, "count": 50, "seed": 0, "trials": 10000},
    )
    checked = report.details.get("checked", 0)
    skipped = report.details.get("skipped", 0)
    criterion(12, f"digit-expansion degree bounds hold on {checked} certified "
                  f"tables ({skipped} skipped of 50)",
              report.passed and checked + skipped == 50 and checked > 0)


def test_c13_apk_inequality():
    report = run_check("APK", {"amax": 100, "kmax": 20, "pmax": 97})
    criterion(13, f"A+(p-1)k <= A*p^k over {report.cases_checked} cases",
              report.passed)


ACCEPTANCE_CLI_RUNS = [
    ["min-distance", "--p", "2", "--n", "4", "--d", "2"],
    ["list-size", "--p", "2", "--n", "3", "--d", "1", "--radius", "3/8",
     "--center", "random", "--samples", "10", "--seed", "7"],
    ["max-list", "--p", "2", "--n", "3", "--d", "1", "--radius", "7/16",
     "--samples", "50", "--seed", "0"],
    ["tightness", "--p", "2", "--d", "2", "--e", "1", "--n", "5"],
    ["weak-reg", "--p", "2", "--n", "3", "--d", "1", "--eps", "2/5", "--seed", "3"],
    ["verify", "--claim", "DELTA_PRODUCT", "--p", "3", "--dmax", "30"],
]


def test_c14_cli_determinism_under_jobs(tmp_path):
    config = tmp_path / "subset.cfg"
    config.write_text("claims=APK,DELTA_PRODUCT,JOHNSON_GAP,HTILDE_UNIFORM\n")
    runs = ACCEPTANCE_CLI_RUNS + [["verify-all", "--config", str(config)]]
    ok = True
    for run in runs:
        outputs = []
        for jobs in ("1", "8"):
            proc = subprocess.run(
                [sys.executable, "-m", "rmlab", "--jobs", jobs] + run,
                capture_output=True, text=True,
            )
            outputs.append((proc.returncode, proc.stdout))
        if outputs[0] != outputs[1]:
            ok = False
    criterion(14, f"{len(runs)} CLI runs byte-identical with --jobs 1 vs 8", ok)
