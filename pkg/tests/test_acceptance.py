"""Acceptance criteria, one test and one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are
collected in the "acceptance criteria" section of the terminal summary.
"""

import json
import time

import numpy as np
import pytest
from conftest import torus_coords

from ac4x.acs import (
    anti_preserving,
    from_fls,
    lee_jalpha,
    nijenhuis_sup,
    standard,
    tame_split,
    tame_to_compatible_candidate,
    tilde_jalpha,
)
from ac4x.cli import main
from ac4x.cohomology import (
    closed_anti_witness,
    h_minus,
    intersection_estimate_check,
    kodaira_table,
    lee_hminus_check,
    prop_linear_check,
    verify_direct_sum,
)
from ac4x.corpus import anti_form, kt_corpus, random_function, random_ls, torus_corpus
from ac4x.cy import CyProblem, normalize_F, solve_cy
from ac4x.errors import IdenticallyPlusMinus, NotTaming, RankDeficient
from ac4x.fiber import BETA, JBETA, OMEGA, split_g, split_j, wedge
from ac4x.hodge import verify_dim4_lemma
from ac4x.models import FormField, closedness, random_field

N = 16


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(0)
    return torus_corpus(rng, N, 20), kt_corpus(rng, N, 5)


def test_decomposition(criterion, corpus):
    torus, kt = corpus
    t0 = time.perf_counter()
    sums, grams, cross = [], [], 0.0
    for J in torus + kt:
        s = h_minus(J)
        sums.append(s.h_plus + s.h_minus == s.b2 and s.h_minus <= s.b_plus)
    for J in torus:
        try:
            rep = verify_direct_sum(J)
            grams.append(rep.gram_rank == 6)
            cross = max(cross, rep.cross_max)
        except RankDeficient:
            grams.append(False)
    elapsed = time.perf_counter() - t0
    ok = all(sums) and all(grams) and cross <= 1e-8 and elapsed <= 120
    detail = (
        f"{len(torus)} torus + {len(kt)} KT, sum rule {sum(sums)}/{len(sums)}, "
        f"full Gram {sum(grams)}/{len(grams)}, cross {cross:.2e}, {elapsed:.1f}s"
    )
    assert criterion(1, "decomposition", ok, detail)


def test_reference_values(criterion):
    a, b = h_minus(standard(N)), h_minus(standard(N, "kt"))
    got = (a.h_plus, a.h_minus, b.h_plus, b.h_minus)
    assert criterion(2, "reference values", got == (4, 2, 2, 2), f"torus {got[:2]}, KT {got[2:]}")


def test_kodaira_table(criterion):
    small, large = kodaira_table(8), kodaira_table(16)
    ok = [r["h_minus"] for r in large] == [2, 1, 0] and [r["rank"] for r in large] == [0, 1, 2]
    ok &= small == large
    rows = [(r["rank"], r["h_minus"]) for r in large]
    assert criterion(3, "kodaira table", ok, f"(rank, h-) {rows}, stable 8->16: {small == large}")


def test_prop_linear(criterion):
    rng = np.random.default_rng(0)
    bad, trials = [], 50
    for i in range(trials):
        l, s = random_ls(rng, N)
        u, v = rng.uniform(-2, 2, size=2)
        sign = 1 if rng.random() < 0.5 else -1
        x, y = prop_linear_check(l, s, u, v, sign, N)
        if x != y:
            bad.append((i, x, y))
    assert criterion(4, "rank formula", not bad, f"{trials} trials, mismatches {bad}")


def test_lee_constant(criterion):
    rng = np.random.default_rng(0)
    values = [lee_hminus_check(anti_form(*rng.uniform(-1.5, 1.5, 2), N)) for _ in range(5)]
    values.append(lee_hminus_check(anti_form(1.0, 0.0, N)))
    assert criterion(5, "lee constant alpha", all(v == 2 for v in values), f"h- values {values}")


def test_intersection(criterion, corpus):
    torus, _ = corpus
    x1 = torus_coords(N)[0]
    J = standard(N)
    fam = [
        anti_preserving(anti_form(1.0, 0.0, N), 0.5),
        anti_preserving(anti_form(1.0, 0.0, N), 0.5 + 0.2 * np.cos(2 * np.pi * x1)),
        anti_preserving(anti_form(0.3, -0.8, N), 0.4 * np.sin(2 * np.pi * x1)),
    ]
    fam_dims = [intersection_estimate_check(J, Jt) for Jt in fam]
    rng = np.random.default_rng(0)
    pair_dims = []
    pairs = [(a, b) for a in range(len(torus)) for b in range(a + 1, len(torus))]
    for i, j in rng.permutation(pairs):
        if len(pair_dims) == 20:
            break
        try:
            pair_dims.append(intersection_estimate_check(torus[i], torus[j]))
        except IdenticallyPlusMinus:
            continue
    ok = all(d == 1 for d in fam_dims) and len(pair_dims) >= 20 and max(pair_dims) <= 1
    detail = f"family {fam_dims}, {len(pair_dims)} random pairs max {max(pair_dims)}"
    assert criterion(6, "intersection", ok, detail)


def test_hodge_lemma(criterion):
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        f = random_field(2, N, rng, kmax=N // 4)
        worst = max(worst, *verify_dim4_lemma(FormField(2, split_g(f.coeffs).sd)))
    assert criterion(7, "hodge lemma", worst <= 1e-9, f"100 fields, max defect {worst:.2e}")


def test_taming_estimate(criterion, corpus):
    torus, _ = corpus
    forms = [FormField.constant(2, c, N) for c in (OMEGA, BETA, JBETA, (OMEGA + 0.5 * BETA))]
    closed = max(closedness(w) for w in forms)
    checked, bad = 0, []
    for k, J in enumerate(torus):
        s = None
        for w in forms:
            try:
                tame_split(w, J)
            except NotTaming:
                continue
            s = s or h_minus(J)
            checked += 1
            if s.h_minus > s.b_plus - 1:
                bad.append(k)
    ok = checked > 0 and not bad and closed <= 1e-12
    assert criterion(8, "taming estimate", ok, f"{checked} tamed pairs, violations {bad}")


def test_tame_to_compatible(criterion):
    omega = FormField.constant(2, OMEGA, N)
    closed_margin, closed_dev = np.inf, 0.0
    for cb, cj in [(0.5, 0.0), (0.0, -1.2), (0.7, 0.7)]:
        alpha = anti_form(cb, cj, N)
        cand, margin = tame_to_compatible_candidate(alpha)
        closed_dev = max(closed_dev, float(np.max(np.abs((cand - omega - alpha).coeffs))))
        closed_margin = min(closed_margin, float(margin.coeffs.min()))
    rng = np.random.default_rng(0)
    worst_d, worst_inv, worst_pos = 0.0, 0.0, np.inf
    for _ in range(10):
        alpha = anti_form(random_function(rng, N, amp=0.2), random_function(rng, N, amp=0.2), N)
        cand, _ = tame_to_compatible_candidate(alpha)
        worst_d = max(worst_d, closedness(cand))
        inv = split_j(cand.coeffs, tilde_jalpha(alpha).j_matrix).anti
        worst_inv = max(worst_inv, float(np.max(np.abs(inv))))
        worst_pos = min(worst_pos, float(np.min(wedge(cand.coeffs, cand.coeffs))))
    ok = closed_dev <= 1e-12 and closed_margin >= 2 - 1e-12
    ok &= worst_d <= 1e-9 and worst_inv <= 1e-8 and worst_pos > 0
    detail = (
        f"closed alpha: dev {closed_dev:.1e}, margin {closed_margin:.3f}; 10 perturbations: "
        f"d {worst_d:.1e}, invariance {worst_inv:.1e}, min square {worst_pos:.3f}"
    )
    assert criterion(9, "tame to compatible", ok, detail)


def test_cy_solver(criterion):
    x1 = torus_coords(N)[0]
    t0 = time.perf_counter()
    sol = solve_cy(CyProblem(normalize_F(FormField.scalar(0.3 * np.sin(2 * np.pi * x1)))))
    elapsed = time.perf_counter() - t0
    triv = solve_cy(CyProblem(FormField.zeros(0, N)))
    exact = (
        np.all(triv.a.coeffs == 0)
        and np.all(triv.h == 0)
        and np.array_equal(triv.omega_tilde.coeffs, FormField.constant(2, OMEGA, N).coeffs)
    )
    ok = sol.converged and sol.iterations <= 200 and sol.residual_volume <= 1e-8
    ok &= sol.residual_closed <= 1e-9 and sol.period_drift <= 1e-9 and bool(exact) and elapsed <= 300
    detail = (
        f"{sol.iterations} iters, volume {sol.residual_volume:.1e}, closed {sol.residual_closed:.1e}, "
        f"drift {sol.period_drift:.1e}, trivial exact {bool(exact)}, {elapsed:.1f}s"
    )
    assert criterion(10, "calabi-yau solver", ok, detail)


def test_semicontinuity(criterion, tmp_path):
    cfg = tmp_path / "scan.toml"
    cfg.write_text(
        f"""n = {N}
F = [{{amp = 0.3, kind = "sin", k = [1, 0, 0, 0]}}]
[construction]
family = "fls"
l = [{{amp = 0.05, kind = "cos", k = [1, 0, 0, 0]}}]
s = [{{amp = 0.05, kind = "sin", k = [0, 1, 0, 0]}}]
[scan]
samples = 5
radius = 1.0
cy_check = true
"""
    )
    code = main(["deform-scan", "--config", str(cfg), "--out", str(tmp_path / "out")])
    res = json.loads((tmp_path / "out" / "summary.json").read_text())["result"]
    rows = res["rows"]
    hp, hm = [r[1] for r in rows], [r[2] for r in rows]
    ok = code == 0 and (hp[0], hm[0], hp[-1], hm[-1]) == (4, 2, 6, 0)
    ok &= hp == sorted(hp) and hm == sorted(hm, reverse=True)
    ok &= len(res.get("cy", [])) == len(rows)
    detail = f"exit {code}, h+ {hp}, h- {hm}, solves {len(res.get('cy', []))}/{len(rows)}"
    assert criterion(11, "semicontinuity", ok, detail)


def test_integrability(criterion):
    shape = (N,) * 4
    const = [
        standard(N),
        from_fls(np.full(shape, 0.3), np.full(shape, -0.4), n=N),
        lee_jalpha(anti_form(0.6, 0.2, N)),
        tilde_jalpha(anti_form(-0.5, 1.1, N)),
    ]
    const_max = max(nijenhuis_sup(J) for J in const)
    x1 = torus_coords(N)[0]
    witness = from_fls(0.2 * np.cos(2 * np.pi * x1), np.zeros(shape), n=N)
    wn = nijenhuis_sup(witness)
    pairs = closed_anti_witness(witness)
    best = max((dj for _, db, dj in pairs if db <= 1e-9), default=0.0)
    ok = const_max <= 1e-9 and wn > 1e-3 and best > 1e-3
    detail = f"constant max {const_max:.1e}, witness N {wn:.3e}, sup d(J beta) {best:.3e}"
    assert criterion(12, "integrability", ok, detail)
