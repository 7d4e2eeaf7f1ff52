"""Acceptance criteria, each at its stated tolerance.

Every test prints exactly one ``PASS``/``FAIL`` line (criterion 2 prints one
per lemma family). Run standalone with ``python3 tests/test_acceptance.py``
or through pytest, which repeats the lines in its summary.
"""

import math
import subprocess
import sys
import time

import numpy as np

from gcbm.combinatorics import (
    lemma1_sweep,
    lemma4_sweep,
    lemma5_sweep,
    nk_bound_sweep,
    oracle_homogeneity_sweep,
    oracle_parity_sweep,
    residual_independent_set,
    vandermonde_sweep,
)
from gcbm.decoders import decode_algorithm1, decode_ml_exhaustive
from gcbm.errors import DecodeFailure
from gcbm.harness import SweepSpec, run_sweep, trial_seed
from gcbm.limits import divergence_half_theta, homogeneity_threshold, snr_factor
from gcbm.model import LabelVector, MeasurementKind, ModelParams, recovery_success, sample_measurements

SEED = 20170625
LEMMA_N_MAX = 40


def test_c1_counting_oracles(report):
    t0 = time.perf_counter()
    homo = oracle_homogeneity_sweep(12, 5)
    par = oracle_parity_sweep(12, 5)
    secs = time.perf_counter() - t0
    bad = len(homo.counterexamples) + len(par.counterexamples)
    report(
        "C1 counting-oracle equivalence",
        bad == 0 and secs < 60,
        f"{homo.cases}+{par.cases} cases, {bad} mismatches, {secs:.1f}s",
    )


_LEMMA_SECONDS = []


def _lemma(report, name, rep, t0):
    _LEMMA_SECONDS.append(time.perf_counter() - t0)
    total = sum(_LEMMA_SECONDS)
    detail = f"{rep.cases} cases, {len(rep.counterexamples)} counterexamples, cumulative {total:.1f}s"
    if rep.counterexamples:
        detail += f", e.g. {rep.counterexamples[:2]}"
    report(f"C2 lemma suite [{name}]", rep.ok and total < 120, detail)


def test_c2_lemma1(report):
    # fixed-d statement; swept for d <= 4
    t0 = time.perf_counter()
    _lemma(report, "lemma1 delta=0.1", lemma1_sweep(LEMMA_N_MAX, 4, 0.1), t0)


def test_c2_lemma4(report):
    t0 = time.perf_counter()
    _lemma(report, "lemma4", lemma4_sweep(LEMMA_N_MAX, LEMMA_N_MAX), t0)


def test_c2_lemma5(report):
    t0 = time.perf_counter()
    _lemma(report, "lemma5", lemma5_sweep(LEMMA_N_MAX, LEMMA_N_MAX), t0)


def test_c2_nk_bound(report):
    t0 = time.perf_counter()
    _lemma(report, "nk lower bound", nk_bound_sweep(LEMMA_N_MAX, LEMMA_N_MAX), t0)


def test_c2_vandermonde(report):
    t0 = time.perf_counter()
    _lemma(report, "vandermonde", vandermonde_sweep(LEMMA_N_MAX, LEMMA_N_MAX), t0)


def test_c3_divergence_identity(report):
    thetas = [k / 100 for k in range(1, 50)]
    worst = max(abs((1 - math.exp(-divergence_half_theta(t))) - snr_factor(t)) for t in thetas)
    report("C3 divergence identity", len(thetas) == 49 and worst < 1e-12, f"max error {worst:.2e} over 49 thetas")


def test_c4_ml_phase_transition(report):
    t0 = time.perf_counter()
    spec = SweepSpec("p", (14,), (3,), (0.1,), (0.5, 2.0), 200, "ml", master_seed=SEED)
    res = run_sweep(spec)
    lo, hi = res.rate(14, 3, 0.1, 0.5), res.rate(14, 3, 0.1, 2.0)
    secs = time.perf_counter() - t0
    report(
        "C4 exhaustive-ML transition",
        lo <= 0.5 and hi >= 0.9 and secs < 600,
        f"rate {lo:.3f} at 0.5x, {hi:.3f} at 2x, {secs:.1f}s",
    )


def test_c5_homogeneity_transition(report):
    t0 = time.perf_counter()
    grid = (0.6, 0.8, 1.0, 1.2, 1.4)
    spec = SweepSpec("h", (1000,), (4,), (0.05,), grid, 100, "alg1", master_seed=SEED)
    res = run_sweep(spec)
    rates = {m: res.rate(1000, 4, 0.05, m) for m in grid}
    secs = time.perf_counter() - t0
    ok = rates[1.4] - rates[0.6] >= 0.5 and rates[1.2] >= 0.85 and secs < 1800
    shown = ", ".join(f"{m}x={r:.2f}" for m, r in rates.items())
    report("C5 homogeneity transition, two-stage decoder", ok, f"{shown}, {secs:.1f}s")


def test_c6_noiseless_parity_transition(report):
    t0 = time.perf_counter()
    ds = (5, 10, 20)
    spec = SweepSpec("p", (1000,), ds, (0.0,), (0.8, 1.2), 50, "gf2", master_seed=SEED)
    res = run_sweep(spec)
    secs = time.perf_counter() - t0
    per_d = {d: (res.rate(1000, d, 0.0, 0.8), res.rate(1000, d, 0.0, 1.2)) for d in ds}
    ok = all(lo <= 0.5 and hi >= 0.9 for lo, hi in per_d.values()) and secs < 900
    shown = "; ".join(f"d={d}: {lo:.2f}@0.8x {hi:.2f}@1.2x" for d, (lo, hi) in per_d.items())
    report("C6 noiseless parity transition, GF(2)", ok, f"{shown}; {secs:.1f}s")


def _first_d_reaching(res, n, target=0.5):
    for row in res:
        if row.n == n and row.rate >= target:
            return row.d
    return None


def test_c7_linear_samples(report):
    t0 = time.perf_counter()
    ds = tuple(range(2, 16))
    spec = SweepSpec("p", (250, 1000), ds, (0.0,), (1.1,), 50, "gf2", master_seed=SEED, normalization="linear")
    res = run_sweep(spec)
    secs = time.perf_counter() - t0
    small, large = _first_d_reaching(res, 250), _first_d_reaching(res, 1000)
    ok = small is not None and large is not None and large > small and secs < 1200
    report("C7 no linear-sample recovery at small d", ok, f"first d with rate>=0.5: n=250 -> {small}, n=1000 -> {large}; {secs:.1f}s")


def test_c8_algorithm1_vs_ml(report):
    n, d, theta, trials = 14, 3, 0.05, 200
    kind = MeasurementKind.HOMOGENEITY
    p = 2 * homogeneity_threshold(n, d, theta).sample_complexity_limit / math.comb(n, d)
    params = ModelParams(n, d, p, theta, kind)
    agree = 0
    for t in range(trials):
        seed = trial_seed(SEED, kind, n, d, theta, 2.0, t)
        truth = LabelVector.random(n, np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,))))
        ms = sample_measurements(params, truth, seed)
        ml = recovery_success(kind, d, truth, decode_ml_exhaustive(ms).estimate)
        try:
            alg = recovery_success(kind, d, truth, decode_algorithm1(ms).estimate)
        except DecodeFailure:
            alg = False
        agree += ml == alg
    report("C8 algorithm 1 agrees with ML", agree / trials >= 0.95, f"{agree}/{trials} verdicts agree")


def test_c9_determinism(report, tmp_path):
    cfg = tmp_path / "det.cfg"
    cfg.write_text(
        "kind = h\nn = 200\nd = 3\ntheta = 0.05, 0.1\nmultipliers = 0.8, 1.2\n"
        f"trials = 12\nmethod = alg1\nmaster_seed = {SEED}\n"
    )
    outputs = []
    for jobs in (1, 1, 2, 4):
        out = tmp_path / f"run{len(outputs)}.csv"
        cmd = [sys.executable, "-m", "gcbm.cli", "sweep", "--config", str(cfg), "--out", str(out), "--jobs", str(jobs)]
        subprocess.run(cmd, check=True, capture_output=True)
        outputs.append(out.read_bytes())
    same = all(o == outputs[0] for o in outputs)
    report("C9 byte-identical CSV across reruns and --jobs", same, f"{len(outputs)} runs (jobs 1,1,2,4), {len(outputs[0])} bytes")


def test_c10_deletion_experiment(report):
    n, d, trials = 1000, 3, 100
    big = math.ceil(n / math.log(n) ** 7)
    p = n * math.log(n) / math.comb(n, d)
    params = ModelParams(n, d, p, 0.0, MeasurementKind.HOMOGENEITY)
    big_set = list(range(big))
    good = 0
    for t in range(trials):
        ms = sample_measurements(params, LabelVector.zeros(n), seed=SEED + t)
        good += len(residual_independent_set(ms, big_set)) / big >= 0.9
    report(
        "C10 deletion experiment",
        good / trials >= 0.95,
        f"|R_big|={big}; ratio >= 0.9 in {good}/{trials} trials",
    )


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
