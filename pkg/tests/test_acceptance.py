"""Acceptance gate: one test per headline guarantee of the library.

Each test prints a single PASS/FAIL line (written straight to the real
stdout so it survives pytest capture) and then asserts.  Shared random
suites are built once per session in module fixtures.
"""

import time

import numpy as np
import pytest

from phaselab import bounds, cp, sampling, witness
from phaselab.core import MeasurementSpace, SignalSpace, measure, quotient_distance
from phaselab.frames import random_frame

from conftest import grid_injectivity_oracle


@pytest.fixture
def verdict_line(capsys):
    """Emit one PASS/FAIL line per criterion on the real terminal, then
    assert.  capsys.disabled() punches through pytest's fd capture."""

    def emit(num, label, ok, detail):
        tag = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print("C%02d %s  %s  (%s)" % (num, tag, label, detail))
        assert ok, "C%02d %s: %s" % (num, label, detail)

    return emit


@pytest.fixture(scope="module")
def real_suite():
    """100 random real frames, d=2, N in {3,4,5}, with full reports
    including the sphere-grid bruteforce alpha."""
    out = []
    for seed in range(100):
        n = 3 + seed % 3
        frame = random_frame(2, n, seed=seed)
        report = bounds.build_report(frame, None, bruteforce=True, seed=seed)
        out.append((frame, report))
    return out


@pytest.fixture(scope="module")
def cp_scan():
    """50 random real d=2 frames with both the library verdict and the
    independent scaled-pair grid search."""
    out = []
    for seed in range(50):
        n = (2, 3, 4, 5)[seed % 4]
        frame = random_frame(2, n, seed=seed, allow_thin=True)
        verdict = cp.check_cp(frame)
        injective, polished = grid_injectivity_oracle(frame)
        out.append((frame, verdict, injective, polished))
    return out


def test_c01_real_sandwich(real_suite, verdict_line):
    # sigma <= alpha_bruteforce <= 2 sigma + 2 * grid tolerance
    bad = []
    for frame, rep in real_suite:
        lo_ok = rep.alpha_bruteforce >= rep.sigma * (1.0 - 1e-12)
        hi_ok = rep.alpha_bruteforce <= 2.0 * rep.sigma + 2.0 * rep.alpha_grid_tol
        if not (lo_ok and hi_ok):
            bad.append((frame.n, rep.sigma, rep.alpha_bruteforce))
    verdict_line(
        1,
        "real sandwich sigma <= alpha <= 2 sigma",
        not bad,
        "%d violations over %d frames" % (len(bad), len(real_suite)),
    )


def test_c02_beta_equals_upper_frame_bound(verdict_line):
    frames = [random_frame(2, 4, seed=s) for s in range(3)]
    frames += [random_frame(3, 7, seed=s) for s in range(3)]
    frames += [random_frame(2, 5, field="complex", seed=s) for s in range(3)]
    frames += [random_frame(3, 6, field="complex", seed=s) for s in range(3)]
    worst_rel = 0.0
    worst_pair = 0.0
    checked = 0
    for frame in frames:
        for p in (1.0, 2.0, np.inf):
            ms = MeasurementSpace(frame.n, p=p)
            b_res = bounds.beta(frame, ms, seed=checked)
            fb = bounds.frame_bounds(frame, ms)
            rel = abs(b_res.beta - fb.B) / fb.B
            worst_rel = max(worst_rel, rel)
            worst_pair = max(worst_pair, b_res.max_sampled_ratio / b_res.beta)
            checked += 1
    ok = worst_rel <= 1e-9 and worst_pair <= 1.0 + 1e-9
    verdict_line(
        2,
        "beta equals B, sampled pairs below",
        ok,
        "%d frame/p combos, worst rel %.2e, worst pair ratio %.12f"
        % (checked, worst_rel, worst_pair),
    )


def test_c03_complex_stability_constant(verdict_line):
    bad = []
    for seed in range(100):
        d = 2 + seed % 2
        n = 2 * d + seed % 3
        frame = random_frame(d, n, field="complex", seed=seed)
        rep = bounds.build_report(frame, None, seed=seed)
        cap = 2.0 * (rep.B / rep.A) * rep.sigma + 1e-6
        if rep.alpha_upper > cap:
            bad.append((seed, rep.alpha_upper, cap))
    verdict_line(
        3,
        "complex alpha_upper <= 2 (B/A) sigma",
        not bad,
        "%d violations over 100 frames" % len(bad),
    )


def test_c04_condition_interval(real_suite, verdict_line):
    bad = []
    tested = 0
    for frame, rep in real_suite:
        if rep.sigma <= 0:
            continue
        tested += 1
        iv = bounds.condition_number(rep)
        if not (iv.low * 0.95 <= iv.tau_hat <= iv.high * 1.05):
            bad.append((frame.n, iv.low, iv.tau_hat, iv.high))
    verdict_line(
        4,
        "tau_hat inside [B/(2 sigma), B/sigma]",
        not bad,
        "%d violations over %d sigma>0 frames" % (len(bad), tested),
    )


def test_c05_sinc_growth_rate(verdict_line):
    t0 = time.time()
    result = witness.dimension_sweep(range(1, 5))
    elapsed = time.time() - t0
    slope = result.growth_fit
    ok = slope is not None and slope >= 2.5 and elapsed < 600
    verdict_line(
        5,
        "sinc tau_lower doubles faster than 2^(2.5 m)",
        ok,
        "log2 slope %.3f over m=1..4 in %.0f s" % (slope, elapsed),
    )


def test_c06_oversampling_futility(verdict_line):
    result = witness.oversample_sweep(2, (1, 2, 4))
    spread = result.extras["tau_spread"]
    verdict_line(
        6,
        "normalized tau_lower flat across oversampling",
        spread < 1.10,
        "max/min spread %.4f at q in {1,2,4}" % spread,
    )


def test_c07_cp_matches_grid_search(cp_scan, verdict_line):
    bad = []
    for frame, verdict, injective, polished in cp_scan:
        if verdict.holds != injective:
            bad.append((frame.n, verdict.holds, injective, polished))
    verdict_line(
        7,
        "check_cp agrees with scaled-pair grid search",
        not bad,
        "%d disagreements over %d frames" % (len(bad), len(cp_scan)),
    )


def test_c08_nonuniqueness_certificates(cp_scan, verdict_line):
    bad = []
    failing = 0
    for frame, verdict, _, _ in cp_scan:
        if verdict.holds:
            continue
        failing += 1
        x, y = cp.nonuniqueness_pair(verdict, frame)
        gap = np.max(np.abs(measure(frame, x) - measure(frame, y)))
        space = SignalSpace(frame.d, field=frame.field)
        dist = quotient_distance(x, y, space)
        if not (gap < 1e-8 and dist > 0.1):
            bad.append((frame.n, gap, dist))
    verdict_line(
        8,
        "certificates collide in measurement, differ in signal",
        failing > 0 and not bad,
        "%d failing frames, %d bad certificates" % (failing, len(bad)),
    )


def test_c09_fixed_dimension_boundedness(verdict_line):
    result = witness.fixed_dimension_sweep(
        d=3, n_range=range(7, 25), seeds=range(96), restarts=64
    )
    spread = result.extras["tau_spread"]
    verdict_line(
        9,
        "tau_lower bounded at fixed d=3, N=7..24",
        spread < 3.0,
        "median tau max/min spread %.3f" % spread,
    )


def test_c10_density_verdicts(verdict_line):
    def verdict_for(step, half):
        pts, window = sampling.parse_set_expression(
            "grid(%g,[%g,%g])" % (step, -half, half)
        )
        sset = sampling.SamplingSet(points=pts, window=window, b=1.0)
        return sampling.phaseless_injectivity_verdict(sset).verdict

    fine = [verdict_for(0.25, h) for h in (20, 40)]
    coarse = [verdict_for(1.0, h) for h in (20, 40)]
    ok = fine == ["Injective"] * 2 and coarse == ["NotDecidable"] * 2
    verdict_line(
        10,
        "quarter grid injective, unit grid undecidable",
        ok,
        "fine %s coarse %s under window doubling" % (fine, coarse),
    )


def test_c11_solidity(verdict_line):
    rng = np.random.default_rng(11)
    checked = 0
    worst = -np.inf
    for p in (1.0, 2.0, np.inf):
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            ms = MeasurementSpace(n, p=p)
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            scale = rng.uniform(0.0, 1.0, size=n)
            w = scale * z * np.exp(2j * np.pi * rng.uniform(size=n))
            ok = ms.norm(w) <= ms.norm(z) * (1.0 + 1e-12)
            ok = ok and np.isclose(ms.norm(z), ms.norm(np.abs(z)), rtol=1e-12)
            worst = max(worst, ms.norm(w) - ms.norm(z))
            assert ok, (p, n)
            checked += 1
    verdict_line(
        11,
        "weighted p-norms are solid",
        checked == 3000,
        "%d pairs, worst norm excess %.2e" % (checked, worst),
    )
