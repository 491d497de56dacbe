"""Frame bound, sigma, beta and alpha estimation against slow oracles.

Oracles come first and use nothing from the module under test: sigma by
looping every split with plain SVDs, frame bounds by dense direction
grids in the plane.  Frozen constants for the three-vector full spark
frame were worked out by hand from 2x2 eigenvalues:

    A = 1, B = sqrt(3), sigma = (sqrt(5) - 1) / 2
"""

import itertools

import numpy as np
import pytest

from conftest import full_circle, half_circle
from phaselab import frames
from phaselab.bounds import (
    EXHAUSTIVE_CAP,
    ExhaustiveCapExceeded,
    alpha_estimate,
    beta,
    build_report,
    condition_number,
    default_mspace,
    frame_bounds,
    pair_ratio,
    restricted_min_vector,
    scp_sigma,
)
from phaselab.core import MeasurementSpace, measure

SIGMA_STAR = (np.sqrt(5.0) - 1.0) / 2.0


def smallest_sv(rows, d):
    """Lower frame bound of a row subset: least singular value of the
    d-column matrix, zero for fewer than d rows."""
    m = np.asarray(rows).reshape(-1, d)
    if m.shape[0] == 0:
        return 0.0
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[-1]) if m.shape[0] >= d else 0.0


def sigma_by_split_loop(frame):
    """Oracle: minimize over every unordered split the better side's lower
    bound, by direct enumeration."""
    n, d = frame.rows.shape
    best = np.inf
    for k in range(n + 1):
        for s in itertools.combinations(range(n), k):
            comp = sorted(set(range(n)) - set(s))
            val = max(
                smallest_sv(frame.rows[list(s)], d),
                smallest_sv(frame.rows[comp], d),
            )
            best = min(best, val)
    return best


def grid_bounds(frame, mspace, points=720):
    """Oracle for d = 2 real frames: extremes of ||measurements|| over a
    dense direction grid."""
    xs = half_circle(points)
    vals = mspace.norm(np.abs(xs @ frame.rows.T))
    return float(vals.min()), float(vals.max())


class TestSigmaOracle:
    def test_full_spark_frozen_value(self, fullspark):
        assert sigma_by_split_loop(fullspark) == pytest.approx(
            SIGMA_STAR, abs=1e-12
        )
        res = scp_sigma(fullspark, strategy="exhaustive")
        assert res.sigma == pytest.approx(SIGMA_STAR, abs=1e-12)
        assert res.method == "exhaustive"

    def test_exhaustive_matches_split_loop_on_random_frames(self):
        for seed in range(6):
            f = frames.random_frame(3, 7, seed=seed)
            res = scp_sigma(f, strategy="exhaustive")
            assert res.sigma == pytest.approx(
                sigma_by_split_loop(f), rel=1e-9
            )

    def test_reported_subset_attains_sigma(self, fullspark):
        res = scp_sigma(fullspark, strategy="exhaustive")
        s = list(res.subset)
        comp = sorted(set(range(3)) - set(s))
        got = max(
            smallest_sv(fullspark.rows[s], 2),
            smallest_sv(fullspark.rows[comp], 2),
        )
        assert got == pytest.approx(res.sigma, abs=1e-12)

    def test_local_search_never_below_exhaustive(self):
        # the heuristic minimizes over a subset of splits, so it can only
        # overestimate
        for seed in range(4):
            f = frames.random_frame(3, 9, seed=seed)
            ex = scp_sigma(f, strategy="exhaustive").sigma
            ls = scp_sigma(f, strategy="local-search", restarts=16).sigma
            assert ls >= ex - 1e-12

    def test_local_search_64_matches_exhaustive_here(self):
        f = frames.random_frame(3, 12, seed=3)
        ex = scp_sigma(f, strategy="exhaustive").sigma
        ls = scp_sigma(f, strategy="local-search", restarts=64).sigma
        assert ls == pytest.approx(ex, rel=1e-9)

    def test_sigma_zero_when_no_split_spans(self):
        f = frames.Frame(rows=np.eye(2), field="real")
        assert scp_sigma(f, strategy="exhaustive").sigma == 0.0

    def test_exhaustive_cap(self):
        f = frames.random_frame(2, EXHAUSTIVE_CAP + 1, seed=0)
        with pytest.raises(ExhaustiveCapExceeded):
            scp_sigma(f, strategy="exhaustive")


class TestFrameBounds:
    def test_identity_frozen(self):
        f = frames.Frame(rows=np.eye(2), field="real")
        res = frame_bounds(f)
        assert res.A == pytest.approx(1.0, abs=1e-9)
        assert res.B == pytest.approx(1.0, abs=1e-9)

    def test_full_spark_frozen(self, fullspark):
        res = frame_bounds(fullspark)
        assert res.A == pytest.approx(1.0, abs=1e-9)
        assert res.B == pytest.approx(np.sqrt(3.0), abs=1e-9)

    @pytest.mark.parametrize("p", [1.0, 2.0, np.inf])
    def test_plane_grid_oracle(self, p):
        for seed in (0, 1, 2):
            f = frames.random_frame(2, 5, seed=seed)
            ms = MeasurementSpace(5, p)
            lo, hi = grid_bounds(f, ms)
            res = frame_bounds(f, ms)
            # theta -> measurement norm is L-Lipschitz with L the norm of
            # the row length vector, so the grid extremes are off by at
            # most L * h / 2; the solver itself must do at least as well
            # as the grid
            slack = ms.norm(np.linalg.norm(f.rows, axis=1)) * (np.pi / 720) / 2
            assert lo - slack - 1e-9 <= res.A <= lo + 1e-6
            assert hi - 1e-6 <= res.B <= hi + slack + 1e-9

    def test_argmin_argmax_attain(self, fullspark):
        ms = default_mspace(fullspark)
        res = frame_bounds(fullspark)
        lo = ms.norm(measure(fullspark, res.argmin))
        hi = ms.norm(measure(fullspark, res.argmax))
        assert lo == pytest.approx(res.A, rel=1e-6)
        assert hi == pytest.approx(res.B, rel=1e-6)

    def test_scaling_covariance(self):
        rng = np.random.default_rng(0)
        f = frames.random_frame(3, 7, seed=2)
        for c in (0.5, 2.0, 7.5):
            g = frames.Frame(rows=c * f.rows, field="real")
            rf, rg = frame_bounds(f), frame_bounds(g)
            assert rg.A == pytest.approx(c * rf.A, rel=1e-6)
            assert rg.B == pytest.approx(c * rf.B, rel=1e-6)
            sf = scp_sigma(f, strategy="exhaustive").sigma
            sg = scp_sigma(g, strategy="exhaustive").sigma
            assert sg == pytest.approx(c * sf, rel=1e-9)


class TestRestrictedMin:
    def test_matches_svd_on_subsets(self, fullspark):
        val, x = restricted_min_vector(fullspark, None, (0, 2))
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-9)
        assert val == pytest.approx(
            smallest_sv(fullspark.rows[[0, 2]], 2), rel=1e-9
        )
        assert val == pytest.approx(SIGMA_STAR, abs=1e-9)

    def test_even_samples_of_sinc_stay_spanning(self):
        # halving the 0.25-step sample grid keeps the lower bound positive
        f = frames.sinc_frame(frames.SincFrameSpec(m=1, window=8))
        even = tuple(range(0, 17, 2))
        val, x = restricted_min_vector(f, None, even)
        assert val > 0.0
        assert val == pytest.approx(smallest_sv(f.rows[list(even)], 5), rel=1e-6)


class TestBeta:
    @pytest.mark.parametrize("p", [1.0, 2.0, np.inf])
    def test_beta_equals_upper_bound(self, fullspark, p):
        ms = MeasurementSpace(3, p)
        res = beta(fullspark, ms, pairs=2000)
        assert res.beta == pytest.approx(frame_bounds(fullspark, ms).B, rel=1e-9)
        assert res.max_sampled_ratio <= res.beta * (1 + 1e-9)

    def test_sampled_pairs_respect_beta_complex(self):
        f = frames.random_frame(2, 5, field="complex", seed=4)
        res = beta(f, pairs=3000)
        assert res.max_sampled_ratio <= res.beta * (1 + 1e-9)

    def test_pair_ratio_frozen(self, fullspark):
        ms = default_mspace(fullspark)
        x = np.array([1.0, 0.0])
        y = np.array([0.0, 1.0])
        # measurement gap (1,1,0) against quotient distance sqrt(2)
        assert pair_ratio(fullspark, ms, x, y) == pytest.approx(
            np.sqrt(2.0) / np.sqrt(2.0), abs=1e-12
        )


class TestAlpha:
    def test_full_spark_bruteforce_sandwich(self, fullspark):
        sig = scp_sigma(fullspark, strategy="exhaustive")
        res = alpha_estimate(fullspark, sigma_result=sig, bruteforce="grid")
        assert res.alpha_bruteforce is not None
        # left side up to roundoff: the grid hits the exact minimizer, whose
        # evaluation can land a few ulp under the eigenvalue route
        assert res.alpha_bruteforce >= sig.sigma * (1 - 1e-12)
        assert res.alpha_bruteforce <= 2 * sig.sigma + 2 * res.grid_tol
        assert res.alpha_upper >= res.alpha_bruteforce * (1 - 1e-12)

    def test_witness_ratio_bounds_alpha(self, fullspark):
        res = alpha_estimate(fullspark, bruteforce="grid")
        assert res.witness_ratio is not None
        assert res.alpha_bruteforce <= res.witness_ratio + 1e-9

    def test_alpha_zero_on_noninjective_frame(self):
        f = frames.Frame(rows=np.eye(2), field="real")
        res = alpha_estimate(f, bruteforce="grid")
        # e1 + e2 and e1 - e2 share measurements, so the infimum vanishes
        assert res.alpha_bruteforce == pytest.approx(0.0, abs=1e-6)


class TestReport:
    def test_full_spark_report_frozen(self, fullspark):
        rep = build_report(fullspark)
        assert rep.A == pytest.approx(1.0, abs=1e-9)
        assert rep.B == pytest.approx(np.sqrt(3.0), abs=1e-9)
        assert rep.sigma == pytest.approx(SIGMA_STAR, abs=1e-9)
        assert rep.beta == pytest.approx(rep.B, rel=1e-9)
        assert rep.tau_lower == pytest.approx(
            np.sqrt(3.0) / (2 * SIGMA_STAR), rel=1e-9
        )
        assert rep.field == "real"
        assert (rep.d, rep.n) == (2, 3)

    def test_interval_brackets_tau_hat(self, fullspark):
        rep = build_report(fullspark)
        iv = condition_number(rep)
        assert not iv.infinite
        assert iv.low == pytest.approx(rep.B / (2 * rep.sigma), rel=1e-9)
        assert iv.high == pytest.approx(rep.B / rep.sigma, rel=1e-9)
        if iv.tau_hat is not None:
            assert iv.low * 0.95 <= iv.tau_hat <= iv.high * 1.05

    def test_degenerate_interval_is_infinite(self):
        f = frames.Frame(rows=np.eye(2), field="real")
        iv = condition_number(build_report(f))
        assert iv.infinite

    def test_report_serializes(self, fullspark):
        d = build_report(fullspark).to_dict()
        assert d["sigma_subset"] == sorted(d["sigma_subset"])
        assert set(d) >= {"A", "B", "sigma", "beta", "alpha_upper", "tau_lower"}
