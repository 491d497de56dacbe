"""Adversarial pair construction and parameter sweeps.

A split of the rows with both restricted lower bounds small yields two unit
vectors u, v nearly annihilated by the two sides.  The pair x = u + v,
y = u - v then has nearly equal measurements while staying far apart on
signal classes, which caps the lower Lipschitz constant.  Sweeps drive this
construction over the sinc model dimension, the oversampling factor, and
growing numbers of random rows at fixed dimension.
"""

import dataclasses
import json

import numpy as np

from . import bounds as bnd
from ._optim import _norm_p
from .core import DEFAULT_TOL, REAL, measure, quotient_distance
from .frames import SincFrameSpec, random_frame, sinc_frame

SWEEP_HEADER = "param,d,N,A,B,sigma,alpha_upper,tau_lower,ratio"


@dataclasses.dataclass(frozen=True)
class WitnessPair:
    """One adversarial pair and its quality numbers.

    measurement_gap / signal_gap is an upper bound on the lower Lipschitz
    constant; s_residual and c_residual are the restricted measurement norms
    of u and v driving the gap inequality.
    """

    subset: tuple
    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    measurement_gap: float
    signal_gap: float
    ratio: float
    s_residual: float
    c_residual: float

    def to_dict(self):
        def enc(vec):
            if np.iscomplexobj(vec):
                return [[float(z.real), float(z.imag)] for z in vec]
            return [float(t) for t in vec]

        return {
            "subset": list(self.subset),
            "u": enc(self.u),
            "v": enc(self.v),
            "x": enc(self.x),
            "y": enc(self.y),
            "measurement_gap": self.measurement_gap,
            "signal_gap": self.signal_gap,
            "ratio": self.ratio,
            "s_residual": self.s_residual,
            "c_residual": self.c_residual,
        }


def build_witness(frame, mspace=None, subset=(), tol=DEFAULT_TOL, seed=0):
    """Assemble the adversarial pair for one split of the rows.

    u minimizes the restricted measurement norm over the subset rows, v over
    the complement; both are unit vectors in the signal norm.  Either side
    being empty is rejected since the construction needs two working sides.
    """
    if mspace is None:
        mspace = bnd.default_mspace(frame)
    subset = tuple(sorted(subset))
    if len(subset) == 0 or len(subset) >= frame.n:
        raise ValueError(
            "witness split needs both sides nonempty, got %d of %d rows"
            % (len(subset), frame.n)
        )
    comp = tuple(i for i in range(frame.n) if i not in set(subset))
    space = frame.signal_space()
    ru, u = bnd.restricted_min_vector(frame, mspace, subset, tol=tol, seed=seed)
    rv, v = bnd.restricted_min_vector(frame, mspace, comp, tol=tol, seed=seed)
    for w in (u, v):
        if abs(space.norm(w) - 1.0) > 1e-12:
            raise RuntimeError("restricted minimizer came back non-unit")
    x, y = u + v, u - v
    mgap = float(mspace.norm(measure(frame, x) - measure(frame, y)))
    sgap = float(quotient_distance(x, y, space, tol=tol))
    scale = space.norm(x) + space.norm(y)
    if sgap <= 1e-12 * max(scale, 1e-300):
        ratio = np.inf
    else:
        ratio = mgap / sgap
    return WitnessPair(
        subset=subset,
        u=u,
        v=v,
        x=x,
        y=y,
        measurement_gap=mgap,
        signal_gap=sgap,
        ratio=float(ratio),
        s_residual=float(ru),
        c_residual=float(rv),
    )


def min_over_phase_grid(x, y, space, points=4096):
    """min over unimodular tau of ||x - tau y|| on a uniform phase grid.

    Real spaces only need the two signs.
    """
    if not np.iscomplexobj(x) and not np.iscomplexobj(y):
        return min(space.norm(x - y), space.norm(x + y))
    th = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    taus = np.exp(1j * th)
    vals = [space.norm(x - t * y) for t in taus]
    return float(min(vals))


@dataclasses.dataclass(frozen=True)
class SweepRow:
    param: float
    d: int
    N: int
    A: float
    B: float
    sigma: float
    alpha_upper: float
    tau_lower: float
    ratio: float

    def to_dict(self):
        return {
            "param": self.param,
            "d": self.d,
            "N": self.N,
            "A": self.A,
            "B": self.B,
            "sigma": self.sigma,
            "alpha_upper": self.alpha_upper,
            "tau_lower": self.tau_lower,
            "ratio": self.ratio,
        }


@dataclasses.dataclass(frozen=True)
class SweepResult:
    kind: str
    param_name: str
    rows: tuple
    growth_fit: float | None = None
    extras: dict = dataclasses.field(default_factory=dict)

    def to_csv(self):
        lines = [SWEEP_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    [
                        repr(float(r.param)),
                        str(r.d),
                        str(r.N),
                        repr(float(r.A)),
                        repr(float(r.B)),
                        repr(float(r.sigma)),
                        repr(float(r.alpha_upper)),
                        repr(float(r.tau_lower)),
                        repr(float(r.ratio)),
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self):
        out = {
            "kind": self.kind,
            "param_name": self.param_name,
            "rows": [r.to_dict() for r in self.rows],
            "growth_fit": self.growth_fit,
        }
        out.update(self.extras)
        return out

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _sweep_cell(frame, param, strategy, restarts, sigma_seed, tol):
    """Constants of one sweep cell plus the witness at the optimal split."""
    mspace = bnd.default_mspace(frame)
    b = bnd.frame_bounds(frame, mspace, tol=tol)
    sig = bnd.scp_sigma(
        frame, mspace, strategy=strategy, restarts=restarts, seed=sigma_seed
    )
    ratio = np.inf
    if 0 < len(sig.subset) < frame.n:
        pair = build_witness(frame, mspace, sig.subset, tol=tol, seed=sigma_seed)
        ratio = pair.ratio
    alpha_upper = min(b.B, ratio)
    if sig.sigma > 0:
        low = b.B if frame.field == REAL else b.A
        tau_lower = low / (2.0 * sig.sigma)
    else:
        tau_lower = np.inf
    return SweepRow(
        param=float(param),
        d=frame.d,
        N=frame.n,
        A=b.A,
        B=b.B,
        sigma=sig.sigma,
        alpha_upper=float(alpha_upper),
        tau_lower=float(tau_lower),
        ratio=float(ratio),
    )


def dimension_sweep(
    m_range,
    spec_template=None,
    strategy="local-search",
    restarts=16,
    sigma_seed=0,
    tol=DEFAULT_TOL,
):
    """Stability constants of the sinc model as the dimension grows.

    One cell per m in m_range on the frame of SincFrameSpec(m, **template).
    growth_fit is the least squares slope of log2(tau_lower) against m over
    all rows.
    """
    m_list = sorted(set(int(m) for m in m_range))
    if not m_list:
        raise ValueError("empty sweep range")
    template = dict(spec_template or {})
    rows = []
    for m in m_list:
        frame = sinc_frame(SincFrameSpec(m=m, **template))
        rows.append(_sweep_cell(frame, m, strategy, restarts, sigma_seed, tol))
    fit = None
    taus = np.array([r.tau_lower for r in rows])
    if len(rows) >= 2 and np.all(np.isfinite(taus)) and np.all(taus > 0):
        fit = float(np.polyfit(m_list, np.log2(taus), 1)[0])
    return SweepResult(
        kind="dimension", param_name="m", rows=tuple(rows), growth_fit=fit
    )


def oversample_sweep(
    m,
    q_range,
    spec_template=None,
    strategy="local-search",
    restarts=16,
    sigma_seed=0,
    tol=DEFAULT_TOL,
):
    """Stability constants at fixed m as the sampling rate is refined.

    Raw constants are reported per q together with B-normalized sigma;
    tau_lower itself is invariant under a global row rescale, so it needs no
    separate normalized column.
    """
    q_list = sorted(set(int(q) for q in q_range))
    if not q_list:
        raise ValueError("empty sweep range")
    if any(q < 1 for q in q_list):
        raise ValueError("oversampling factors must be positive integers")
    template = dict(spec_template or {})
    template.pop("oversample", None)
    rows = []
    normalized = []
    for q in q_list:
        frame = sinc_frame(SincFrameSpec(m=int(m), oversample=q, **template))
        row = _sweep_cell(frame, q, strategy, restarts, sigma_seed, tol)
        rows.append(row)
        normalized.append(
            {
                "param": float(q),
                "sigma_over_B": row.sigma / row.B if row.B > 0 else np.inf,
                "tau_lower": row.tau_lower,
            }
        )
    taus = np.array([r.tau_lower for r in rows])
    spread = float(taus.max() / taus.min()) if np.all(taus > 0) else np.inf
    return SweepResult(
        kind="oversample",
        param_name="q",
        rows=tuple(rows),
        growth_fit=None,
        extras={"m": int(m), "normalized": normalized, "tau_spread": spread},
    )


def fixed_dimension_sweep(
    d=3,
    n_range=range(7, 25),
    seeds=range(96),
    strategy="local-search",
    restarts=64,
    sigma_seed=0,
    tol=DEFAULT_TOL,
):
    """Random real frames at fixed dimension as the row count grows.

    The same seed list is replayed at every N and each column is aggregated
    by its median over the batch, so the per-N numbers estimate the typical
    frame rather than one draw; single draws of tau_lower are heavy tailed
    at the smallest feasible N.  tau_spread is max over N of the aggregated
    tau_lower divided by its min.
    """
    n_list = sorted(set(int(n) for n in n_range))
    if not n_list:
        raise ValueError("empty sweep range")
    seed_list = [int(s) for s in seeds]
    if not seed_list:
        raise ValueError("need at least one seed")
    if any(n < d for n in n_list):
        raise ValueError("row counts below d cannot span")
    rows = []
    for n in n_list:
        cells = [
            _sweep_cell(
                random_frame(d, n, seed=s), n, strategy, restarts, sigma_seed, tol
            )
            for s in seed_list
        ]
        med = lambda f: float(np.median([f(c) for c in cells]))
        rows.append(
            SweepRow(
                param=float(n),
                d=d,
                N=n,
                A=med(lambda c: c.A),
                B=med(lambda c: c.B),
                sigma=med(lambda c: c.sigma),
                alpha_upper=med(lambda c: c.alpha_upper),
                tau_lower=med(lambda c: c.tau_lower),
                ratio=med(lambda c: c.ratio),
            )
        )
    taus = np.array([r.tau_lower for r in rows])
    spread = float(taus.max() / taus.min()) if np.all(taus > 0) else np.inf
    return SweepResult(
        kind="fixed-dimension",
        param_name="N",
        rows=tuple(rows),
        growth_fit=None,
        extras={
            "aggregate": "median",
            "seeds": seed_list,
            "tau_spread": spread,
        },
    )
