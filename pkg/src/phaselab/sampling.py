"""Lower density of sampling sets and the bandlimited injectivity criterion.

For bandlimited signal classes, magnitude samples on a set with lower
density above twice the bandwidth separate signal classes.  On a finite
window the density liminf is replaced by a minimum over window lengths up
to half the window, reported together with its boundary margin.

Fourier convention: the transform pairs f with f_hat(xi) = integral of
f(t) exp(-2 pi i t xi) dt, so bandwidth b means spectrum inside
[-b/2, b/2], the critical sampling density is b, and the phaseless
criterion reads density > 2b.
"""

import dataclasses
import re

import numpy as np

INJECTIVE = "Injective"
NOT_DECIDABLE = "NotDecidable"

CRITERION = "density > 2*b*(1+margin)"


@dataclasses.dataclass(frozen=True)
class SamplingSet:
    """Finite point set on a window with the signal class parameters.

    points must be strictly increasing and inside the window; b is the
    bandwidth of the signal class and p its integrability exponent, carried
    for reporting.
    """

    points: np.ndarray
    window: tuple
    b: float
    p: float = 2.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise ValueError("sampling set is empty")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("points must be strictly increasing")
        w0, w1 = float(self.window[0]), float(self.window[1])
        if not w1 > w0:
            raise ValueError("window must have positive length")
        if pts[0] < w0 or pts[-1] > w1:
            raise ValueError("points fall outside the window")
        if not self.b > 0:
            raise ValueError("bandwidth must be positive")
        if not 1.0 < self.p < np.inf:
            raise ValueError("exponent must lie strictly between 1 and infinity")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "window", (w0, w1))

    @property
    def r_cap(self):
        # finite-window validity cap on the averaging length
        return (self.window[1] - self.window[0]) / 2.0

    def default_r_min(self):
        return (self.window[1] - self.window[0]) / 8.0


def _min_count_over_positions(pts, w0, w1, r, slide_step):
    """Exact infimum of the point count over admissible windows [a, a+r).

    The count as a function of the left end a is piecewise constant with
    jumps at the points, so the infimum is attained either flush left,
    flush right, or just after some point leaves the window.  A uniform
    slide grid runs on top as a cross check; it can never go below the
    candidate minimum.
    """
    n = len(pts)
    best = int(np.searchsorted(pts, w0 + r, side="left"))
    a_hi = w1 - r
    for i in range(n):
        if pts[i] > a_hi:
            break
        # left end just past point i: the window holds (p_i, p_i + r]
        c = int(np.searchsorted(pts, pts[i] + r, side="right")) - (i + 1)
        if c < best:
            best = c
    c = n - int(np.searchsorted(pts, a_hi, side="left"))
    best = min(best, c)
    if slide_step > 0:
        grid = np.arange(w0, a_hi + slide_step / 2, slide_step)
        if len(grid) > 20000:
            grid = np.linspace(w0, a_hi, 20000)
        lo = np.searchsorted(pts, grid, side="left")
        hi = np.searchsorted(pts, grid + r, side="left")
        if len(grid):
            best = min(best, int((hi - lo).min()))
    return best


def _snap_down(r, spans):
    """Largest realized pairwise span not exceeding r, or r itself if the
    set has no span that small.  Evaluating counts at realized spans makes
    the density exact on uniform grids instead of low by a discretization
    term."""
    if len(spans) == 0:
        return r
    k = np.searchsorted(spans, r, side="right") - 1
    if k < 0:
        return r
    return float(spans[k])


def lower_beurling_density(sampling_set, r_min=None):
    """Finite-window stand-in for the lower density of a point set.

    Minimizes count/length over a geometric ladder of window lengths from
    r_min up to half the window, each length snapped down to a realized
    span of the set, with the count minimized exactly over window
    positions.  Exact for uniform grids; in general an upper approximation
    of the infinite-window liminf, with boundary error of order 1/r_cap.
    """
    s = sampling_set
    pts = s.points
    w0, w1 = s.window
    cap = s.r_cap
    if r_min is None:
        r_min = s.default_r_min()
    if not 0 < r_min <= cap:
        raise ValueError(
            "r_min must lie in (0, %g], got %g" % (cap, r_min)
        )
    diffs = np.diff(pts)
    min_gap = float(diffs.min()) if len(diffs) else cap
    slide = min_gap / 4.0
    spans = np.unique((pts[None, :] - pts[:, None])[np.triu_indices(len(pts), 1)])
    ladder = [r_min * 2.0 ** (k / 4.0) for k in range(200)]
    ladder = [r for r in ladder if r <= cap * (1 + 1e-12)] or [r_min]
    best = np.inf
    for r in ladder:
        r_eff = _snap_down(min(r, cap), spans)
        cnt = _min_count_over_positions(pts, w0, w1, r_eff, slide)
        best = min(best, cnt / r_eff)
    return float(best)


@dataclasses.dataclass(frozen=True)
class DensityVerdict:
    verdict: str
    density: float
    margin: float
    threshold: float
    b: float
    p: float
    r_min: float
    r_cap: float
    criterion: str = CRITERION

    def to_dict(self):
        return dataclasses.asdict(self)


def phaseless_injectivity_verdict(sampling_set, r_min=None):
    """Sufficient-condition check for magnitude sampling to separate
    classes of bandlimited signals.

    Injective requires the computed density to clear 2b with room for the
    finite-window boundary term; anything else is NotDecidable, since the
    density criterion is sufficient only.
    """
    s = sampling_set
    if r_min is None:
        r_min = s.default_r_min()
    density = lower_beurling_density(s, r_min=r_min)
    margin = 1.0 / s.r_cap
    threshold = 2.0 * s.b * (1.0 + margin)
    verdict = INJECTIVE if density > threshold else NOT_DECIDABLE
    return DensityVerdict(
        verdict=verdict,
        density=density,
        margin=margin,
        threshold=threshold,
        b=s.b,
        p=s.p,
        r_min=float(r_min),
        r_cap=s.r_cap,
    )


_GRID_RE = re.compile(
    r"^\s*grid\(\s*([^,]+)\s*,\s*\[\s*([^,\]]+)\s*,\s*([^,\]]+)\s*\]\s*\)\s*$"
)


def parse_set_expression(expr):
    """Points and window from a generator expression.

    Supported form: grid(step, [w0, w1]) for the uniform grid of spacing
    step intersected with the window.
    """
    m = _GRID_RE.match(expr)
    if not m:
        raise ValueError(
            "unsupported set expression %r; expected grid(step, [w0, w1])" % expr
        )
    step = float(m.group(1))
    w0, w1 = float(m.group(2)), float(m.group(3))
    if step <= 0:
        raise ValueError("grid step must be positive")
    if not w1 > w0:
        raise ValueError("window must have positive length")
    k0 = int(np.ceil(w0 / step - 1e-12))
    k1 = int(np.floor(w1 / step + 1e-12))
    pts = np.arange(k0, k1 + 1) * step
    return pts, (w0, w1)


def load_points(path):
    """Points from a text file, one real per line.

    Returns (points, notices); unsorted or duplicated input is normalized
    and noted rather than rejected.
    """
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            t = line.strip()
            if not t or t.startswith("#"):
                continue
            try:
                vals.append(float(t))
            except ValueError:
                raise ValueError(
                    "%s:%d: not a number: %r" % (path, lineno, t)
                ) from None
    if not vals:
        raise ValueError("%s holds no points" % path)
    arr = np.array(vals)
    notices = []
    srt = np.sort(arr)
    if not np.array_equal(arr, srt):
        notices.append("points were not sorted; sorted on load")
    uniq = np.unique(srt)
    if len(uniq) != len(srt):
        notices.append("duplicate points removed on load")
    return uniq, notices
