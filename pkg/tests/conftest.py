import pathlib

import numpy as np
import pytest

from phaselab import frames

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fullspark():
    """The three-vector full spark frame in the plane: e1, e2, e1+e2."""
    return frames.Frame(
        rows=np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), field="real"
    )


def half_circle(points):
    """Unit vectors in R^2 covering directions [0, pi): one per sign class."""
    theta = np.linspace(0.0, np.pi, points, endpoint=False)
    return np.column_stack([np.cos(theta), np.sin(theta)])


def full_circle(points):
    theta = np.linspace(0.0, 2 * np.pi, points, endpoint=False)
    return np.column_stack([np.cos(theta), np.sin(theta)])


def grid_injectivity_oracle(frame, points=720, separation=0.1):
    """Brute force injectivity search for real frames in the plane.

    A collision pairs vectors of generally different lengths, so the scan
    runs over direction pairs with the relative scale eliminated in closed
    form per pair, keeping only pairs separated in the quotient metric.
    The best candidate is polished by least squares on the squared
    magnitude residuals, which are smooth trig polynomials; a penalty
    residual keeps the pair away from the same-class valley.  Returns
    (injective, polished_gap): a genuine collision polishes to roundoff
    while a separated frame bottoms out at a value proportional to its
    lower Lipschitz constant, so the verdict splits cleanly at 1e-8.
    """
    from scipy import optimize

    rows = frame.rows
    xs = half_circle(points)
    M = np.abs(xs @ rows.T)
    n2 = (M * M).sum(axis=1)
    s = (M @ M.T) / np.where(n2 > 0, n2, 1.0)[None, :]
    gap = np.zeros((points, points))
    for k in range(rows.shape[0]):
        col = M[:, k]
        gap = np.maximum(gap, np.abs(col[:, None] - s * col[None, :]))
    cos = np.abs(xs @ xs.T)
    dist = np.sqrt(np.clip(1.0 + s * s - 2.0 * s * cos, 0.0, None))
    gap = np.where(dist > separation, gap, np.inf)
    i, j = np.unravel_index(np.argmin(gap), gap.shape)
    start = np.array(
        [
            np.arctan2(xs[i, 1], xs[i, 0]),
            np.arctan2(xs[j, 1], xs[j, 0]),
            s[i, j],
        ]
    )

    def residuals(t):
        u = np.array([np.cos(t[0]), np.sin(t[0])])
        w = np.array([np.cos(t[1]), np.sin(t[1])])
        r = (rows @ u) ** 2 - (t[2] * (rows @ w)) ** 2
        d = np.sqrt(max(1.0 + t[2] ** 2 - 2.0 * t[2] * abs(u @ w), 0.0))
        return np.append(r, 10.0 * max(0.0, separation - d))

    sol = optimize.least_squares(
        residuals,
        start,
        bounds=([-np.inf, -np.inf, 0.0], [np.inf, np.inf, np.inf]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    t = sol.x
    u = np.array([np.cos(t[0]), np.sin(t[0])])
    w = np.array([np.cos(t[1]), np.sin(t[1])])
    d = np.sqrt(max(1.0 + t[2] ** 2 - 2.0 * t[2] * abs(u @ w), 0.0))
    polished = float(gap[i, j])
    if d > separation / 2:
        polished = min(
            polished,
            float(np.max(np.abs(np.abs(rows @ u) - t[2] * np.abs(rows @ w)))),
        )
    return polished > 1e-8, polished
