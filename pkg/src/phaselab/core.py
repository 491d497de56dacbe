"""Signal and measurement spaces for phaseless measurement maps.

A signal lives in a finite dimensional real or complex coordinate space,
optionally equipped with a Gram matrix when the working basis is not
orthonormal.  Measurements are magnitudes of linear functionals, collected in
a weighted l^p space on a finite index set.  Signals that differ by a
unimodular factor are indistinguishable from their measurements, so distances
between signals are always taken over that factor.
"""

import dataclasses

import numpy as np

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)


class DimensionMismatch(ValueError):
    """Operand dimensions do not agree."""


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Central numeric tolerances.

    linalg_rel applies to quantities obtained from direct linear algebra
    (singular values, norms), optimization to quantities found by iterative
    search.  rank_rel is the relative singular value cutoff for rank
    decisions.  theta is the absolute phase resolution used when a quotient
    distance has to be minimized numerically.
    """

    linalg_rel: float = 1e-9
    optimization: float = 1e-6
    rank_rel: float = 1e-10
    theta: float = 1e-10


DEFAULT_TOL = Tolerances()


def _as_vector(x, d, what="vector"):
    v = np.asarray(x)
    if v.shape != (d,):
        raise DimensionMismatch(
            "%s has shape %s, expected (%d,)" % (what, v.shape, d)
        )
    return v


@dataclasses.dataclass(frozen=True)
class SignalSpace:
    """Coordinate space of signals.

    Parameters
    ----------
    d : int
        Dimension.
    field : str
        "real" or "complex".
    gram : ndarray or None
        Gram matrix of the working basis.  None means the basis is
        orthonormal and the norm is the plain euclidean norm of the
        coordinates.
    """

    d: int
    field: str = REAL
    gram: np.ndarray | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive, got %d" % self.d)
        if self.field not in FIELDS:
            raise ValueError("unknown field %r" % (self.field,))
        if self.gram is not None:
            g = np.asarray(self.gram)
            if g.shape != (self.d, self.d):
                raise DimensionMismatch(
                    "gram has shape %s, expected (%d, %d)"
                    % (g.shape, self.d, self.d)
                )
            if not np.allclose(g, g.conj().T, rtol=0, atol=1e-12 * max(1.0, np.abs(g).max())):
                raise ValueError("gram matrix must be hermitian")
            # fails loudly for indefinite matrices
            np.linalg.cholesky(g)
            object.__setattr__(self, "gram", g)

    def _chol(self):
        return np.linalg.cholesky(self.gram)

    def norm(self, x):
        x = np.asarray(x)
        if self.gram is None:
            return float(np.linalg.norm(x))
        q = np.real(np.conj(x) @ (self.gram @ x))
        return float(np.sqrt(max(q, 0.0)))

    def inner(self, x, y):
        """Inner product, conjugate linear in the second argument."""
        x = np.asarray(x)
        y = np.asarray(y)
        if self.gram is None:
            return np.vdot(y, x)
        return np.conj(y) @ (self.gram @ x)

    def whiten_rows(self, rows):
        """Map a measurement matrix to coordinates in which the signal norm
        is euclidean.  Identity when the basis is orthonormal."""
        rows = np.asarray(rows)
        if self.gram is None:
            return rows
        L = self._chol()
        # rows @ inv(L^H), solved column-wise instead of forming the inverse
        return np.linalg.solve(np.conj(L), rows.T).T

    def unwhiten(self, z):
        """Inverse of the coordinate change used by whiten_rows."""
        z = np.asarray(z)
        if self.gram is None:
            return z
        L = self._chol()
        return np.linalg.solve(np.conj(L).T, z.T).T


@dataclasses.dataclass(frozen=True)
class MeasurementSpace:
    """Weighted l^p norm on a finite measurement index set.

    The norm is solid: it depends on entries only through their magnitudes
    and never decreases when a magnitude grows.  Weights must be strictly
    positive so that every indicator has finite positive norm.
    """

    n: int
    p: float = 2.0
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("index set must be nonempty")
        if self.p not in (1.0, 2.0, np.inf):
            raise ValueError("p must be 1, 2 or inf, got %r" % (self.p,))
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (self.n,):
                raise DimensionMismatch(
                    "weights have shape %s, expected (%d,)" % (w.shape, self.n)
                )
            if not np.all(w > 0):
                raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    def norm(self, v):
        """Norm of one vector or of a batch with shape (..., n)."""
        v = np.asarray(v)
        if v.shape[-1] != self.n:
            raise DimensionMismatch(
                "vector has last dimension %d, expected %d"
                % (v.shape[-1], self.n)
            )
        w = np.abs(v)
        if self.weights is not None:
            w = w * self.weights
        if self.p == 1.0:
            out = w.sum(axis=-1)
        elif self.p == 2.0:
            out = np.sqrt((w * w).sum(axis=-1))
        else:
            out = w.max(axis=-1)
        if out.ndim == 0:
            return float(out)
        return out


def measure(frame, x):
    """Phaseless measurements of a signal: magnitudes of the frame
    functionals applied to the coordinate vector.

    Parameters
    ----------
    frame : object with attributes rows (n, d) and d
    x : array of shape (d,) or batch (..., d)

    Returns
    -------
    ndarray of shape (n,) or (..., n), nonnegative.
    """
    x = np.asarray(x)
    if x.shape[-1] != frame.d:
        raise DimensionMismatch(
            "signal has last dimension %d but frame expects %d"
            % (x.shape[-1], frame.d)
        )
    return np.abs(x @ frame.rows.T)


def phase_align(x, y, space):
    """Unimodular factor t minimizing the distance from x to t*y.

    For real signals t is +-1.  For complex signals in an l2 type norm the
    minimizer is available in closed form from the phase of the inner
    product; a degenerate inner product makes any factor optimal and 1 is
    returned.
    """
    x = _as_vector(x, space.d, "x")
    y = _as_vector(y, space.d, "y")
    if space.field == REAL:
        if space.norm(x - y) <= space.norm(x + y):
            return 1.0
        return -1.0
    ip = space.inner(x, y)
    a = abs(ip)
    if a == 0.0:
        return 1.0 + 0.0j
    return ip / a


def quotient_distance(x, y, space, tol=DEFAULT_TOL, norm=None):
    """Distance between signal classes, minimized over unimodular factors.

    Real field: min of the two sign choices.  Complex field with the space
    norm (a quadratic form): closed form via the phase of the inner product.
    A non-quadratic override norm can be passed as a callable; the complex
    minimization then falls back to a coarse phase grid refined by golden
    section search to tol.theta.
    """
    x = _as_vector(x, space.d, "x")
    y = _as_vector(y, space.d, "y")
    if norm is not None:
        if space.field == REAL:
            return min(float(norm(x - y)), float(norm(x + y)))
        _, val = circle_minimize(
            lambda t: float(norm(x - np.exp(1j * t) * y)), tol_theta=tol.theta
        )
        return val
    if space.field == REAL:
        return min(space.norm(x - y), space.norm(x + y))
    nx2 = np.real(space.inner(x, x))
    ny2 = np.real(space.inner(y, y))
    val = nx2 + ny2 - 2.0 * abs(space.inner(x, y))
    return float(np.sqrt(max(val, 0.0)))


def circle_minimize(f, tol_theta=1e-10, coarse=64):
    """Minimize a function of a phase over [0, 2pi).

    Scans a coarse grid, then runs golden section search on the bracket
    around the best grid point.  Returns (theta, value).  Used for norms
    where no closed form phase alignment exists.
    """
    thetas = np.linspace(0.0, 2.0 * np.pi, coarse, endpoint=False)
    vals = [f(t) for t in thetas]
    k = int(np.argmin(vals))
    step = 2.0 * np.pi / coarse
    lo, hi = thetas[k] - step, thetas[k] + step
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d_ = a + invphi * (b - a)
    fc, fd = f(c), f(d_)
    while (b - a) > tol_theta:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + invphi * (b - a)
            fd = f(d_)
    t = 0.5 * (a + b)
    return t, f(t)
