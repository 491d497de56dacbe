"""Sphere optimization helpers for norm extrema of measurement maps.

Everything here works on a real parametrization: a complex coordinate vector
of length d is handled as a real vector of length 2d, and the modulus of each
measurement becomes the euclidean norm of a pair of real linear forms.  The
extremal problems are then min or max of a weighted l^p combination of those
moduli over the real unit sphere.
"""

import numpy as np


class ModulusMap:
    """Magnitudes of linear measurements as a function of a real parameter
    vector.  For a real frame the map is zeta -> |R zeta|; for a complex
    frame zeta stacks real and imaginary signal parts."""

    def __init__(self, rows, field):
        rows = np.asarray(rows)
        self.field = field
        self.n, self.d = rows.shape
        if field == "real":
            self.a = rows.astype(float)
            self.b = None
            self.dim = self.d
        else:
            rr, ri = rows.real, rows.imag
            # row . z = (rr zr - ri zi) + i (ri zr + rr zi)
            self.a = np.concatenate([rr, -ri], axis=1)
            self.b = np.concatenate([ri, rr], axis=1)
            self.dim = 2 * self.d

    def moduli(self, zeta):
        """Measurement magnitudes for one vector (dim,) or batch (..., dim)."""
        za = zeta @ self.a.T
        if self.b is None:
            return np.abs(za)
        zb = zeta @ self.b.T
        return np.hypot(za, zb)

    def to_signal(self, zeta):
        if self.field == "real":
            return np.asarray(zeta, dtype=float)
        return zeta[..., : self.d] + 1j * zeta[..., self.d :]

    def from_signal(self, x):
        if self.field == "real":
            return np.asarray(x, dtype=float)
        return np.concatenate([np.real(x), np.imag(x)], axis=-1)

    def subgradient(self, zeta, weights, p):
        """One subgradient of zeta -> weighted p-norm of moduli."""
        za = zeta @ self.a.T
        if self.b is None:
            mods = np.abs(za)
        else:
            zb = zeta @ self.b.T
            mods = np.hypot(za, zb)
        safe = np.where(mods > 0, mods, 1.0)
        # gradient of each modulus
        ga = za / safe
        grads = ga[:, None] * self.a
        if self.b is not None:
            grads = grads + (zb / safe)[:, None] * self.b
        w = weights
        if p == 1.0:
            return (w[:, None] * grads).sum(axis=0)
        if p == 2.0:
            wm = w * mods
            tot = np.linalg.norm(wm)
            if tot == 0:
                return np.zeros(self.dim)
            return ((w * wm / tot)[:, None] * grads).sum(axis=0)
        k = int(np.argmax(w * mods))
        return w[k] * grads[k]


def _norm_p(vals, weights, p):
    w = vals * weights
    if p == 1.0:
        return w.sum(axis=-1)
    if p == 2.0:
        return np.sqrt((w * w).sum(axis=-1))
    return w.max(axis=-1)


def _unit_rows(z):
    nrm = np.linalg.norm(z, axis=-1, keepdims=True)
    nrm = np.where(nrm > 0, nrm, 1.0)
    return z / nrm


def sphere_grid(dim, resolution):
    """Deterministic covering of the unit sphere in low dimension.

    dim 1 gives {+1, -1}; dim 2 a uniform angle grid; dim 3 a latitude by
    longitude product with the stated points per angular dimension.  Higher
    dimensions are not gridded here.
    """
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        th = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if dim == 3:
        th = np.linspace(0.0, np.pi, resolution)
        ph = np.linspace(0.0, 2.0 * np.pi, 2 * resolution, endpoint=False)
        T, P = np.meshgrid(th, ph, indexing="ij")
        pts = np.stack(
            [np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1
        )
        return pts.reshape(-1, 3)
    raise ValueError("no deterministic grid for sphere dimension %d" % dim)


def max_weighted_p(mod_map, weights, p, restarts=32, seed=0, iters=200):
    """Largest weighted l^p measurement norm on the unit sphere.

    p = inf has a closed form (the best single row).  Otherwise runs a
    monotone support ascent: linearize the objective at the current sign or
    phase pattern and jump to the maximizer of the linearization.  Real
    p = 1 with few rows is finished by exact sign enumeration.

    Returns (value, argmax in real parametrization).
    """
    A, B = mod_map.a, mod_map.b
    if p == np.inf:
        # the sup norm is maximized by aligning with the strongest single
        # row; for a complex row the two real forms are orthogonal with
        # equal length, so alignment with either one attains the row norm
        lens = np.linalg.norm(A, axis=1)
        k = int(np.argmax(weights * lens))
        z = A[k] / max(lens[k], 1e-300)
        val = _norm_p(mod_map.moduli(z), weights, p)
        return float(val), z

    if p == 1.0 and B is None and mod_map.n <= 16:
        n = mod_map.n
        masks = np.arange(1 << (n - 1), dtype=np.int64)
        signs = 1.0 - 2.0 * ((masks[:, None] >> np.arange(n - 1)) & 1)
        signs = np.concatenate([np.ones((len(masks), 1)), signs], axis=1)
        combos = (signs * weights) @ A
        lens = np.linalg.norm(combos, axis=1)
        k = int(np.argmax(lens))
        z = combos[k] / max(lens[k], 1e-300)
        return float(_norm_p(mod_map.moduli(z), weights, p)), z

    rng = np.random.default_rng(seed)
    starts = _unit_rows(rng.standard_normal((restarts, mod_map.dim)))
    best_val, best_z = -np.inf, None
    for z in starts:
        prev = -np.inf
        for _ in range(iters):
            za = z @ A.T
            if B is None:
                c = (weights * np.sign(np.where(za == 0, 1.0, za))) @ A
            else:
                zb = z @ B.T
                mods = np.hypot(za, zb)
                safe = np.where(mods > 0, mods, 1.0)
                c = ((weights * za / safe) @ A) + ((weights * zb / safe) @ B)
            nc = np.linalg.norm(c)
            if nc == 0:
                break
            z = c / nc
            val = _norm_p(mod_map.moduli(z), weights, p)
            if val <= prev * (1 + 1e-14):
                break
            prev = val
        val = _norm_p(mod_map.moduli(z), weights, p)
        if val > best_val:
            best_val, best_z = val, z.copy()
    return float(best_val), best_z


def min_weighted_p(
    mod_map, weights, p, restarts=32, seed=0, iters=400, warm_starts=(),
    grid_resolution=None,
):
    """Smallest weighted l^p measurement norm on the unit sphere.

    Projected subgradient descent with a diminishing step, restarted from
    random directions plus any warm starts.  When the real dimension is at
    most 3 a deterministic sphere grid seeds the descent as well, which is
    what makes the small cases reliable.

    Returns (value, argmin in real parametrization).
    """
    if mod_map.n == 0:
        z = np.zeros(mod_map.dim)
        z[0] = 1.0
        return 0.0, z
    rng = np.random.default_rng(seed)
    starts = [np.asarray(w, dtype=float) for w in warm_starts]
    if mod_map.dim <= 3:
        res = grid_resolution or (720 if mod_map.dim <= 2 else 120)
        grid = sphere_grid(mod_map.dim, res)
        vals = _norm_p(mod_map.moduli(grid), weights, p)
        order = np.argsort(vals)[: max(4, restarts // 4)]
        starts.extend(grid[order])
    starts.extend(_unit_rows(rng.standard_normal((restarts, mod_map.dim))))

    scale = float(np.mean(_norm_p(mod_map.moduli(_unit_rows(
        rng.standard_normal((8, mod_map.dim)))), weights, p)))
    scale = scale if scale > 0 else 1.0
    best_val, best_z = np.inf, None
    for z0 in starts:
        z = z0 / max(np.linalg.norm(z0), 1e-300)
        val = _norm_p(mod_map.moduli(z), weights, p)
        loc_best, loc_z = val, z.copy()
        for k in range(iters):
            g = mod_map.subgradient(z, weights, p)
            gn = np.linalg.norm(g)
            if gn == 0:
                break
            step = 0.5 / (1.0 + 0.05 * k)
            z = z - step * (g / gn) * min(1.0, loc_best / scale)
            z = z / max(np.linalg.norm(z), 1e-300)
            val = _norm_p(mod_map.moduli(z), weights, p)
            if val < loc_best:
                loc_best, loc_z = val, z.copy()
        if loc_best < best_val:
            best_val, best_z = loc_best, loc_z
    return float(best_val), best_z
