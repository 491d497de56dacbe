"""Baseline magnitude-only reconstruction by alternating minimization.

The solver imputes phases (signs in the real case) from the current
estimate's frame coefficients, back-projects by least squares, and repeats.
Each sweep is monotone in the l2 magnitude residual, so restarts are the
only defense against the nonconvexity; failures on adversarial frames are
expected and informative.
"""

import dataclasses

import numpy as np

from . import bounds as bnd
from .core import DEFAULT_TOL, REAL, quotient_distance


@dataclasses.dataclass(frozen=True)
class ReconResult:
    estimate: np.ndarray
    residual: float
    iterations: int
    converged: bool
    restarts: int
    best_restart: int
    trajectory: tuple
    quotient_error: float | None = None

    def to_dict(self):
        if np.iscomplexobj(self.estimate):
            est = [[float(z.real), float(z.imag)] for z in self.estimate]
        else:
            est = [float(t) for t in self.estimate]
        return {
            "estimate": est,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "restarts": self.restarts,
            "best_restart": self.best_restart,
            "trajectory": list(self.trajectory),
            "quotient_error": self.quotient_error,
        }


def _phases(coeff, field):
    if field == REAL:
        s = np.sign(coeff)
        s[s == 0] = 1.0
        return s
    mag = np.abs(coeff)
    out = np.ones_like(coeff)
    nz = mag > 0
    out[nz] = coeff[nz] / mag[nz]
    return out


def solve(
    frame,
    measurements,
    restarts=16,
    max_iter=400,
    tol=1e-9,
    truth=None,
    seed=0,
    mspace=None,
    tolerances=DEFAULT_TOL,
):
    """Reconstruct a signal class from magnitude measurements.

    Runs `restarts` random initializations, keeps the best final l2
    residual with the restart index as tie break, and reports the winning
    residual trajectory.  converged means the residual fell below tol
    relative to the measurement scale.  truth, when supplied, adds the
    class distance of the estimate to it.
    """
    b = np.asarray(measurements, dtype=float).ravel()
    if b.shape != (frame.n,):
        raise ValueError(
            "expected %d measurements, got shape %s" % (frame.n, b.shape)
        )
    if np.any(b < 0):
        raise ValueError("magnitude measurements cannot be negative")
    if mspace is None:
        mspace = bnd.default_mspace(frame)
    space = frame.signal_space()
    dtype = complex if frame.field != REAL else float
    scale = float(np.linalg.norm(b))

    if scale == 0.0:
        est = np.zeros(frame.d, dtype=dtype)
        qerr = None
        if truth is not None:
            qerr = float(quotient_distance(est, truth, space, tol=tolerances))
        return ReconResult(
            estimate=est,
            residual=0.0,
            iterations=0,
            converged=True,
            restarts=restarts,
            best_restart=0,
            trajectory=(0.0,),
            quotient_error=qerr,
        )

    rows = frame.rows
    # one factorization serves every least squares step
    pinv = np.linalg.pinv(rows)
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    best = None
    for r in range(restarts):
        if frame.field == REAL:
            x = rng.standard_normal(frame.d)
        else:
            x = rng.standard_normal(frame.d) + 1j * rng.standard_normal(frame.d)
        coeff = rows @ x
        nrm = np.linalg.norm(coeff)
        if nrm > 0:
            x = x * (scale / nrm)
        traj = []
        it = 0
        for it in range(1, max_iter + 1):
            coeff = rows @ x
            res = float(np.linalg.norm(np.abs(coeff) - b))
            traj.append(res)
            if res <= tol * scale:
                break
            x_next = pinv @ (b * _phases(coeff, frame.field))
            if len(traj) >= 2 and traj[-2] - res <= 1e-14 * scale:
                x = x_next
                break
            x = x_next
        final = float(np.linalg.norm(np.abs(rows @ x) - b))
        traj.append(final)
        key = (final, r)
        if best is None or key < best[0]:
            best = (key, x, tuple(traj), it)

    (final, r_best), x, traj, iters = best
    qerr = None
    if truth is not None:
        qerr = float(quotient_distance(x, truth, space, tol=tolerances))
    residual = float(mspace.norm(np.abs(rows @ x) - b))
    return ReconResult(
        estimate=x,
        residual=residual,
        iterations=iters,
        converged=final <= tol * scale,
        restarts=restarts,
        best_restart=r_best,
        trajectory=traj,
        quotient_error=qerr,
    )
