"""Complement property decisions and explicit uniqueness counterexamples.

A frame has the complement property when every split of its rows leaves at
least one side spanning.  For real frames this is equivalent to magnitude
measurements separating signal classes; for complex frames a failure still
certifies non-uniqueness, while success decides nothing.  A failing split
hands out two kernel vectors whose sum and difference share the same
magnitudes, the canonical counterexample pair.
"""

import dataclasses

import numpy as np

from .bounds import EXHAUSTIVE_CAP, ExhaustiveCapExceeded
from .core import DEFAULT_TOL, REAL, measure, quotient_distance

INJECTIVE = "Injective"
NOT_INJECTIVE = "NotInjective"
UNDETERMINED = "Undetermined"


@dataclasses.dataclass(frozen=True)
class CpVerdict:
    holds: bool
    injectivity: str
    method: str
    violating_subset: tuple | None = None
    kernel_witnesses: tuple | None = None

    def to_dict(self):
        def enc(vec):
            if np.iscomplexobj(vec):
                return [[float(z.real), float(z.imag)] for z in vec]
            return [float(t) for t in vec]

        wit = None
        if self.kernel_witnesses is not None:
            wit = {"u": enc(self.kernel_witnesses[0]), "v": enc(self.kernel_witnesses[1])}
        return {
            "holds": self.holds,
            "injectivity": self.injectivity,
            "method": self.method,
            "violating_subset": (
                list(self.violating_subset)
                if self.violating_subset is not None
                else None
            ),
            "witness": wit,
        }


def _rank_and_kernel(rows, d, rank_rel):
    """(rank, unit kernel vector or None) of a row block at the relative
    singular value threshold."""
    if len(rows) == 0:
        e = np.zeros(d, dtype=rows.dtype)
        e[0] = 1.0
        return 0, e
    _, s, vh = np.linalg.svd(rows, full_matrices=True)
    thr = rank_rel * s[0] if s[0] > 0 else 0.0
    rank = int((s > thr).sum())
    if rank >= d:
        return rank, None
    return rank, np.conj(vh[-1])


def _verdict_from_split(frame, subset, method, rank_rel):
    comp = [i for i in range(frame.n) if i not in set(subset)]
    _, u = _rank_and_kernel(frame.rows[list(subset)], frame.d, rank_rel)
    _, v = _rank_and_kernel(frame.rows[comp], frame.d, rank_rel)
    injectivity = NOT_INJECTIVE
    return CpVerdict(
        holds=False,
        injectivity=injectivity,
        method=method,
        violating_subset=tuple(subset),
        kernel_witnesses=(u, v),
    )


def check_cp(frame, heuristic=False, samples=20000, seed=0, tol=DEFAULT_TOL):
    """Decide the complement property by split enumeration.

    Real frames with fewer than 2d-1 rows fail by counting alone: splitting
    near the middle leaves both sides under d rows.  Otherwise all splits
    are scanned (complement symmetry halves the count) with a batched Gram
    screen and exact singular value confirmation; the lex smallest violating
    subset is reported.  Beyond the enumeration cap a randomized scan runs
    only when heuristic is set, and a clean scan then proves nothing.
    """
    n, d = frame.n, frame.d
    rank_rel = tol.rank_rel
    if frame.field == REAL and n < 2 * d - 1:
        half = tuple(range(n // 2))
        return _verdict_from_split(frame, half, "counting", rank_rel)

    if n > EXHAUSTIVE_CAP and not heuristic:
        raise ExhaustiveCapExceeded(
            "split enumeration is capped at %d rows, frame has %d; "
            "pass heuristic=True for a randomized scan" % (EXHAUSTIVE_CAP, n)
        )

    rows = frame.rows
    P = np.conj(rows)[:, :, None] * rows[:, None, :]
    G_full = P.sum(axis=0)
    s_scale = np.sqrt(float(np.linalg.eigvalsh(G_full)[-1]))
    # loose screen at 1e-5 of the top singular value; a genuinely deficient
    # side sits many decades below it even through the squared Gram route
    screen = (1e-5 * s_scale) ** 2

    violations = []

    def scan(bits_iter):
        for bits in bits_iter:
            G_S = np.tensordot(bits, P, axes=(1, 0))
            lam_S = np.linalg.eigvalsh(G_S)[..., 0]
            lam_C = np.linalg.eigvalsh(G_full[None] - G_S)[..., 0]
            cand = np.nonzero(np.maximum(lam_S, lam_C) < screen)[0]
            for k in cand:
                subset = [i for i in range(n) if bits[k, i]]
                comp = [i for i in range(n) if not bits[k, i]]
                r1, _ = _rank_and_kernel(rows[subset], d, rank_rel)
                r2, _ = _rank_and_kernel(rows[comp], d, rank_rel)
                if r1 < d and r2 < d:
                    violations.append(min(tuple(subset), tuple(comp)))

    if n <= EXHAUSTIVE_CAP:
        # index n-1 pinned to the complement side; both orientations of each
        # split are folded back in when taking the lex minimum
        total = 1 << (n - 1)
        chunk = max(1, min(1 << 16, (1 << 24) // max(d * d, 1)))

        def exhaustive_bits():
            cols = np.arange(n - 1)
            for start in range(0, total, chunk):
                masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
                low = ((masks[:, None] >> cols[None, :]) & 1).astype(float)
                yield np.concatenate([low, np.zeros((len(masks), 1))], axis=1)

        scan(exhaustive_bits())
        method = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        structured = np.zeros((n - 1, n))
        for k in range(1, n):
            structured[k - 1, :k] = 1.0
        random_bits = rng.integers(0, 2, size=(samples, n)).astype(float)
        draws = np.concatenate([structured, random_bits], axis=0)
        chunk = 4096
        scan(draws[start : start + chunk] for start in range(0, len(draws), chunk))
        method = "heuristic"

    if violations:
        best = min(violations)
        return _verdict_from_split(frame, best, method, rank_rel)
    injectivity = INJECTIVE if frame.field == REAL else UNDETERMINED
    return CpVerdict(holds=True, injectivity=injectivity, method=method)


def nonuniqueness_pair(verdict, frame, tol=DEFAULT_TOL):
    """Counterexample pair from a failing split.

    With u annihilated by one side and v by the other, x = u + v and
    y = u - v are measured identically row by row.  The pair is scaled to
    unit peak norm; complex kernel phases are swept so the two classes stay
    separated even when u and v are parallel.
    """
    if verdict.holds:
        raise ValueError("frame has the complement property; no pair exists")
    if verdict.kernel_witnesses is None:
        raise ValueError("verdict carries no kernel witnesses")
    u, v = verdict.kernel_witnesses
    space = frame.signal_space()
    if frame.field == REAL:
        phases = [1.0, -1.0]
    else:
        phases = list(np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False)))
    best = None
    for ph in phases:
        x, y = ph * u + v, ph * u - v
        scale = max(space.norm(x), space.norm(y))
        if scale <= 0:
            continue
        x, y = x / scale, y / scale
        gap = quotient_distance(x, y, space, tol=tol)
        if best is None or gap > best[0]:
            best = (gap, x, y)
    gap, x, y = best
    mgap = float(np.max(np.abs(measure(frame, x) - measure(frame, y))))
    if mgap > 1e-8:
        raise RuntimeError(
            "witness pair measurements differ by %.3g; kernel vectors are "
            "not exact annihilators" % mgap
        )
    return x, y
