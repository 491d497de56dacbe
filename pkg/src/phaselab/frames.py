"""Finite measurement frames: random test frames, truncated sinc models,
row restriction and a JSON interchange format.

A frame is a stack of row functionals on a d dimensional signal space.  The
sinc family models point evaluation of a band limited function on a uniform
sample grid: the signal is a coefficient vector over integer shifted sinc
functions, and each row evaluates those basis functions at one sample point.
Integer shifts of sinc are orthonormal in the ambient function space, so the
coefficient 2-norm is already the function norm and no Gram correction is
needed for that model.
"""

import dataclasses
import json

import numpy as np

from .core import COMPLEX, FIELDS, REAL, SignalSpace


class FrameFormatError(ValueError):
    """A frame file does not follow the interchange schema."""


@dataclasses.dataclass(frozen=True)
class Frame:
    """Measurement frame with n rows acting on d coordinates.

    labels identify rows (sample positions for sinc frames, integers
    otherwise) and survive restriction and serialization.  notes carries
    construction warnings.
    """

    rows: np.ndarray
    field: str
    labels: tuple = ()
    signal_gram: np.ndarray | None = None
    notes: tuple = ()

    def __post_init__(self):
        rows = np.asarray(self.rows)
        if rows.ndim != 2:
            raise ValueError("rows must be a 2d array, got shape %s" % (rows.shape,))
        if self.field not in FIELDS:
            raise ValueError("unknown field %r" % (self.field,))
        if self.field == REAL:
            if np.iscomplexobj(rows):
                raise ValueError("real frame cannot hold complex rows")
            rows = rows.astype(float)
        else:
            rows = rows.astype(complex)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(rows.shape[0])))
        elif len(self.labels) != rows.shape[0]:
            raise ValueError(
                "%d labels for %d rows" % (len(self.labels), rows.shape[0])
            )

    @property
    def d(self):
        return self.rows.shape[1]

    @property
    def n(self):
        return self.rows.shape[0]

    def signal_space(self):
        return SignalSpace(self.d, self.field, gram=self.signal_gram)


def random_frame(d, n, field=REAL, seed=0, allow_thin=False):
    """Frame with independent standard gaussian entries.

    Real and imaginary parts are drawn independently in the complex case.
    Deterministic for a given seed.  Frames with fewer rows than dimensions
    cannot span and are rejected unless allow_thin is set.
    """
    if n < d and not allow_thin:
        raise ValueError(
            "frame with %d rows cannot span dimension %d; "
            "pass allow_thin=True to build it anyway" % (n, d)
        )
    rng = np.random.default_rng(seed)
    if field == REAL:
        rows = rng.standard_normal((n, d))
    elif field == COMPLEX:
        rows = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    else:
        raise ValueError("unknown field %r" % (field,))
    return Frame(rows=rows, field=field)


@dataclasses.dataclass(frozen=True)
class SincFrameSpec:
    """Parameters of a truncated sinc evaluation frame.

    The signal space is spanned by sinc(. - l) for integer shifts
    l = -2m .. 2m, so d = 4m + 1.  Samples sit at n*step/oversample for
    |n| <= window*oversample, so n_rows = 2*window*oversample + 1.  window
    is measured in base steps; the default covers every shift with one unit
    to spare.
    """

    m: int
    step: float = 0.25
    window: int | None = None
    oversample: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.oversample < 1 or int(self.oversample) != self.oversample:
            raise ValueError("oversample must be a positive integer")
        if self.window is None:
            object.__setattr__(self, "window", 4 * (2 * self.m + 1))
        elif self.window < 1:
            raise ValueError("window must be >= 1")

    @property
    def d(self):
        return 4 * self.m + 1

    @property
    def n(self):
        return 2 * self.window * self.oversample + 1

    @property
    def shifts(self):
        return np.arange(-2 * self.m, 2 * self.m + 1)

    @property
    def sample_points(self):
        k = self.window * self.oversample
        return np.arange(-k, k + 1) * (self.step / self.oversample)


def sinc_frame(spec):
    """Point evaluation frame for the truncated sinc model.

    Row for sample point t holds sinc(t - l) over the basis shifts l.  Row
    labels are the sample positions.  A window too short to reach the
    outermost shifts is allowed but flagged in frame.notes.
    """
    t = spec.sample_points
    shifts = spec.shifts
    rows = np.sinc(t[:, None] - shifts[None, :])
    notes = ()
    if spec.window * spec.step < 2 * spec.m:
        notes = (
            "sample window half-width %.6g does not reach the outermost "
            "basis shift %d" % (spec.window * spec.step, 2 * spec.m),
        )
    return Frame(rows=rows, field=REAL, labels=tuple(float(x) for x in t), notes=notes)


def sinc_gram(shifts):
    """Ambient inner products of sinc translates: entry (i, j) equals
    sinc(shift_i - shift_j).  Identity on integer shift sets."""
    s = np.asarray(shifts, dtype=float)
    return np.sinc(s[:, None] - s[None, :])


def restrict(frame, indices):
    """Sub-frame with the given rows, kept in the given order.

    An empty selection is allowed; downstream code treats the lower bound
    of an empty frame as zero.
    """
    idx = list(indices)
    for i in idx:
        if not (0 <= i < frame.n):
            raise IndexError(
                "row index %d outside 0..%d" % (i, frame.n - 1)
            )
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate row indices in restriction")
    rows = frame.rows[idx] if idx else np.zeros((0, frame.d), dtype=frame.rows.dtype)
    labels = tuple(frame.labels[i] for i in idx)
    return Frame(
        rows=rows,
        field=frame.field,
        labels=labels,
        signal_gram=frame.signal_gram,
        notes=frame.notes,
    )


def _encode_entry(z, field):
    if field == REAL:
        return float(z)
    return [float(np.real(z)), float(np.imag(z))]


def save_frame(frame, path):
    """Write a frame as JSON.  Keys come out in schema order; floats use
    shortest round-trip formatting so load(save(f)) is bit exact."""
    doc = {
        "field": frame.field,
        "d": frame.d,
        "n": frame.n,
        "labels": [
            float(l) if isinstance(l, (int, float, np.floating)) else l
            for l in frame.labels
        ],
        "rows": [
            [_encode_entry(z, frame.field) for z in row] for row in frame.rows
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _decode_entry(e, field, where):
    if field == REAL:
        if isinstance(e, (list, dict, str, bool)) or e is None:
            raise FrameFormatError(
                "%s: real frame entry must be a number, got %r" % (where, e)
            )
        return float(e)
    if isinstance(e, (int, float)) and not isinstance(e, bool):
        return complex(float(e), 0.0)
    if (
        not isinstance(e, list)
        or len(e) != 2
        or any(isinstance(c, (list, dict, str, bool)) or c is None for c in e)
    ):
        raise FrameFormatError(
            "%s: complex frame entry must be [re, im], got %r" % (where, e)
        )
    return complex(float(e[0]), float(e[1]))


def load_frame(path):
    """Read a frame written by save_frame.

    Validates the declared field against the entry types: a file tagged
    real must not contain [re, im] pairs.  Malformed files raise
    FrameFormatError naming the offending location.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise FrameFormatError(
                "%s is not valid JSON: %s" % (path, err)
            ) from err
    if not isinstance(doc, dict):
        raise FrameFormatError("%s: top level must be an object" % path)
    for key in ("field", "d", "n", "labels", "rows"):
        if key not in doc:
            raise FrameFormatError("%s: missing key %r" % (path, key))
    field = doc["field"]
    if field not in FIELDS:
        raise FrameFormatError("%s: unknown field %r" % (path, field))
    d, n = doc["d"], doc["n"]
    if not isinstance(d, int) or not isinstance(n, int) or d < 1 or n < 0:
        raise FrameFormatError("%s: bad dimensions d=%r n=%r" % (path, d, n))
    labels = doc["labels"]
    rows = doc["rows"]
    if not isinstance(labels, list) or len(labels) != n:
        raise FrameFormatError("%s: labels must be a list of length n" % path)
    if not isinstance(rows, list) or len(rows) != n:
        raise FrameFormatError("%s: rows must be a list of length n" % path)
    out = np.zeros((n, d), dtype=float if field == REAL else complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise FrameFormatError(
                "%s: row %d must be a list of length %d" % (path, i, d)
            )
        for j, e in enumerate(row):
            out[i, j] = _decode_entry(e, field, "%s: row %d col %d" % (path, i, j))
    return Frame(rows=out, field=field, labels=tuple(labels))
