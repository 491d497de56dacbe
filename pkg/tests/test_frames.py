"""Frame constructions and serialization.

The sinc gram oracle comes first: ambient inner products of sinc
translates computed by direct numerical integration, against which the
closed form gram is checked at its stated tolerance.
"""

import numpy as np
import pytest
from scipy.integrate import trapezoid

from phaselab import frames
from phaselab.frames import (
    Frame,
    FrameFormatError,
    SincFrameSpec,
    load_frame,
    random_frame,
    restrict,
    save_frame,
    sinc_frame,
    sinc_gram,
)


def sinc_inner_numeric(s, t, half_width=2000.0, step=0.01):
    """Oracle: trapezoid quadrature of sinc(x - s) sinc(x - t) over a long
    symmetric window.  The tail beyond half_width contributes O(1/half_width),
    so agreement is asserted at 5e-4 absolute."""
    x = np.arange(-half_width, half_width + step, step)
    return trapezoid(np.sinc(x - s) * np.sinc(x - t), x)


class TestSincGramOracle:
    def test_integration_matches_closed_form(self):
        for s, t in [(0.0, 0.0), (0.0, 0.25), (0.5, -0.75), (1.0, 0.0)]:
            want = sinc_inner_numeric(s, t)
            got = sinc_gram([s, t])[0, 1] if s != t else sinc_gram([s])[0, 0]
            assert got == pytest.approx(want, abs=5e-4)

    def test_integer_shifts_give_identity(self):
        g = sinc_gram([-2, -1, 0, 1, 2])
        np.testing.assert_allclose(g, np.eye(5), atol=1e-15)

    def test_gram_is_symmetric_psd(self):
        g = sinc_gram([0.0, 0.3, 1.7, -0.4])
        np.testing.assert_allclose(g, g.T, atol=0)
        assert np.linalg.eigvalsh(g).min() > 0


class TestSincFrame:
    def test_dimensions_default_window(self):
        spec = SincFrameSpec(m=1)
        assert spec.d == 5
        assert spec.window == 12
        assert spec.n == 25
        f = sinc_frame(spec)
        assert f.rows.shape == (25, 5)
        assert f.field == "real"

    def test_dimensions_explicit_window(self):
        spec = SincFrameSpec(m=1, window=8)
        assert (spec.d, spec.n) == (5, 17)

    def test_labels_are_sample_positions(self):
        spec = SincFrameSpec(m=1, window=8)
        f = sinc_frame(spec)
        np.testing.assert_allclose(f.labels, np.arange(-8, 9) * 0.25)

    def test_rows_evaluate_shifted_sincs(self):
        spec = SincFrameSpec(m=1, window=8)
        f = sinc_frame(spec)
        t = f.labels[3]
        np.testing.assert_allclose(
            f.rows[3], np.sinc(t - np.arange(-2, 3)), atol=0
        )

    def test_oversample_refines_sampling(self):
        base = SincFrameSpec(m=1, window=8)
        fine = SincFrameSpec(m=1, window=8, oversample=2)
        assert fine.n == 2 * base.window * 2 + 1
        # coarse sample points survive as a subset of the fine ones
        assert set(np.round(base.sample_points, 9)) <= set(
            np.round(fine.sample_points, 9)
        )

    def test_short_window_is_flagged(self):
        f = sinc_frame(SincFrameSpec(m=1, window=4))
        assert f.notes and "does not reach" in f.notes[0]
        assert not sinc_frame(SincFrameSpec(m=1, window=8)).notes

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SincFrameSpec(m=0)
        with pytest.raises(ValueError):
            SincFrameSpec(m=1, step=0.0)
        with pytest.raises(ValueError):
            SincFrameSpec(m=1, oversample=0)
        with pytest.raises(ValueError):
            SincFrameSpec(m=1, window=0)


class TestRandomFrame:
    def test_shape_field_and_determinism(self):
        f = random_frame(3, 7, seed=5)
        g = random_frame(3, 7, seed=5)
        assert f.rows.shape == (7, 3)
        np.testing.assert_array_equal(f.rows, g.rows)
        assert not np.array_equal(f.rows, random_frame(3, 7, seed=6).rows)

    def test_complex_field(self):
        f = random_frame(2, 5, field="complex", seed=0)
        assert np.iscomplexobj(f.rows)

    def test_thin_frames_are_gated(self):
        with pytest.raises(ValueError):
            random_frame(4, 3)
        f = random_frame(4, 3, allow_thin=True)
        assert f.rows.shape == (3, 4)


class TestSerialization:
    def test_round_trip_real(self, tmp_path):
        f = Frame(
            rows=np.array([[1.0, 0.5], [-0.25, 2.0]]),
            field="real",
            labels=(0.0, 1.5),
            notes=("hand built",),
        )
        p = tmp_path / "f.json"
        save_frame(f, p)
        g = load_frame(p)
        np.testing.assert_array_equal(f.rows, g.rows)
        assert g.field == "real"
        assert g.labels == (0.0, 1.5)
        # notes are construction provenance, not data: the file format
        # carries field, dimensions, labels and rows only
        assert g.notes == ()

    def test_round_trip_complex(self, tmp_path):
        f = random_frame(2, 4, field="complex", seed=1)
        p = tmp_path / "c.json"
        save_frame(f, p)
        g = load_frame(p)
        np.testing.assert_array_equal(f.rows, g.rows)
        assert g.field == "complex"

    def test_fixture_loads(self):
        from conftest import FIXTURES

        f = load_frame(FIXTURES / "sinc_m1.json")
        assert (f.d, len(f.rows)) == (5, 17)

    @pytest.mark.parametrize(
        "doc",
        [
            "not json at all {",
            "[1, 2]",
            '{"field": "real"}',
            '{"field": "quaternion", "d": 1, "n": 1, "labels": [0], "rows": [[1.0]]}',
            '{"field": "real", "d": 2, "n": 2, "labels": [0, 1],'
            ' "rows": [[1.0], [1.0, 2.0]]}',
            '{"field": "real", "d": 1, "n": 1, "labels": [0], "rows": [["x"]]}',
            '{"field": "real", "d": 1, "n": 2, "labels": [0], "rows": [[1.0], [2.0]]}',
            '{"field": "real", "d": 1, "n": 1, "labels": [0], "rows": [[[1.0, 0.0]]]}',
        ],
    )
    def test_format_errors(self, tmp_path, doc):
        bad = tmp_path / "bad.json"
        bad.write_text(doc)
        with pytest.raises(FrameFormatError):
            load_frame(bad)

    def test_complex_file_accepts_bare_reals(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(
            '{"field": "complex", "d": 1, "n": 1, "labels": [0],'
            ' "rows": [[2.5]]}'
        )
        f = load_frame(p)
        assert f.rows[0, 0] == 2.5 + 0j


class TestRestrict:
    def test_subset_rows_and_labels(self):
        f = sinc_frame(SincFrameSpec(m=1, window=8))
        sub = restrict(f, [0, 2, 4])
        assert sub.rows.shape == (3, 5)
        np.testing.assert_array_equal(sub.rows, f.rows[[0, 2, 4]])
        assert sub.labels == tuple(f.labels[i] for i in (0, 2, 4))

    def test_empty_selection_allowed(self):
        f = random_frame(2, 3)
        sub = restrict(f, [])
        assert sub.rows.shape == (0, 2)
