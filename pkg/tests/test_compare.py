"""Comparison analytics: boxes, resampling, diffs, progress rows, reports."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from callisense.compare import (
    build_report,
    extremity_box,
    overlay_transform,
    pair_strokes,
    pressure_diff_profile,
    progress_row,
    progress_rows,
    resample_curve,
    serialize_report,
)
from callisense.errors import DegenerateStroke, EmptyGlyph, LengthMismatch
from callisense.model import (
    ContactInterval,
    Curve,
    EnrichedPoint,
    Session,
    Stroke,
    Vec2,
)


def glyph_from(points, shape=(100, 100)):
    bits = np.zeros(shape, dtype=bool)
    for x, y in points:
        bits[y, x] = True
    return bits


def test_single_pixel_box_degenerate():
    box = extremity_box(glyph_from([(10, 10)]))
    for v in (box.top, box.bottom, box.left, box.right):
        assert (v.x, v.y) == (10.0, 10.0)
    assert box.rect == (10.0, 10.0, 10.0, 10.0)


def test_plus_sign_extremities():
    # oracle: full scan for min/max over the stamped arm tips
    arms = [(50, 10), (50, 90), (10, 50), (90, 50)]
    bits = glyph_from(arms + [(50, y) for y in range(10, 91)] + [(x, 50) for x in range(10, 91)])
    box = extremity_box(bits)
    assert (box.top.x, box.top.y) == (50.0, 10.0)
    assert (box.bottom.x, box.bottom.y) == (50.0, 90.0)
    assert (box.left.x, box.left.y) == (10.0, 50.0)
    assert (box.right.x, box.right.y) == (90.0, 50.0)


def test_tie_breaks_smallest_x():
    box = extremity_box(glyph_from([(30, 5), (20, 5), (25, 40)]))
    assert (box.top.x, box.top.y) == (20.0, 5.0)


def test_empty_glyph():
    with pytest.raises(EmptyGlyph):
        extremity_box(np.zeros((5, 5), dtype=bool))


@given(seed=st.integers(0, 2**31 - 1))
@settings(max_examples=100, deadline=None)
def test_box_matches_brute_force_scan(seed):
    rng = np.random.default_rng(seed)
    bits = rng.random((40, 60)) < 0.05
    if not bits.any():
        bits[rng.integers(40), rng.integers(60)] = True
    box = extremity_box(bits)
    pts = [(x, y) for y, x in np.argwhere(bits)]
    assert box.top.y == min(y for _, y in pts)
    assert box.top.x == min(x for x, y in pts if y == box.top.y)
    assert box.bottom.y == max(y for _, y in pts)
    assert box.bottom.x == min(x for x, y in pts if y == box.bottom.y)
    assert box.left.x == min(x for x, _ in pts)
    assert box.left.y == min(y for x, y in pts if x == box.left.x)
    assert box.right.x == max(x for x, _ in pts)
    assert box.right.y == min(y for x, y in pts if x == box.right.x)


def test_overlay_identity_and_inverse():
    t = overlay_transform(0, 0)
    assert (t.dx, t.dy) == (0.0, 0.0)
    composed = overlay_transform(10, -5).compose(overlay_transform(-10, 5))
    assert (composed.dx, composed.dy) == (0.0, 0.0)


def test_overlay_commutes_with_extremity_box():
    bits = glyph_from([(10, 20), (30, 5), (7, 40)])
    box = extremity_box(bits)
    t = overlay_transform(4, 9)
    moved_bits = glyph_from([(14, 29), (34, 14), (11, 49)])
    assert t.apply_box(box) == extremity_box(moved_bits)


def _session(n_strokes, sid="s", role="student"):
    strokes = []
    for i in range(n_strokes):
        t0 = 1000 * i
        points = tuple(
            EnrichedPoint(
                pos=Vec2(10.0 + 5 * j, 20.0), t_ms=t0 + 100 + 33 * j, speed_px_s=50.0,
                pressure_raw=400 + 10 * j, pressure_tier=2, speed_tier=2,
                tilt_proj=Vec2(0.1, 0.0), rotation_deg=float(j), arc_pos=j / 9,
            )
            for j in range(10)
        )
        strokes.append(Stroke(index=i, contact=ContactInterval(t0 + 90, t0 + 450, i),
                              skeleton=points, pixel_count=100))
    return Session(schema_version="1", id=sid, role=role, character_label="x",
                   canvas_w=300, canvas_h=300, frame_count=30,
                   config_fingerprint="f", glyph_mask=f"{sid}.glyph.pgm",
                   strokes=tuple(strokes))


def test_pair_counts_and_mismatch():
    t5, s5 = _session(5, "t", "teacher"), _session(5, "s")
    pairs, mismatch = pair_strokes(t5, s5)
    assert pairs == [(i, i) for i in range(5)]
    assert mismatch == []
    t5b, s4 = _session(5, "t", "teacher"), _session(4, "s")
    pairs, mismatch = pair_strokes(t5b, s4)
    assert len(pairs) == 4
    assert mismatch == [{"role": "teacher", "index": 4}]
    pairs, _ = pair_strokes(_session(1, "t", "teacher"), _session(1, "s"))
    assert pairs == [(0, 0)]


def test_resample_exact_on_linear_values():
    arc = np.linspace(0, 1, 7)
    values = 3.0 * arc + 2.0
    curve = resample_curve(arc, values, 13)
    assert np.asarray(curve.values) == pytest.approx(3.0 * np.linspace(0, 1, 13) + 2.0)


def test_resample_n2_endpoints():
    curve = resample_curve([0.0, 0.3, 1.0], [5.0, 9.0, 7.0], 2)
    assert curve.values == (5.0, 7.0)


def test_resample_step_plateau_rule():
    # oracle: manual piecewise-linear evaluation with a plateau at 0.5;
    # the last value at the repeated position wins
    arc = [0.0, 0.5, 0.5, 1.0]
    values = [0.0, 0.0, 1.0, 1.0]
    curve = resample_curve(arc, values, 5)
    assert curve.values == (0.0, 0.0, 1.0, 1.0, 1.0)


def test_resample_degenerate_flagged_mean():
    curve = resample_curve([0.0, 0.0, 0.0], [2.0, 4.0, 6.0], 4)
    assert curve.degenerate
    assert curve.values == (4.0, 4.0, 4.0, 4.0)


def test_resample_length_mismatch():
    with pytest.raises(LengthMismatch):
        resample_curve([0.0, 1.0], [1.0], 5)


@given(
    coeffs=st.tuples(st.floats(-10, 10), st.floats(-10, 10)),
    n_in=st.integers(2, 20),
    n_out=st.integers(2, 30),
)
@settings(max_examples=80, deadline=None)
def test_resample_property_affine_exact(coeffs, n_in, n_out):
    a, b = coeffs
    arc = np.linspace(0, 1, n_in)
    curve = resample_curve(arc, a * arc + b, n_out)
    expected = a * np.linspace(0, 1, n_out) + b
    assert np.asarray(curve.values) == pytest.approx(expected, abs=1e-6)


def test_diff_identical_curves():
    c = Curve(values=(1.0, 2.0, 3.0))
    d = pressure_diff_profile(c, c)
    assert d.diff.values == (0.0, 0.0, 0.0)
    assert d.max_abs_diff == 0.0
    assert d.argmax_pos == 0.0


def test_diff_constant_offset_tie_rule():
    t = Curve(values=(5.0, 5.0, 5.0))
    s = Curve(values=(15.0, 15.0, 15.0))
    d = pressure_diff_profile(t, s)
    assert d.diff.values == (10.0, 10.0, 10.0)
    assert d.argmax_pos == 0.0  # ties resolve to the smallest position


def test_diff_localized_bump_argmax():
    # oracle: scan the constructed arrays directly
    n = 101
    qs = np.linspace(0, 1, n)
    teacher = np.full(n, 100.0)
    student = teacher + 40.0 * np.exp(-((qs - 0.4) ** 2) / 0.002)
    d = pressure_diff_profile(Curve(values=tuple(teacher)), Curve(values=tuple(student)))
    k = int(np.argmax(np.abs(student - teacher)))
    assert d.argmax_pos == pytest.approx(k / (n - 1))
    assert abs(d.argmax_pos - 0.4) <= 1.0 / (n - 1)


def test_diff_antisymmetric():
    t = Curve(values=(1.0, 5.0, 2.0))
    s = Curve(values=(2.0, 1.0, 8.0))
    ab = pressure_diff_profile(t, s)
    ba = pressure_diff_profile(s, t)
    assert np.asarray(ab.diff.values) == pytest.approx(-np.asarray(ba.diff.values))


def _stroke_with(times, arcs):
    points = tuple(
        EnrichedPoint(pos=Vec2(float(i), 0.0), t_ms=t, speed_px_s=1.0, pressure_raw=1,
                      pressure_tier=0, speed_tier=0, tilt_proj=Vec2(0, 0),
                      rotation_deg=0.0, arc_pos=a)
        for i, (t, a) in enumerate(zip(times, arcs))
    )
    return Stroke(index=0, contact=ContactInterval(times[0] - 1, times[-1] + 1, 0),
                  skeleton=points, pixel_count=1)


def test_progress_grid_arithmetic():
    row = progress_row(_stroke_with([0, 100, 300], [0.0, 0.4, 1.0]), grid_ms=100)
    assert row.times == (0, 100, 200, 300)
    assert len(row.arc_positions) == 4
    assert row.arc_positions[0] == 0.0
    assert row.arc_positions[-1] == 1.0


def test_progress_constant_speed_linear():
    times = [0, 100, 200, 300, 400]
    arcs = [0.0, 0.25, 0.5, 0.75, 1.0]
    row = progress_row(_stroke_with(times, arcs), grid_ms=50)
    assert np.asarray(row.arc_positions) == pytest.approx(np.linspace(0, 1, 9))


def test_progress_duration_ratio():
    # oracle: duration / grid arithmetic — 3x duration gives ~3x samples
    short = progress_row(_stroke_with([0, 300], [0.0, 1.0]), grid_ms=50)
    long = progress_row(_stroke_with([0, 900], [0.0, 1.0]), grid_ms=50)
    assert len(long.arc_positions) - 1 == 3 * (len(short.arc_positions) - 1)


def test_progress_rows_nondecreasing_end_at_one():
    t = _stroke_with([0, 120, 370], [0.0, 0.7, 1.0])
    s = _stroke_with([0, 500, 1111], [0.0, 0.2, 1.0])
    rt, rs = progress_rows(t, s, grid_ms=50)
    for row in (rt, rs):
        arr = np.asarray(row.arc_positions)
        assert np.all(np.diff(arr) >= 0)
        assert arr[-1] == 1.0


def test_progress_degenerate_raises():
    with pytest.raises(DegenerateStroke):
        progress_row(_stroke_with([100], [0.0]), grid_ms=50)


def test_build_report_self_comparison():
    session = _session(3, "t", "teacher")
    bits = glyph_from([(10, 10), (40, 80), (90, 30)])
    report = build_report(session, session, bits, bits)
    assert len(report.pairs) == 3
    for pair in report.pairs:
        assert all(v == 0.0 for v in pair.pressure_diff.values)
        assert pair.max_abs_diff == 0.0
    assert report.teacher_box == report.student_box
    text = serialize_report(report)
    assert text == serialize_report(report)  # deterministic


def test_build_report_mismatched_counts():
    t = _session(5, "t", "teacher")
    s = _session(4, "s")
    bits = glyph_from([(1, 1), (2, 2)])
    report = build_report(t, s, bits, bits)
    assert len(report.pairs) == 4
    assert list(report.mismatch) == [{"role": "teacher", "index": 4}]
