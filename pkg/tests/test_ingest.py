"""Homography, rectification, binarization, and input loading."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from callisense.errors import BadCsvRow, DegenerateQuad, MissingFile, NonMonotoneTime
from callisense.ingest import (
    binarize,
    compute_homography,
    correct_perspective,
    dst_rect_corners,
    load_inputs,
    load_manifest,
    load_sensor_csv,
    load_tip_csv,
    read_pgm,
    write_pgm,
)
from callisense.kernels import stamp_discs


def homography_oracle(src, dst):
    """Independent solve: homogeneous 9-unknown DLT via SVD null space."""
    rows = []
    for (x, y), (u, v) in zip(src, dst):
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y, -u])
        rows.append([0, 0, 0, x, y, 1, -v * x, -v * y, -v])
    _, _, vt = np.linalg.svd(np.asarray(rows, dtype=np.float64))
    h = vt[-1].reshape(3, 3)
    return h / h[2, 2]


def apply_h(h, p):
    q = h @ [p[0], p[1], 1.0]
    return q[:2] / q[2]


SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_identity_homography():
    h = compute_homography(SQUARE, SQUARE)
    assert np.allclose(h, np.eye(3), atol=1e-12)


def test_translation_homography():
    dst = [(x + 10, y + 5) for x, y in SQUARE]
    h = compute_homography(SQUARE, dst)
    expected = np.eye(3)
    expected[0, 2] = 10
    expected[1, 2] = 5
    assert np.allclose(h, expected, atol=1e-9)


def test_quad_to_rect_against_svd_oracle():
    src = [(0, 0), (100, 0), (120, 80), (-10, 90)]
    dst = [(0, 0), (100, 0), (100, 100), (0, 100)]
    h = compute_homography(src, dst)
    oracle = homography_oracle(src, dst)
    assert np.allclose(h, oracle, atol=1e-9)
    for s, d in zip(src, dst):
        assert np.linalg.norm(apply_h(h, s) - np.asarray(d, dtype=float)) < 1e-9


def test_degenerate_quads_rejected():
    with pytest.raises(DegenerateQuad):
        compute_homography([(0, 0), (0, 0), (1, 1), (0, 1)], SQUARE)
    with pytest.raises(DegenerateQuad):
        compute_homography([(0, 0), (1, 1), (2, 2), (0, 1)], SQUARE)


@st.composite
def nondegenerate_quad(draw):
    # +-15 px jitter on a 100 px square keeps every corner triple's cross
    # product >= 1000, so the quad stays convex and well-conditioned
    jitter = st.floats(-15.0, 15.0)
    base = [(0.0, 0.0), (100.0, 0.0), (100.0, 100.0), (0.0, 100.0)]
    return [(x + draw(jitter), y + draw(jitter)) for x, y in base]


@given(src=nondegenerate_quad(), dst=nondegenerate_quad())
@settings(max_examples=60, deadline=None)
def test_corner_mapping_residual_property(src, dst):
    h = compute_homography(src, dst)
    for s, d in zip(src, dst):
        assert np.linalg.norm(apply_h(h, s) - np.asarray(d)) < 1e-9


def test_correct_perspective_identity_bit_exact():
    rng = np.random.default_rng(0)
    frame = rng.integers(0, 256, size=(45, 60), dtype=np.uint8)
    out = correct_perspective(frame, np.eye(3), (60, 45))
    assert np.array_equal(out, frame)


def test_correct_perspective_translation():
    rng = np.random.default_rng(1)
    frame = rng.integers(0, 256, size=(40, 40), dtype=np.uint8)
    h = np.eye(3)
    h[0, 2], h[1, 2] = 7.0, 3.0
    out = correct_perspective(frame, h, (40, 40))
    # destination (x, y) samples source (x-7, y-3)
    assert np.array_equal(out[3:, 7:], frame[: 40 - 3, : 40 - 7])
    assert np.all(out[:3, :] == 255)
    assert np.all(out[:, :7] == 255)


def _disc_centroid(img):
    ys, xs = np.nonzero(img < 128)
    return np.array([xs.mean() + 0.5, ys.mean() + 0.5])


def test_warp_then_correct_recovers_disc_centroid():
    # oracle: render a synthetic disc, push it through a known homography,
    # correct it back, and re-scan the centroid
    canvas = np.full((120, 120), 255, dtype=np.uint8)
    stamp_discs(canvas, np.array([52.0]), np.array([67.0]), 9.0)
    true_c = _disc_centroid(canvas)

    src_quad = [(8, 6), (112, 14), (118, 116), (2, 108)]
    h = compute_homography(src_quad, dst_rect_corners(120, 120))
    # the "camera" view is the corrected canvas pushed through h^-1
    camera = correct_perspective(canvas, np.linalg.inv(h), (120, 120))
    recovered = correct_perspective(camera, h, (120, 120))
    assert np.linalg.norm(_disc_centroid(recovered) - true_c) < 0.5


def test_binarize_rules():
    white = np.full((4, 4), 255, dtype=np.uint8)
    black = np.zeros((4, 4), dtype=np.uint8)
    assert binarize(white, 100).bits.sum() == 0
    assert binarize(black, 100).bits.all()
    checker = np.zeros((4, 4), dtype=np.uint8)
    checker[::2, 1::2] = 255
    checker[1::2, ::2] = 255
    mask = binarize(checker, 100)
    assert np.array_equal(mask.bits, checker == 0)


def test_pgm_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    img = rng.integers(0, 256, size=(13, 17), dtype=np.uint8)
    p = tmp_path / "x.pgm"
    write_pgm(p, img)
    assert np.array_equal(read_pgm(p), img)


def test_pgm_comment_header(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# a comment\n2 2\n255\n\x00\x01\x02\x03")
    assert np.array_equal(read_pgm(p), np.array([[0, 1], [2, 3]], dtype=np.uint8))


def _write_min_inputs(tmp_path, sensor_rows, tip_rows, sensor_offset=0, tip_offset=0):
    frame = np.full((10, 10), 255, dtype=np.uint8)
    write_pgm(tmp_path / "f0.pgm", frame)
    write_pgm(tmp_path / "f1.pgm", frame)
    (tmp_path / "sensor.csv").write_text(
        "t_ms,yaw_deg,pitch_deg,roll_deg,pressure_raw\n" + "".join(r + "\n" for r in sensor_rows)
    )
    (tmp_path / "tip.csv").write_text(
        "t_ms,gap_px\n" + "".join(r + "\n" for r in tip_rows)
    )
    (tmp_path / "manifest.json").write_text(
        '{"frames":[{"file":"f0.pgm","t_ms":0},{"file":"f1.pgm","t_ms":100}],'
        '"paper_quad":[[0,0],[10,0],[10,10],[0,10]],"dst_size":{"w":10,"h":10},'
        f'"sensor_log":"sensor.csv","tip_trace":"tip.csv",'
        f'"sensor_clock_offset_ms":{sensor_offset},"tip_clock_offset_ms":{tip_offset}}}'
    )
    return load_manifest(tmp_path / "manifest.json")


def test_load_inputs_passthrough_offsets(tmp_path):
    manifest = _write_min_inputs(
        tmp_path, ["0,1.0,2.0,3.0,100", "50,1.0,2.0,3.0,110"], ["0,30.0", "50,2.0"]
    )
    _, sensor, tip, report = load_inputs(manifest)
    assert list(sensor.t_ms) == [0, 50]
    assert list(tip.t_ms) == [0, 50]
    assert report.dropped_sensor_samples == 0


def test_load_inputs_negative_offset_shifts(tmp_path):
    manifest = _write_min_inputs(
        tmp_path, ["200,1.0,2.0,3.0,100", "250,1.0,2.0,3.0,110"], ["200,30.0"],
        sensor_offset=-120, tip_offset=-120,
    )
    _, sensor, tip, _ = load_inputs(manifest)
    assert list(sensor.t_ms) == [80, 130]
    assert list(tip.t_ms) == [80]


def test_load_inputs_drops_outside_window_with_count(tmp_path):
    rows = ["0,0.0,0.0,0.0,1", "5000,0.0,0.0,0.0,1"]  # second is 4.9 s past last frame
    manifest = _write_min_inputs(tmp_path, rows, ["0,30.0"])
    _, sensor, _, report = load_inputs(manifest)
    assert len(sensor) == 1
    assert report.dropped_sensor_samples == 1


def test_bad_pressure_names_line(tmp_path):
    with pytest.raises(BadCsvRow) as err:
        _write_min_inputs(tmp_path, ["0,1.0,2.0,3.0,2000"], ["0,30.0"])
        load_sensor_csv(tmp_path / "sensor.csv")
    assert err.value.line_no == 2
    assert "1023" in str(err.value)


def test_non_monotone_sensor_time(tmp_path):
    (tmp_path / "s.csv").write_text(
        "t_ms,yaw_deg,pitch_deg,roll_deg,pressure_raw\n10,0,0,0,1\n10,0,0,0,1\n"
    )
    with pytest.raises(NonMonotoneTime):
        load_sensor_csv(tmp_path / "s.csv")


def test_missing_files(tmp_path):
    with pytest.raises(MissingFile):
        load_sensor_csv(tmp_path / "nope.csv")
    with pytest.raises(MissingFile):
        load_tip_csv(tmp_path / "nope.csv")
    with pytest.raises(MissingFile):
        read_pgm(tmp_path / "nope.pgm")


def test_tip_csv_rejects_negative_gap(tmp_path):
    (tmp_path / "t.csv").write_text("t_ms,gap_px\n0,-1.0\n")
    with pytest.raises(BadCsvRow):
        load_tip_csv(tmp_path / "t.csv")
