"""Shared fixtures: the reference 3-stroke script and processed synth sessions."""

import json

import pytest

from callisense.config import PipelineConfig
from callisense.model import parse_session
from callisense.pipeline import process, process_to_files
from callisense.synth import StrokeScript, generate_session

# Reference script: 3 strokes, radius 6 px, ease-in-out so speed varies,
# moderate yaw ramps so rotation is observable but sensor skew stays small.
SCRIPT_DOC = [
    {
        "path": [[50, 80], [260, 80]],
        "duration_ms": 1400,
        "speed_profile": "ease-in-out",
        "pressure_profile": [[0.0, 650], [0.4, 420], [1.0, 560]],
        "yaw_profile": [[0.0, 5.0], [1.0, 30.0]],
        "pitch_profile": [[0.0, 12.0], [0.5, 20.0], [1.0, 14.0]],
        "roll_profile": [[0.0, 0.0], [1.0, 6.0]],
        "brush_radius_px": 6.0,
        "inter_stroke_pause_ms": 300,
    },
    {
        "path": [[80, 50], [80, 270]],
        "duration_ms": 1600,
        "speed_profile": "ease-in-out",
        "pressure_profile": [[0.0, 700], [1.0, 380]],
        "yaw_profile": [[0.0, -10.0], [1.0, 15.0]],
        "pitch_profile": [[0.0, 18.0], [1.0, 10.0]],
        "roll_profile": [[0.0, 2.0]],
        "brush_radius_px": 6.0,
        "inter_stroke_pause_ms": 350,
    },
    {
        "path": [[60, 120], [160, 200], [265, 240]],
        "duration_ms": 1700,
        "speed_profile": "ease-in-out",
        "pressure_profile": [[0.0, 500], [0.5, 760], [1.0, 430]],
        "yaw_profile": [[0.0, 20.0], [0.6, -8.0], [1.0, 2.0]],
        "pitch_profile": [[0.0, 8.0], [1.0, 22.0]],
        "roll_profile": [[0.0, -4.0], [1.0, 4.0]],
        "brush_radius_px": 6.0,
        "inter_stroke_pause_ms": 300,
    },
]

# Student variant: same geometry, pressure bump peaking at arc 0.4 on stroke 0
# and a slower stroke 1 — the scripted differences the comparison must find.
STUDENT_DOC = json.loads(json.dumps(SCRIPT_DOC))
STUDENT_DOC[0]["pressure_profile"] = [[0.0, 500], [0.3, 500], [0.4, 820], [0.5, 500], [1.0, 500]]
SCRIPT_DOC[0]["pressure_profile"] = [[0.0, 500]]
STUDENT_DOC[1]["duration_ms"] = 2000


def make_script(doc) -> list[StrokeScript]:
    return [
        StrokeScript(
            path=entry["path"],
            duration_ms=entry["duration_ms"],
            speed_profile=entry["speed_profile"],
            pressure_profile=tuple(map(tuple, entry["pressure_profile"])),
            yaw_profile=tuple(map(tuple, entry["yaw_profile"])),
            pitch_profile=tuple(map(tuple, entry["pitch_profile"])),
            roll_profile=tuple(map(tuple, entry["roll_profile"])),
            brush_radius_px=entry["brush_radius_px"],
            inter_stroke_pause_ms=entry["inter_stroke_pause_ms"],
        )
        for entry in doc
    ]


@pytest.fixture(scope="session")
def teacher_run(tmp_path_factory):
    """(synth dir, manifest, truth, processed session) for the reference script."""
    out = tmp_path_factory.mktemp("teacher_synth")
    manifest, truth = generate_session(make_script(SCRIPT_DOC), out, fps=30, sensor_hz=100, seed=7)
    session, glyph, stats = process(
        manifest, PipelineConfig(), session_id="teacher", role="teacher", character_label="zi"
    )
    return out, manifest, truth, session, glyph, stats


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """A served data directory: teacher + student processed session files."""
    synth_dir = tmp_path_factory.mktemp("pair_synth")
    data = tmp_path_factory.mktemp("data")
    cfg = PipelineConfig()
    for name, doc, seed, role in (
        ("teacher", SCRIPT_DOC, 7, "teacher"),
        ("student", STUDENT_DOC, 8, "student"),
    ):
        out = synth_dir / name
        generate_session(make_script(doc), out, fps=30, sensor_hz=100, seed=seed)
        process_to_files(
            out / "manifest.json",
            data / f"{name}.json",
            cfg,
            role=role,
            character_label="zi",
            keep_frames=(name == "teacher"),
        )
    return data


@pytest.fixture(scope="session")
def teacher_student_sessions(data_dir):
    teacher = parse_session((data_dir / "teacher.json").read_text())
    student = parse_session((data_dir / "student.json").read_text())
    return teacher, student
