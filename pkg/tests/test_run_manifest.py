"""Tests for run manifests."""

import json
import os

import pytest

from cbyte import __version__
from cbyte.config import TrackerConfig
from cbyte.mot_format import MotRecord, read_mot_file
from cbyte.run_manifest import RunManifest, build_manifest, manifest_path, summarize, write_run_outputs
from cbyte.tracker import StageTimings


def test_summarize():
    """Test median and mean of stage samples."""
    summary = summarize([1.0, 3.0, 8.0])
    assert summary.median_ms == 3.0
    assert summary.mean_ms == pytest.approx(4.0)
    assert summarize([]).median_ms == 0.0


def test_manifest_path():
    assert manifest_path("out/results.txt").name == "results.txt.manifest.json"


def test_build_and_round_trip(tmp_path):
    """Test the manifest snapshots the config and summarizes each stage."""
    timings = [StageTimings(predict=1.0, cmc=2.0, associate=0.5, bookkeeping=0.5) for _ in range(4)]
    config = TrackerConfig(enable_cmc=False, seed=4)
    manifest = build_manifest("MOT17-02", config, {"frames": tmp_path / "img1", "detections": "det.txt"}, timings)

    assert manifest.version == __version__
    assert manifest.frame_count == 4
    assert manifest.config["enable_cmc"] is False
    assert manifest.config["cmc.num_keypoints"] == 210
    assert manifest.stages["cmc"].median_ms == 2.0
    assert manifest.total.median_ms == 4.0
    assert manifest.inputs["detections"] == "det.txt"

    results = write_run_outputs(tmp_path / "results.txt", [MotRecord(1, 1, 0, 0, 5, 5)], manifest)
    path = manifest_path(results)
    assert json.loads(path.read_text())["sequence"] == "MOT17-02"
    assert RunManifest.model_validate_json(path.read_text()) == manifest
    assert read_mot_file(results)[1] == [MotRecord(1, 1, 0, 0, 5, 5)]


def test_failed_manifest_leaves_no_results(tmp_path, monkeypatch):
    """Test a failure while placing the manifest also withdraws the results file."""
    manifest = build_manifest("seq", TrackerConfig(), {}, [StageTimings()])
    real_replace = os.replace

    def replace(src, dst):
        if str(dst).endswith(".manifest.json"):
            raise OSError("disk full")
        real_replace(src, dst)

    monkeypatch.setattr("cbyte.fileio.os.replace", replace)
    with pytest.raises(OSError, match="disk full"):
        write_run_outputs(tmp_path / "results.txt", [MotRecord(1, 1, 0, 0, 5, 5)], manifest)
    assert list(tmp_path.iterdir()) == []
