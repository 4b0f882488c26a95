"""End-to-end tests for the cbyte command line."""

import pytest

from cbyte.cli import build_parser, enabled_debug_modules, main, sequence_name
from cbyte.run_manifest import RunManifest

SYNTH_CONFIG = """\
# small panning sequence
frames = 12
width = 160
height = 120
objects = 3
object_size_min = 16
object_size_max = 24
camera_pan_x = 2
seed = 1
"""


@pytest.fixture
def sequence(tmp_path, capsys):
    """A synthetic sequence written through the synth command."""
    config = tmp_path / "synth.cfg"
    config.write_text(SYNTH_CONFIG)
    assert main(["synth", "--config", str(config), "--out", str(tmp_path / "seq")]) == 0
    capsys.readouterr()
    return tmp_path / "seq"


def track(seq, out, *extra):
    return main(["track", "--frames", str(seq / "frames"), "--dets", str(seq / "det.txt"), "--out", str(out), *extra])


def load_manifest(path):
    return RunManifest.model_validate_json(path.read_text())


class TestParser:
    """Test argument parsing."""

    def test_debug_flags(self):
        """Test registered modules contribute debug flags."""
        args = build_parser().parse_args(["--debug-cmc", "--debug-tracker", "eval", "--gt", "a", "--results", "b"])
        assert sorted(enabled_debug_modules(args)) == ["cmc", "tracker"]

    def test_debug_flags_grouped_by_category(self):
        """Test help lists debug flags under one group per module category."""
        text = build_parser().format_help()
        for group in ("core debug logging", "io debug logging", "evaluation debug logging"):
            assert group in text
        assert text.index("evaluation debug logging") < text.rindex("--debug-metrics") < text.index("io debug logging")

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    @pytest.mark.parametrize(
        "path, name",
        [("data/MOT17-02/img1", "MOT17-02"), ("runs/seq/frames", "seq"), ("runs/clip", "clip")],
    )
    def test_sequence_name(self, tmp_path, path, name):
        assert sequence_name(tmp_path / path) == name


class TestCommands:
    """Test synth, track, eval and render end to end."""

    def test_synth_tree(self, sequence):
        assert sorted(p.name for p in sequence.iterdir()) == ["det.txt", "frames", "gt.txt", "planted_motion.txt"]

    def test_track_and_eval(self, sequence, tmp_path, capsys):
        """Test tracking writes results plus a manifest that eval can score."""
        results = tmp_path / "results.txt"
        assert track(sequence, results) == 0
        assert "Results written to" in capsys.readouterr().out

        manifest = load_manifest(tmp_path / "results.txt.manifest.json")
        assert manifest.sequence == "seq"
        assert manifest.frame_count == 12
        assert manifest.config["enable_cmc"] is True

        assert main(["eval", "--gt", str(sequence / "gt.txt"), "--results", str(results)]) == 0
        out = capsys.readouterr().out
        assert "MOTA" in out
        assert any(line.startswith("IDF1=") for line in out.splitlines())

    def test_eval_gt_against_itself(self, sequence, capsys):
        gt = str(sequence / "gt.txt")
        assert main(["eval", "--gt", gt, "--results", gt]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "MOTA=1.000" in lines
        assert "IDF1=1.000" in lines

    def test_eval_several_pairs(self, sequence, capsys):
        gt = str(sequence / "gt.txt")
        assert main(["eval", "--gt", gt, "--results", gt, "--gt", gt, "--results", gt]) == 0
        assert capsys.readouterr().out.count("MOTA=1.000") == 2

    def test_eval_empty_results(self, sequence, tmp_path, capsys):
        """Test an empty results file scores MOTA 0 with every gt box missed."""
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        assert main(["eval", "--gt", str(sequence / "gt.txt"), "--results", str(empty)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "MOTA=0.000" in lines
        assert "FP=0" in lines

    def test_eval_disjoint_frames_warns(self, tmp_path, capsys, monkeypatch):
        """Test non-overlapping gt and result frame ranges are reported on stderr."""
        monkeypatch.delenv("CBYTE_LOG", raising=False)
        gt = tmp_path / "gt.txt"
        gt.write_text("1,1,0,0,10,10,1,-1,-1,-1\n2,1,0,0,10,10,1,-1,-1,-1\n")
        results = tmp_path / "results.txt"
        results.write_text("5,1,0,0,10,10,1,-1,-1,-1\n")
        assert main(["eval", "--gt", str(gt), "--results", str(results)]) == 0
        captured = capsys.readouterr()
        assert "do not overlap" in captured.err
        assert "FN=2" in captured.out.splitlines()
        assert "FP=1" in captured.out.splitlines()

    def test_eval_pair_count_mismatch(self, sequence, capsys):
        gt = str(sequence / "gt.txt")
        assert main(["eval", "--gt", gt, "--gt", gt, "--results", gt]) == 1
        assert "Error:" in capsys.readouterr().err

    def test_track_deterministic(self, sequence, tmp_path):
        """Test repeated runs produce byte-identical results."""
        assert track(sequence, tmp_path / "a.txt") == 0
        assert track(sequence, tmp_path / "b.txt") == 0
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    def test_track_no_cmc(self, sequence, tmp_path):
        """Test --no-cmc is recorded and no time is spent on CMC."""
        assert track(sequence, tmp_path / "results.txt", "--no-cmc", "--seed", "5") == 0
        manifest = load_manifest(tmp_path / "results.txt.manifest.json")
        assert manifest.config["enable_cmc"] is False
        assert manifest.config["seed"] == 5
        assert manifest.stages["cmc"].median_ms == 0.0

    def test_track_with_config_file(self, sequence, tmp_path):
        config = tmp_path / "tracker.cfg"
        config.write_text("min_hits_to_confirm = 1\ncmc.num_keypoints = 100\n")
        assert track(sequence, tmp_path / "results.txt", "--config", str(config)) == 0
        manifest = load_manifest(tmp_path / "results.txt.manifest.json")
        assert manifest.config["cmc.num_keypoints"] == 100
        assert manifest.inputs["config"] == str(config)

    def test_unknown_config_key(self, sequence, tmp_path, capsys):
        config = tmp_path / "tracker.cfg"
        config.write_text("tau_middle = 0.4\n")
        assert track(sequence, tmp_path / "results.txt", "--config", str(config)) == 1
        assert "unknown config key: tau_middle" in capsys.readouterr().err
        assert not (tmp_path / "results.txt").exists()

    def test_missing_frame(self, sequence, tmp_path, capsys):
        """Test detections for a frame without an image fail before tracking."""
        dets = tmp_path / "det.txt"
        dets.write_text((sequence / "det.txt").read_text() + "99,-1,1,1,10,10,0.9,-1,-1,-1\n")
        code = main(
            ["track", "--frames", str(sequence / "frames"), "--dets", str(dets), "--out", str(tmp_path / "r.txt")]
        )
        assert code == 1
        assert "no image found for frame 99" in capsys.readouterr().err
        assert not (tmp_path / "r.txt").exists()

    def test_malformed_detections(self, sequence, tmp_path, capsys):
        dets = tmp_path / "det.txt"
        dets.write_text("1,-1,1,1,10,10,0.9\n1,-1,x,1,10,10,0.9\n")
        code = main(
            ["track", "--frames", str(sequence / "frames"), "--dets", str(dets), "--out", str(tmp_path / "r.txt")]
        )
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_render(self, sequence, tmp_path, capsys):
        results = tmp_path / "results.txt"
        assert track(sequence, results) == 0
        capsys.readouterr()
        overlay = tmp_path / "overlay"
        frames = str(sequence / "frames")
        assert main(["render", "--frames", frames, "--results", str(results), "--out", str(overlay)]) == 0
        assert "Rendered 12 frames" in capsys.readouterr().out
        assert len(list(overlay.iterdir())) == 12
