import math

import pytest

from gwdbox import Form, LossConfig, SMOOTH_L1, SweepKind, Transform
from gwdbox.cli import main
from gwdbox.config import BoundarySpec, load_experiments, parse_loss_entry
from gwdbox.harness import DescentSpec, SweepSpec

FULL_CONFIG = """
[fig_angle]
kind = angle
base = 0,0,40,10,0,le
range = 0,90,25
losses = gwd(transform=sqrt,tau=2,form=fitted), gwd(transform=log,tau=1,form=direct), smooth_l1, iou

[fig_center]
kind = center
range = 0,120,25

[fig_aspect]
kind = aspect
relative_angle = 15

[cases]
kind = boundary
taus = 1,5

[fit_gwd]
kind = descent
anchor = 0,0,70,10,-90
ground_truth = 0,0,10,70,-25
loss = gwd(transform=sqrt,tau=2,form=fitted)
max_iters = 120
record_every = 20

[fit_sl1]
kind = descent
anchor = 0,0,70,10,-90
ground_truth = 0,0,10,70,-25
loss = smooth_l1
max_iters = 120
record_every = 20
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "experiments.ini"
    path.write_text(FULL_CONFIG)
    return path


class TestConfig:
    def test_parse_loss_entries(self):
        assert parse_loss_entry("smooth_l1") == SMOOTH_L1
        assert parse_loss_entry("iou") == "iou"
        cfg = parse_loss_entry("gwd(transform=log, tau=3, form=direct)")
        assert cfg == LossConfig(Transform.LOG, 3.0, Form.DIRECT)
        assert parse_loss_entry("gwd") == LossConfig()

    @pytest.mark.parametrize("bad", ["nope", "gwd(tau)", "gwd(color=red)", ""])
    def test_rejects_malformed_entries(self, bad):
        with pytest.raises(ValueError):
            parse_loss_entry(bad)

    def test_load_experiments(self, config_path):
        exps = {e.name: e.spec for e in load_experiments(config_path)}
        angle = exps["fig_angle"]
        assert isinstance(angle, SweepSpec)
        assert angle.kind is SweepKind.ANGLE_DIFF
        assert angle.steps == 25
        assert angle.stop == pytest.approx(math.pi / 2)
        assert len(angle.losses) == 4
        aspect = exps["fig_aspect"]
        assert aspect.kind is SweepKind.ASPECT_RATIO
        assert aspect.relative_angle == pytest.approx(math.radians(15))
        cases = exps["cases"]
        assert isinstance(cases, BoundarySpec)
        assert cases.taus == (1.0, 5.0)
        fit = exps["fit_gwd"]
        assert isinstance(fit, DescentSpec)
        assert fit.max_iters == 120
        assert exps["fit_sl1"].loss == SMOOTH_L1

    def test_unknown_kind_is_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[x]\nkind = banana\n")
        with pytest.raises(ValueError):
            load_experiments(path)

    def test_missing_kind_is_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[x]\nbase = 0,0,1,1,0\n")
        with pytest.raises(ValueError):
            load_experiments(path)


class TestOneShotVerbs:
    def test_iou_identical(self, capsys):
        assert main(["iou", "0,0,2,2,0", "0,0,2,2,0"]) == 0
        assert capsys.readouterr().out == "1.000000\n"

    def test_gwd_mean_shift(self, capsys):
        assert main(["gwd", "0,0,4,2,0", "1,1,4,2,0"]) == 0
        assert capsys.readouterr().out == "2.000000\n"

    def test_loss_with_options(self, capsys):
        assert main(["loss", "0,0,4,2,0", "2,0,4,2,0",
                     "--transform", "sqrt", "--tau", "2", "--form", "fitted"]) == 0
        assert capsys.readouterr().out == "0.750000\n"

    def test_convert_to_long_edge(self, capsys):
        assert main(["convert", "0,0,10,70,-25,oc", "--to", "le"]) == 0
        assert capsys.readouterr().out == "0,0,70,10,65,le\n"

    def test_convert_identity_branch(self, capsys):
        assert main(["convert", "0,0,70,10,-90,oc", "--to", "le"]) == 0
        assert capsys.readouterr().out == "0,0,70,10,-90,le\n"

    def test_deterministic_stdout(self, capsys):
        main(["gwd", "0,0,70,10,-90", "0,0,10,70,-25"])
        first = capsys.readouterr().out
        main(["gwd", "0,0,70,10,-90", "0,0,10,70,-25"])
        assert capsys.readouterr().out == first

    def test_bad_literal_exits_one(self, capsys):
        assert main(["iou", "0,0,2,2", "0,0,2,2,0"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_usage_error_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["convert", "0,0,2,2,0", "--to", "xx"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_no_verb_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestSelftestVerb:
    def test_passes_and_prints_one_line_per_check(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines() if l.startswith("PASS") or l.startswith("FAIL")]
        assert len(lines) == 5
        assert all(l.startswith("PASS") for l in lines)

    def test_deterministic_output(self, capsys):
        main(["selftest"])
        first = capsys.readouterr().out
        main(["selftest"])
        assert capsys.readouterr().out == first


class TestExperimentVerbs:
    def test_sweep_writes_csv_and_svg(self, config_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["sweep", str(config_path), "--out", str(out)]) == 0
        for name in ("fig_angle", "fig_center", "fig_aspect"):
            assert (out / f"{name}.csv").exists()
            assert (out / f"{name}.svg").exists()
        header = (out / "fig_angle.csv").read_text().splitlines()[0]
        assert header.split(",")[0] == "angle_deg"
        assert "gwd_log_tau1_direct" in header

    def test_boundary_writes_csv(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["boundary", str(config_path), "--out", str(out)]) == 0
        lines = (out / "cases.csv").read_text().splitlines()
        assert lines[0] == "case,loss,value,iou"
        # three cases x (smooth_l1 + two taus)
        assert len(lines) == 1 + 9

    def test_descent_writes_trajectory(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["descent", str(config_path), "--out", str(out)]) == 0
        lines = (out / "fit_gwd.csv").read_text().splitlines()
        assert lines[0] == "step,x,y,w,h,theta_deg,loss,iou"
        assert len(lines) >= 3
        assert (out / "fit_sl1.csv").exists()
        assert (out / "fit_gwd.svg").exists()

    def test_outputs_byte_identical_across_runs(self, config_path, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        main(["sweep", str(config_path), "--out", str(out1)])
        main(["sweep", str(config_path), "--out", str(out2)])
        for name in ("fig_angle", "fig_center", "fig_aspect"):
            assert (out1 / f"{name}.csv").read_bytes() == (out2 / f"{name}.csv").read_bytes()
            assert (out1 / f"{name}.svg").read_bytes() == (out2 / f"{name}.svg").read_bytes()

    def test_no_matching_sections_exits_one(self, tmp_path, capsys):
        path = tmp_path / "empty.ini"
        path.write_text("[only_descent]\nkind = descent\nanchor = 0,0,1,1,0\nground_truth = 0,0,1,1,0\n")
        assert main(["sweep", str(path), "--out", str(tmp_path / "o")]) == 1
        assert "no sweep sections" in capsys.readouterr().err

    def test_missing_config_exits_one(self, tmp_path, capsys):
        assert main(["sweep", str(tmp_path / "nope.ini"), "--out", str(tmp_path)]) == 1
