import json

import pytest

from lefschetz_quartic import cli
from lefschetz_quartic.errors import ConfigError
from lefschetz_quartic.pipeline import MonodromyModel


def write(tmp_path, text):
    p = tmp_path / "run.toml"
    p.write_text(text)
    return str(p)


def test_default_config():
    rc = cli.parse_config({})
    assert (rc.c1, rc.c2) == (cli.RunConfig().c1, cli.RunConfig().c2)


@pytest.mark.parametrize("doc", [
    {"foo": 1},
    {"tracking": {"initial_step": 0.1, "bogus": 1}},
    {"collision": {"radius": 1}},
    {"paths": {"lambda": []}},
    {"tracking": {"contract": 0.6}},
    {"lasso_radius_factor": 0.7},
    {"basepoint": [1]},
    {"c1": "x"},
    {"paths": {"mu": [[[0, 0], [1, 1]]]}},
])
def test_config_rejects(doc):
    with pytest.raises(ConfigError):
        cli.parse_config(doc)


def test_config_reads_values():
    rc = cli.parse_config({"c1": "7/8", "tracking": {"initial_step": 0.01}, "collision": {"eps_collide": 1e-7}})
    assert rc.track.initial_step == 0.01 and rc.track.eps_collide == 1e-7


def test_unknown_key_exit_code(tmp_path, capsys):
    assert cli.main(["--config", write(tmp_path, "foo = 1\n"), "--out", str(tmp_path), "verify-setup"]) == 2
    assert "unknown configuration keys" in capsys.readouterr().err


def test_invalid_toml(tmp_path):
    assert cli.main(["--config", write(tmp_path, "c1 = \n"), "verify-setup"]) == 2


@pytest.mark.parametrize("c", ["0", "1"])
def test_degenerate_line_exit_code(tmp_path, capsys, c):
    path = write(tmp_path, f'c1 = "{c}"\nc2 = "{c}"\n')
    assert cli.main(["--config", path, "--out", str(tmp_path), "verify-setup"]) == 2
    err = capsys.readouterr().err
    assert "setup failure: transversality" in err


def test_verify_setup(tmp_path):
    assert cli.main(["--out", str(tmp_path), "verify-setup"]) == 0
    data = json.loads((tmp_path / "setup.json").read_text())
    assert data["transversal"] and data["tame_at_infinity"]
    assert data["katz_degree"] == 36
    assert data["katz_small_degrees"] == {"2": 2, "3": 12}
    assert data["max_relative_Q_at_dual_points"] < 1e-8
    assert data["infinity_permutation"] == "()"
    assert data["failures"] == []


def test_jsonable():
    from fractions import Fraction
    out = cli.jsonable({"z": 1 + 2j, "q": Fraction(7, 8), "x": 0.1 + 0.2})
    assert out == {"z": {"re": 1.0, "im": 2.0}, "q": "7/8", "x": 0.3}


def test_svg_deterministic(model):
    a = cli.plot_roots(model)
    assert a == cli.plot_roots(model)
    assert a.startswith("<svg")
    assert cli.plot_track(model, 3) == cli.plot_track(model, 3)


def test_plot_range_check(tmp_path):
    assert cli.main(["--out", str(tmp_path), "plot", "--what", "tracks:99"]) == 2


@pytest.mark.slow
def test_cycles_report(model):
    report = cli.cmd_cycles(model)
    assert report["relation"]["product_is_identity"]
    assert report["mod2_order"] == 1451520
    assert report["surface"]["genus"] == 3
    assert len(report["classes"]) == 36
    text = cli.dumps(report)
    assert "time" not in json.loads(text)
