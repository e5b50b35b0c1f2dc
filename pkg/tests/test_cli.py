import os
import shutil
from pathlib import Path

import pytest

from taylorshift.cli import main
from taylorshift.config import load_config, parse_sequence
from taylorshift.errors import ConfigError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

BASE = """
[geometry]
preset = disk-default
samples = 128

[targets]
p = 1
R1 = 1
R2 = 0, 1

[sequences]
lambda1 = power 1
lambda2 = power 2

[run]
epsilon = {eps}
n_max = {n_max}

[output]
csv = out.csv
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestConfig:
    def test_shipped(self):
        cfg = load_config(CONFIGS / "disk-default.ini")
        assert cfg.n_max == 40 and cfg.precision == 256
        assert [s(5) for s in cfg.sequences] == [5, 25]
        assert cfg.svg_path == "disk-default-decay.svg"

    def test_complex_literals(self, tmp_path):
        text = BASE.format(eps="1/100", n_max=3).replace("R1 = 1", "R1 = 1/2+3i, -2i")
        cfg = load_config(write(tmp_path, text))
        R1 = cfg.targets.principal_parts[0]
        assert complex(R1[-1]) == 0.5 + 3j and complex(R1[-2]) == -2j

    @pytest.mark.parametrize(
        "edit",
        [
            ("epsilon = 1/100", "epsilon = 0"),
            ("epsilon = 1/100", "epsilon = -1"),
            ("n_max = 3", "n_max = 0"),
            ("R2 = 0, 1", ""),
            ("lambda2 = power 2", "lambda2 = cubic"),
            ("preset = disk-default", "preset = nowhere"),
            ("p = 1", "p = one"),
        ],
    )
    def test_rejections(self, tmp_path, edit):
        text = BASE.format(eps="1/100", n_max=3).replace(*edit)
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, text))

    def test_missing_section(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "[geometry]\npreset = disk-default\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.ini")

    def test_sequence_specs(self):
        assert parse_sequence("explicit 1, 4, 9")(2) == 4
        assert parse_sequence("exponential 1 2")(5) == 32
        with pytest.raises(ConfigError):
            parse_sequence("")


class TestCommands:
    def test_identities(self, capsys):
        assert main(["identities", "--seed", "1", "--cases", "100"]) == 0
        out = capsys.readouterr().out
        assert "spot" in out and "FAIL" not in out

    def test_construct_found(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        config = write(tmp_path, BASE.format(eps="1/5", n_max=20))
        assert main(["construct", str(config)]) == 0
        assert "n0 = " in capsys.readouterr().err
        lines = (tmp_path / "out.csv").read_text().splitlines()
        assert lines[0].startswith("n,lambda1,lambda2,err_U,err_1,err_2,theta_hat,bw_bound")

    def test_construct_not_reached(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        config = write(tmp_path, BASE.format(eps="1e-6", n_max=3))
        assert main(["construct", str(config)]) == 1
        assert "best at n = " in capsys.readouterr().err
        assert len((tmp_path / "out.csv").read_text().splitlines()) == 4

    def test_construct_zero_epsilon(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        config = write(tmp_path, BASE.format(eps="0", n_max=3))
        assert main(["construct", str(config)]) == 2
        assert main(["construct", "--epsilon", "0", "--n-max", "2"]) == 2

    def test_stagnant(self, tmp_path):
        out = tmp_path / "stagnant.csv"
        assert main(["--samples", "128", "construct", str(CONFIGS / "stagnant.ini"), "--n-max", "6", "--out", str(out)]) == 1
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        # with equal sequences T~_n(R_{2,n}) = R_2, so the cross term is ||R_2||_K = 1/m^2
        assert all(float(r[-1]) == pytest.approx(1 / 2.25, rel=1e-12) for r in rows)

    def test_bound_columns_certify(self, tmp_path):
        out = tmp_path / "d.csv"
        main(["--samples", "128", "construct", "--epsilon", "1e-9", "--n-max", "8", "--out", str(out)])
        lines = out.read_text().splitlines()
        header = lines[0].split(",")
        col = {name: i for i, name in enumerate(header)}
        for line in lines[1:]:
            cells = line.split(",")
            assert float(cells[col["interp_err"]]) <= float(cells[col["bw_bound"]])
            assert float(cells[col["interp_term"]]) <= float(cells[col["deriv_bound"]])

    def test_deterministic_csv(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["--samples", "128", "construct", "--epsilon", "1e-9", "--n-max", "5"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_sequences_polynomial(self, capsys):
        assert main(["sequences", "--model", "polynomial", "--rates", "1,2", "--k-count", "30"]) == 0
        assert capsys.readouterr().out.count("\n") == 1 + 28

    def test_sequences_exponential(self):
        assert main(["sequences", "--model", "exponential", "--rates", "3/2,2", "--k-count", "30"]) == 0

    def test_sequences_below_k_min(self, capsys):
        assert main(["sequences", "--model", "polynomial", "--rates", "1,2", "--k-count", "2"]) == 0
        assert "warning" in capsys.readouterr().err

    def test_sequences_bad_model(self):
        assert main(["sequences", "--model", "polynomial", "--rates", "2,1"]) == 2

    def test_theta(self, capsys):
        assert main(["theta", "--n", "64"]) == 0
        value = float(capsys.readouterr().out.split("=")[1])
        assert 0.53 <= value <= 0.58

    def test_t_a_check(self):
        assert main(["t-a-check", "--a", "i", "--f=-1:1,-2:1/2,3:2", "--n-max", "12"]) == 0

    def test_usage_errors(self):
        assert main([]) == 2
        assert main(["bogus"]) == 2
        assert main(["construct", "--n-max", "x"]) == 2

    def test_global_flag_before_command(self, tmp_path):
        out = tmp_path / "seq.csv"
        assert main(["--out", str(out), "sequences", "--model", "polynomial", "--rates", "1,2", "--k-count", "5"]) == 0
        assert out.exists()


def test_construct_disk_default_epsilon_1e_2(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["construct", "--epsilon", "1e-2", "--n-max", "15", "--out", str(out)]) == 0
