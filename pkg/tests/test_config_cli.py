import math
from pathlib import Path

import pytest

from hhfrac.cli import main
from hhfrac.config import ConfigError, parse_config

SECTION5_CFG = """\
alpha = 1/3
beta = 2/3
b = e
c1 = 2
c2 = 1
phi = 1
rhs = paper-example
stability.epsilon = 1e-2,1e-3
"""

MANUFACTURED_CFG = """\
alpha = 1/3
beta = 2/3
b = e
c1 = 2
c2 = 1
phi = 0.8069090857251313
rhs = manufactured-log-power
rhs.exponent = 2
rhs.coeff = 1
"""


class TestConfigParsing:
    def test_section5_roundtrip(self):
        config = parse_config(SECTION5_CFG, source="s5.cfg")
        assert config.alpha == pytest.approx(1.0 / 3.0)
        assert config.beta_type == pytest.approx(2.0 / 3.0)
        assert config.b == math.e
        assert config.epsilons == (1e-2, 1e-3)
        problem = config.problem()
        assert problem.rhs.kind == "paper-example"
        assert problem.rhs.K_f == pytest.approx(1.0 / 3.0)

    def test_comments_and_blank_lines(self):
        text = "# heading\n\nalpha = 0.5   # inline\nbeta = 0\nb = 2\nc1 = 1\nc2 = 1\nrhs = paper-example\n"
        config = parse_config(text)
        assert config.alpha == 0.5

    def test_unknown_key_cites_line(self):
        text = "alpha = 0.5\nbeta = 0\nwhatever = 3\n"
        with pytest.raises(ConfigError, match=r"cfg:3: unknown key 'whatever'"):
            parse_config(text, source="cfg")

    def test_malformed_line_cites_line(self):
        with pytest.raises(ConfigError, match=r"cfg:2: expected"):
            parse_config("alpha = 0.5\nbeta\n", source="cfg")

    def test_bad_number_cites_key(self):
        text = SECTION5_CFG.replace("alpha = 1/3", "alpha = banana")
        with pytest.raises(ConfigError, match=r"cfg:1: alpha: not a number"):
            parse_config(text, source="cfg")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("alpha = 0.5\nalpha = 0.6\n", source="cfg")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="missing required key 'rhs'"):
            parse_config("alpha = 0.5\nbeta = 0\nb = 2\nc1 = 1\nc2 = 1\n")

    def test_invariants_rechecked_with_lines(self):
        text = "alpha = 1/3\nbeta = 2/3\nb = e\nc1 = 1\nc2 = -1\nrhs = paper-example\n"
        with pytest.raises(ConfigError, match=r"cfg:4: c1: c1 \+ c2"):
            parse_config(text, source="cfg")

    def test_fraction_and_e_literals(self):
        config = parse_config(
            "alpha = 2/6\nbeta = 0.5\nb = e\nc1 = 1\nc2 = 1\nrhs = paper-example\n"
        )
        assert config.alpha == pytest.approx(1.0 / 3.0)

    def test_epsilon_positivity_checked(self):
        text = SECTION5_CFG.replace("1e-2,1e-3", "0")
        with pytest.raises(ConfigError, match="positive"):
            parse_config(text, source="cfg")


class TestCli:
    def test_example_exit_and_values(self, capsys):
        assert main(["example", "--panels", "256"]) == 0
        out = capsys.readouterr().out
        record = {}
        for line in out.splitlines():
            if " = " in line:
                key, _, value = line.partition(" = ")
                record[key.strip()] = value.strip()
        assert record["K_f"] == repr(1.0 / 3.0)
        assert record["L_f"] == repr(1.0 / 3.0)
        assert 0.81 <= float(record["a_const"]) <= 0.83
        assert 0.87 <= float(record["omega_paper_variant"]) <= 0.89
        assert float(record["omega"]) < 1.0
        assert record["existence_ok"] == "true"
        assert record["uniqueness_ok"] == "true"
        assert "mode,epsilon,deviation,bound,margin,pass" in out
        assert ",true" in out.splitlines()[-1]

    def test_certify_config(self, tmp_path, capsys):
        cfg = tmp_path / "s5.cfg"
        cfg.write_text(SECTION5_CFG)
        assert main(["certify", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "uniqueness_ok = true" in out

    def test_solve_manufactured_emits_small_residuals(self, tmp_path, capsys):
        cfg = tmp_path / "m.cfg"
        cfg.write_text(MANUFACTURED_CFG)
        out_csv = tmp_path / "solution.csv"
        assert main(["solve", "--config", str(cfg), "--out", str(out_csv)]) == 0
        out = capsys.readouterr().out
        record = dict(
            line.partition(" = ")[::2] for line in out.splitlines() if " = " in line
        )
        assert float(record["residual_norm"]) <= 1e-3
        assert float(record["fide_residual"]) <= 1e-3
        assert float(record["bc_defect"]) <= 1e-6
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "t,log_t,weighted_value,raw_value,F_u"
        assert len(lines) == 512 + 2
        last = lines[-1].split(",")
        assert float(last[0]) == pytest.approx(math.e)
        # raw solution at b is (log b)^2 = 1
        assert float(last[3]) == pytest.approx(1.0, abs=1e-3)

    def test_stability_csv_and_exit(self, tmp_path, capsys):
        cfg = tmp_path / "s5.cfg"
        cfg.write_text(SECTION5_CFG)
        assert main(["stability", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0] == "mode,epsilon,deviation,bound,margin,pass"
        assert len(lines) == 3
        assert all(line.endswith(",true") for line in lines[1:])

    def test_identical_config_identical_output(self, tmp_path):
        cfg = tmp_path / "s5.cfg"
        cfg.write_text(SECTION5_CFG)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["stability", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["stability", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        sol1, sol2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        assert main(["solve", "--config", str(cfg), "--out", str(sol1)]) == 0
        assert main(["solve", "--config", str(cfg), "--out", str(sol2)]) == 0
        assert sol1.read_bytes() == sol2.read_bytes()

    def test_verify_fast_passes(self, capsys):
        assert main(["verify", "--level", "fast"]) == 0
        out = capsys.readouterr().out
        assert "checks passed" in out.splitlines()[-1]

    def test_uhr_stability_config(self, tmp_path, capsys):
        cfg = tmp_path / "uhr.cfg"
        cfg.write_text(
            SECTION5_CFG.replace("stability.epsilon = 1e-2,1e-3", "\n".join([
                "stability.epsilon = 1e-3",
                "stability.mode = uhr",
                "stability.phi = critical-log-power",
                "stability.lambda_phi = 1.2568054242093647",
            ]))
        )
        with pytest.warns(UserWarning, match="not increasing"):
            code = main(["stability", "--config", str(cfg)])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].startswith("UHR,0.001,")

    def test_phi_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "s5.cfg"
        cfg.write_text(SECTION5_CFG)
        main(["certify", "--config", str(cfg)])
        base = capsys.readouterr().out
        main(["certify", "--config", str(cfg), "--phi", "2.5"])
        overridden = capsys.readouterr().out
        # lambda_cap carries phi; the uniqueness constant does not
        get = lambda text, key: float(
            [l for l in text.splitlines() if l.startswith(key)][0].split(" = ")[1]
        )
        assert get(overridden, "lambda_cap") > get(base, "lambda_cap")
        assert get(overridden, "a_const") == get(base, "a_const")

    def test_parse_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("alpha = nope\n")
        assert main(["certify", "--config", str(cfg)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_file(self, capsys):
        assert main(["solve", "--config", "/nonexistent.cfg"]) == 2

    def test_shipped_configs_parse(self):
        root = Path(__file__).resolve().parent.parent / "configs"
        paths = sorted(root.glob("*.cfg"))
        assert paths, "shipped example configurations missing"
        for path in paths:
            parse_config(path.read_text(), source=str(path))

    def test_supplied_table_perturbation_config(self, tmp_path, capsys):
        # a supplied perturbation given as weighted values on the grid
        import math as _math

        import numpy as np

        panels = 64
        gamma = 1.0 / 3.0 + 2.0 / 3.0 * (2.0 / 3.0)
        x = np.arange(panels + 1) * _math.log(_math.e) / panels
        eps = 1e-3
        w = np.zeros(panels + 1)
        w[1:] = 0.5 * eps * x[1:] ** (1.0 - gamma)
        cfg = tmp_path / "table.cfg"
        cfg.write_text(
            SECTION5_CFG.replace("stability.epsilon = 1e-2,1e-3", "\n".join([
                f"stability.epsilon = {eps}",
                "stability.perturbation = supplied-table",
                "panels = 64",
                "stability.table = " + ",".join(repr(float(v)) for v in w),
            ]))
        )
        assert main(["stability", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].endswith(",true")

    def test_custom_table_rhs_config(self, tmp_path, capsys):
        # tabulated right-hand side equal to the manufactured one
        import math as _math

        import numpy as np

        from hhfrac.grids import Order
        from hhfrac.problems import manufactured_rhs

        panels = 128
        order = Order(1.0 / 3.0, 2.0 / 3.0)
        rhs = manufactured_rhs(order, _math.e, exponent=2.0)
        x = np.arange(panels + 1) * 1.0 / panels
        w = np.zeros(panels + 1)
        w[1:] = rhs.params["f_coeff"] * x[1:] ** (
            rhs.params["f_exponent"] + 1.0 - order.gamma
        )
        cfg = tmp_path / "table_rhs.cfg"
        cfg.write_text(
            MANUFACTURED_CFG.replace(
                "rhs = manufactured-log-power\nrhs.exponent = 2\nrhs.coeff = 1",
                "rhs = custom-table\npanels = 128\nrhs.table = "
                + ",".join(repr(float(v)) for v in w),
            )
        )
        assert main(["solve", "--config", str(cfg)]) == 0
        record = dict(
            line.partition(" = ")[::2]
            for line in capsys.readouterr().out.splitlines()
            if " = " in line
        )
        assert float(record["residual_norm"]) <= 1e-6
