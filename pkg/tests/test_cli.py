"""Tests for run configs, result tables, subcommands and the sweep CLI."""

import importlib.util
import math
from pathlib import Path

import pytest
from typer.testing import CliRunner

from src.cli import (
    ConfigError,
    ResultTable,
    RunConfig,
    cmd_coeffs,
    cmd_map,
    cmd_oracle,
    cmd_rates,
    cmd_response,
    cmd_snr,
    load_run_config,
    read_table,
    render_csv,
    render_json,
    snr_scenarios,
    write_table,
)
from src.cli.runconfig import (
    CoeffsSection,
    MapSection,
    OracleSection,
    RatesSection,
    ResponseSection,
    SnrSection,
    SystemSection,
)
from src.dispersive import analytic_coefficients
from src.eigenblocks import BlockError, EigensolverError
from src.metrics import SnrConfig, SpectrumError, gamma_1_from_t1, snr_curve
from src.response import SweepDirection

PROJECT_ROOT = Path(__file__).parent.parent

ORACLE_INI = """\
[system]
num_levels = 2

[oracle]
jc_photons = 0, 1, 10
photon_cutoff = 3
power_min = 0
power_max = 2
power_step = 1
scan_points = 200
"""


def _load_script():
    spec = importlib.util.spec_from_file_location("run_sweep", PROJECT_ROOT / "scripts" / "run_sweep.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def _load_app():
    return _load_script().app


@pytest.fixture
def write_ini(tmp_path):
    def _write(text: str, name: str = "run.ini") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.system.num_levels == 6
        assert cfg.response.directions == (SweepDirection.UP, SweepDirection.DOWN)
        assert cfg.rates.powers()[0] == -20.0
        assert cfg.rates.powers()[-1] == 60.0
        assert len(cfg.rates.powers()) == 161

    def test_shipped_configs_load(self):
        for path in sorted((PROJECT_ROOT / "configs").glob("*.ini")):
            assert isinstance(load_run_config(path), RunConfig)

    def test_lists_and_overrides(self, write_ini):
        cfg = load_run_config(
            write_ini("[response]\nladders = 2, 6\nlevels = 1\ndirections = down\n\n[system]\nkappa = 0.2\n")
        )
        assert cfg.response.ladders == (2, 6)
        assert cfg.response.levels == (1,)
        assert cfg.response.directions == (SweepDirection.DOWN,)
        assert cfg.system.spec().kappa == 0.2

    def test_explicit_ladder(self, write_ini):
        cfg = load_run_config(
            write_ini("[system]\nnum_levels = 3\nlevel_freqs = 0, 6000, 11700\ncouplings = 100, 150\n")
        )
        mls = cfg.system.mls()
        assert mls.level_freqs == (0.0, 6000.0, 11700.0)
        assert cfg.system.mls(2).couplings == (100.0,)

    def test_invalid_value_names_the_line(self, write_ini):
        path = write_ini("[system]\nnum_levels = 2\nomega_r = -5\n")
        with pytest.raises(ConfigError, match=r":3: \[system\] omega_r"):
            load_run_config(path)

    def test_unknown_key_names_the_line(self, write_ini):
        path = write_ini("# comment\n[coeffs]\npoints = 3\nbogus = 1\n")
        with pytest.raises(ConfigError, match=r":4: \[coeffs\] bogus"):
            load_run_config(path)

    def test_unknown_section_names_the_line(self, write_ini):
        path = write_ini("[system]\nnum_levels = 2\n\n[plot]\nstyle = dark\n")
        with pytest.raises(ConfigError, match=r":4: unknown section \[plot\]"):
            load_run_config(path)

    def test_invalid_ladder_points_at_the_section(self, write_ini):
        path = write_ini("\n[system]\nomega_21 = 100\n")
        with pytest.raises(ConfigError, match=r":2: \[system\]"):
            load_run_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.ini")

    def test_resolved_items_fill_solver_defaults(self):
        items = dict(RunConfig().resolved_items())
        assert items["system.num_levels"] == "6"
        assert items["system.level_freqs"] == "default"
        assert items["coeffs.ladders"] == "2,6"
        assert items["solver.max_iterations"] == "100000"
        assert "solver.damping" in items

    @pytest.mark.parametrize(
        "text, first, second",
        [
            ("", 0.01, 50.0),
            ("[dephasing]\ntable = exponential\n", 0.1, 10**1.2),
            ("[dephasing]\nej_over_ec = 50\n", 0.0125, 40.0),
            ("[dephasing]\ndispersions = 0.2, 1, 3, 9, 27, 81\n", 0.2, 3.0),
        ],
    )
    def test_dispersion_table_choices(self, write_ini, text, first, second):
        cfg = load_run_config(write_ini(text))
        table = cfg.dephasing.dispersion_table(cfg.system.spec())
        assert len(table) == 6
        assert table[0] == pytest.approx(first)
        assert table[1] == 1.0
        assert table[2] == pytest.approx(second)


class TestResultTable:
    def _table(self) -> ResultTable:
        table = ResultTable(name="demo", columns=("a", "b", "c", "d", "e"))
        table.add_row(1, 0.1, True, "up", None)
        table.add_row(2, math.nan, False, SweepDirection.DOWN, 1e-300)
        table.meta = {"tool": "readout-nonlinearity", "command": "demo"}
        return table

    def test_row_width_is_checked(self):
        table = ResultTable(name="t", columns=("a", "b"))
        with pytest.raises(ValueError):
            table.add_row(1)

    def test_enum_cells_are_written_by_value(self):
        assert self._table().rows[1][3] == "down"

    def test_csv_header_and_body(self):
        lines = render_csv(self._table()).splitlines()
        assert lines[0] == "# tool = readout-nonlinearity"
        assert lines[2] == "a,b,c,d,e"
        assert lines[3] == "1,0.1,true,up,"

    def test_csv_round_trip_is_byte_identical(self, tmp_path):
        path = write_table(self._table(), tmp_path, "csv")
        text = path.read_text(encoding="utf-8")
        again = read_table(path)
        assert again.meta == self._table().meta
        assert render_csv(again) == text

    def test_json_mirror(self, tmp_path):
        path = write_table(self._table(), tmp_path, "json")
        assert path.suffix == ".json"
        again = read_table(path)
        assert again.columns == self._table().columns
        assert render_json(again) == path.read_text(encoding="utf-8")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            write_table(self._table(), tmp_path, "xlsx")


class TestCommands:
    def test_coeffs_single_point_matches_module(self):
        cfg = RunConfig(coeffs=CoeffsSection(ladders=(6,), omega_r_min=7000, omega_r_max=7000, points=1))
        table = cmd_coeffs(cfg).tables[0]
        assert len(table.rows) == 1
        expected = analytic_coefficients(cfg.system.spec())
        assert table.column("chi_prime_analytic") == [expected.chi_prime]
        assert table.column("zeta_prime_analytic") == [expected.zeta_prime]
        assert table.column("masked") == [False]

    def test_two_level_signs_never_agree(self):
        cfg = RunConfig(coeffs=CoeffsSection(ladders=(2,), omega_r_min=6500, omega_r_max=10000, points=8))
        table = cmd_coeffs(cfg).tables[0]
        assert not any(table.column("same_sign_analytic"))

    def test_coeffs_masks_resonance(self):
        cfg = RunConfig(coeffs=CoeffsSection(ladders=(2,), omega_r_min=6000, omega_r_max=6000, points=1))
        table = cmd_coeffs(cfg).tables[0]
        assert table.column("masked") == [True]
        assert table.column("mask_reason") == ["resonance"]
        assert math.isnan(table.column("chi_prime_analytic")[0])

    def test_snr_scenarios_share_the_pull(self):
        scenarios = snr_scenarios(RunConfig())
        for coeffs in (scenarios.same_sign, scenarios.opposite_sign, scenarios.constant):
            assert abs(coeffs.chi_prime) == pytest.approx(2.0)
        assert scenarios.same_sign.same_sign
        assert not scenarios.opposite_sign.same_sign
        assert scenarios.constant.zeta_prime == 0.0
        assert scenarios.n_crit == pytest.approx(55.1, rel=1e-2)

    def test_snr_rows_reproduce_the_module(self):
        cfg = RunConfig(snr=SnrSection(kappa_over_2chi=(0.5,), points=4))
        table = cmd_snr(cfg).tables[0]
        scenarios = snr_scenarios(cfg)
        snr_cfg = SnrConfig(gamma_1=gamma_1_from_t1(1.0), kappa_over_2chi=0.5)
        n_bars = table.column("n_bar")
        expected = snr_curve(scenarios.same_sign, snr_cfg, n_bars)
        assert table.column("snr_same") == [p.snr for p in expected]
        assert n_bars[-1] == pytest.approx(scenarios.n_crit)

    @pytest.mark.parametrize("ratio", [0.5, 1.0])
    def test_snr_ordering(self, ratio):
        cfg = RunConfig(snr=SnrSection(kappa_over_2chi=(ratio,), points=20))
        table = cmd_snr(cfg).tables[0]
        for same, constant, opposite in zip(
            table.column("snr_same"), table.column("snr_constant"), table.column("snr_opposite")
        ):
            assert same > constant > opposite

    def test_same_sign_snr_gain_near_the_critical_photon_number(self):
        scenarios = snr_scenarios(RunConfig())
        snr_cfg = SnrConfig(eta=1.0, gamma_1=gamma_1_from_t1(1.0), kappa_over_2chi=1.0)
        n_bar = [0.8 * scenarios.n_crit]
        same = snr_curve(scenarios.same_sign, snr_cfg, n_bar)[0]
        opposite = snr_curve(scenarios.opposite_sign, snr_cfg, n_bar)[0]
        assert same.snr >= 1.5 * opposite.snr

    def test_response_tables(self):
        cfg = RunConfig(
            response=ResponseSection(
                ladders=(2,), levels=(0, 1, 5), directions=(SweepDirection.UP,), power_min=-20, power_max=0, power_step=5
            )
        )
        result = cmd_response(cfg)
        assert [t.name for t in result.tables] == ["response_M2", "response_separation", "response_avalanche"]
        curves, separation, summary = result.tables
        # level 5 is outside the two-level ladder and skipped
        assert sorted(set(curves.column("level"))) == [0, 1]
        assert curves.column("power_db")[:5] == [-20.0, -15.0, -10.0, -5.0, 0.0]
        assert len(summary.rows) == 2
        assert separation.column("direction") == [SweepDirection.UP]
        assert separation.column("ratio_threshold") == [1000.0]
        assert result.converged

    def test_avalanche_config_separates_the_states(self):
        cfg = load_run_config(PROJECT_ROOT / "configs" / "avalanche.ini")
        result = cmd_response(cfg)
        assert result.converged
        separation = next(t for t in result.tables if t.name == "response_separation")
        assert len(separation.rows) == 1
        assert separation.column("peak_ratio")[0] >= 1e4
        assert 3.0 <= separation.column("width_db")[0] <= 8.0

    def test_avalanche_config_bistability_is_certified(self):
        cfg = load_run_config(PROJECT_ROOT / "configs" / "avalanche.ini")
        multiplicity = cmd_oracle(cfg).tables[2]
        rows = list(zip(multiplicity.column("fixed_points"), multiplicity.column("bistable")))
        assert any(bistable for _, bistable in rows)
        assert max(count for count, bistable in rows if bistable) >= 2
        # 0 dB
        assert rows[0] == (1, False)

    def test_map_tables(self):
        cfg = RunConfig(
            system=SystemSection(num_levels=2),
            map=MapSection(omega_m_min=6990, omega_m_max=7010, omega_m_points=3, power_min=0, power_max=10, power_points=2),
        )
        result = cmd_map(cfg)
        assert [t.name for t in result.tables] == ["map_state0", "map_state1", "map_separation"]
        assert len(result.tables[0].rows) == 6
        assert result.tables[2].column("omega_m") == [6990.0, 7000.0, 7010.0]
        assert result.tables[2].columns[-3:] == ("ratio_low_db", "ratio_high_db", "peak_ratio")

    def test_map_level_outside_ladder(self):
        cfg = RunConfig(system=SystemSection(num_levels=2), map=MapSection(levels=(3,)))
        with pytest.raises(ConfigError):
            cmd_map(cfg)

    def test_rates_weak_drive(self):
        cfg = RunConfig(rates=RatesSection(power_min=-20, power_max=-10, power_step=5))
        table = cmd_rates(cfg).tables[0]
        assert table.column("power_db") == [-20.0, -15.0, -10.0]
        assert table.column("n") == [0, 0, 0]
        assert len(set(table.column("gamma_kappa"))) == 1

    def test_oracle_tables(self):
        cfg = RunConfig(
            system=SystemSection(num_levels=2),
            oracle=OracleSection(jc_photons=(0, 1, 10, 1000), photon_cutoff=4, power_min=0, power_max=2, scan_points=200),
        )
        result = cmd_oracle(cfg)
        jc, blocks, multiplicity = result.tables
        assert max(jc.column("rel_error")) < 1e-12
        assert blocks.column("max_cross_block_element") == [0.0]
        assert blocks.column("max_spectrum_error")[0] < 1e-8
        assert multiplicity.column("fixed_points") == [1, 1]
        assert result.converged


class TestSweepCli:
    def test_oracle_run_writes_tables(self, write_ini, tmp_path):
        out = tmp_path / "out"
        result = CliRunner().invoke(_load_app(), ["oracle", "--config", str(write_ini(ORACLE_INI)), "--out", str(out)])
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.iterdir())
        assert names == ["oracle_blocks.csv", "oracle_jc.csv", "oracle_multiplicity.csv"]
        text = (out / "oracle_jc.csv").read_text(encoding="utf-8")
        assert text.startswith("# tool = readout-nonlinearity ")
        assert "# system.num_levels = 2" in text

    def test_runs_are_deterministic(self, write_ini, tmp_path):
        config = str(write_ini(ORACLE_INI))
        runner = CliRunner()
        app = _load_app()
        for name in ("a", "b"):
            result = runner.invoke(app, ["oracle", "-c", config, "-o", str(tmp_path / name), "--seed", "7"])
            assert result.exit_code == 0, result.output
        for path in sorted((tmp_path / "a").iterdir()):
            text = path.read_text(encoding="utf-8")
            assert text == (tmp_path / "b" / path.name).read_text(encoding="utf-8")
            assert render_csv(read_table(path)) == text

    def test_json_format_and_prefix(self, write_ini, tmp_path):
        config = write_ini(ORACLE_INI + "\n[output]\nprefix = run1_\n")
        out = tmp_path / "out"
        result = CliRunner().invoke(_load_app(), ["oracle", "-c", str(config), "-o", str(out), "--format", "json"])
        assert result.exit_code == 0, result.output
        assert (out / "run1_oracle_jc.json").exists()

    def test_config_error_exit_code(self, write_ini, tmp_path):
        config = write_ini("[system]\nnum_levels = 1\n")
        result = CliRunner().invoke(_load_app(), ["snr", "-c", str(config), "-o", str(tmp_path)])
        assert result.exit_code == 1

    def test_unknown_format_exit_code(self, write_ini, tmp_path):
        result = CliRunner().invoke(
            _load_app(), ["oracle", "-c", str(write_ini(ORACLE_INI)), "-o", str(tmp_path), "-f", "xml"]
        )
        assert result.exit_code == 1

    def test_non_convergence_exit_code(self, write_ini, tmp_path):
        config = write_ini(ORACLE_INI + "\n[solver]\nmax_iterations = 1\nacceleration = false\n")
        result = CliRunner().invoke(_load_app(), ["oracle", "-c", str(config), "-o", str(tmp_path / "out")])
        assert result.exit_code == 2
        assert (tmp_path / "out" / "oracle_multiplicity.csv").exists()

    @pytest.mark.parametrize(
        "error",
        [BlockError("level 9 outside 0..1"), SpectrumError("undefined"), EigensolverError("no convergence")],
    )
    def test_library_errors_exit_with_config_code(self, error, tmp_path, monkeypatch):
        script = _load_script()

        def fail(cfg):
            raise error

        monkeypatch.setattr(script, "cmd_oracle", fail)
        result = CliRunner().invoke(script.app, ["oracle", "-o", str(tmp_path)])
        assert result.exit_code == 1
        assert type(error).__name__ in result.output

    def test_coeffs_threads(self, write_ini, tmp_path):
        config = write_ini("[coeffs]\nladders = 2\nomega_r_min = 6500\nomega_r_max = 7500\npoints = 3\n")
        runner = CliRunner()
        app = _load_app()
        for name, threads in (("serial", "1"), ("pool", "2")):
            result = runner.invoke(app, ["coeffs", "-c", str(config), "-o", str(tmp_path / name), "-j", threads])
            assert result.exit_code == 0, result.output
        serial = (tmp_path / "serial" / "coeffs.csv").read_text(encoding="utf-8")
        assert (tmp_path / "pool" / "coeffs.csv").read_text(encoding="utf-8") == serial
