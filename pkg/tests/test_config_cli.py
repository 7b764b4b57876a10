import csv
import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausschain.chain_model import Model
from gausschain.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from gausschain.config import (
    Command,
    ConfigError,
    EngineChoice,
    OutputFormat,
    RunConfig,
    parse_config,
    render_config,
)
from gausschain.decomposition import parse_circuit
from gausschain.protocols import Clock, SweepRecord
from gausschain.reporting import emit_records, fmt, records_to_csv, records_to_json


class TestParseConfig:
    def test_minimal_with_defaults(self):
        cfg = parse_config("chain.n = 3\nchain.omega = 1.0\nchain.kappa = 0.1\ncommand = sweep\n")
        assert cfg.command is Command.SWEEP
        assert (cfg.n, cfg.omega, cfg.kappa) == (3, 1.0, 0.1)
        assert (cfg.tau_start, cfg.tau_end, cfg.tau_step) == (0.0, 60.0, 0.01)
        assert cfg.tagging() is None
        assert cfg.sweep().pairs == ((1, 2), (1, 3))

    def test_tagged_sweep(self):
        cfg = parse_config("command = sweep\nchain.n = 3\nchain.kappa = 0.1\nsweep.r = 0.2  # tag the ends\n")
        assert cfg.sweep().tagging == 0.2

    @pytest.mark.parametrize("n,r", [(3, 0.2), (4, 0.4), (5, 0.6)])
    def test_tag_defaults(self, n, r):
        assert parse_config(f"command = tag\nchain.n = {n}\n").tagging() == r

    def test_all_keys(self):
        text = (
            "command = validate\nchain.model = rotating_wave\nsweep.pairs = 1-2, 2-3\n"
            "sweep.clock = physical\nsweep.blocks = yes\nsimulate.tau = 4.5\n"
            "output.path = out.csv\noutput.format = json\nengine = both\n"
        )
        cfg = parse_config(text)
        assert cfg.model is Model.ROTATING_WAVE
        assert cfg.pairs == ((1, 2), (2, 3))
        assert cfg.clock is Clock.PHYSICAL and cfg.blocks and cfg.tau == 4.5
        assert cfg.output == "out.csv" and cfg.format is OutputFormat.JSON and cfg.engine is EngineChoice.BOTH

    def test_bad_value_names_line(self):
        with pytest.raises(ConfigError, match="line 2: bad value for chain.kappa"):
            parse_config("chain.n = 3\nchain.kappa = fast\n")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="line 1: unknown key 'chain.kapa'"):
            parse_config("chain.kapa = 0.1\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 3"):
            parse_config("# comment\n\nchain.n 3\n")

    @pytest.mark.parametrize(
        "text,key",
        [
            ("chain.n = 1", "chain.n"),
            ("chain.omega = -1", "chain.omega"),
            ("sweep.tau_step = 0", "sweep.tau_step"),
            ("sweep.tau_end = -1", "sweep.tau_end"),
            ("sweep.pairs = 1-4", "sweep.pairs"),
        ],
    )
    def test_semantic_errors_name_key(self, text, key):
        with pytest.raises(ConfigError, match=key):
            parse_config(text)


@st.composite
def run_configs(draw):
    n = draw(st.integers(2, 6))
    start = draw(st.floats(0, 50))
    pairs = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda p: p[0] != p[1]), max_size=3))
    return RunConfig(
        command=draw(st.sampled_from(Command)),
        n=n,
        omega=draw(st.floats(0.1, 10)),
        kappa=draw(st.floats(-1, 1)),
        model=draw(st.sampled_from(Model)),
        tau_start=start,
        tau_end=start + draw(st.floats(0, 50)),
        tau_step=draw(st.floats(1e-3, 1)),
        pairs=tuple(pairs),
        r=draw(st.none() | st.floats(-1, 1)),
        clock=draw(st.sampled_from(Clock)),
        blocks=draw(st.booleans()),
        tau=draw(st.floats(0, 100)),
        output=draw(st.none() | st.from_regex(r"[a-z][a-z0-9_./]{0,12}", fullmatch=True)),
        format=draw(st.sampled_from(OutputFormat)),
        engine=draw(st.sampled_from(EngineChoice)),
    )


@settings(max_examples=100, deadline=None)
@given(run_configs())
def test_render_round_trip(cfg):
    assert parse_config(render_config(cfg)) == cfg


class TestReporting:
    def test_empty_csv_is_header_only(self):
        assert records_to_csv([]) == "tau,pair,log_negativity\n"

    def test_csv_rows(self):
        recs = [SweepRecord(0.5, {(1, 2): 0.1, (1, 3): 0.0}, {"c12_11": -0.0})]
        rows = list(csv.reader(io.StringIO(records_to_csv(recs))))
        assert rows[0] == ["tau", "pair", "log_negativity", "c12_11"]
        assert rows[1] == ["0.5", "1-2", "0.10000000000000001", "0"]
        assert rows[2][1:3] == ["1-3", "0"]

    def test_fmt_round_trips(self):
        for x in (0.1, 1 / 3, 44.2, 1e-300, -2.5e17):
            assert float(fmt(x)) == x
        assert fmt(-0.0) == "0"

    def test_json(self):
        recs = [SweepRecord(1.0, {(1, 2): 0.25}, {}, 1e-15)]
        data = json.loads(records_to_json(recs))
        assert data == [{"tau": 1.0, "log_negativity": {"1-2": 0.25}, "purity_error": 1e-15}]

    def test_emit_to_stream_and_path(self, tmp_path):
        recs = [SweepRecord(1.0, {(1, 2): 0.25})]
        buf = io.StringIO()
        emit_records(recs, "csv", buf)
        emit_records(recs, "csv", tmp_path / "x.csv")
        assert (tmp_path / "x.csv").read_text() == buf.getvalue()
        with pytest.raises(ValueError):
            emit_records(recs, "xml", buf)

    def test_io_error_has_path(self, tmp_path):
        target = tmp_path / "missing" / "x.csv"
        with pytest.raises(OSError, match="missing"):
            emit_records([], "csv", target)


def write_config(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


class TestCli:
    def test_sweep_csv(self, tmp_path):
        cfg = write_config(tmp_path, "chain.n = 3\nsweep.tau_end = 1\nsweep.tau_step = 0.5\n")
        out = tmp_path / "out.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == EXIT_OK
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["tau", "pair", "log_negativity"]
        assert [r[:2] for r in rows[1:3]] == [["0", "1-2"], ["0", "1-3"]]
        assert len(rows) == 1 + 3 * 2

    def test_tag_json_both_engines(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chain.n = 4\nsweep.tau_end = 10\nsweep.tau_step = 1\nsweep.blocks = true\n")
        assert main(["tag", "--config", cfg, "--format", "json", "--engine", "both"]) == EXIT_OK
        captured = capsys.readouterr()
        data = json.loads(captured.out)
        assert len(data) == 11 and set(data[3]["log_negativity"]) == {"1-2", "1-3", "1-4"}
        assert "c13_22" in data[3]["blocks"]
        assert "decomposition vs oracle" in captured.err

    def test_deterministic_output(self, tmp_path):
        cfg = write_config(tmp_path, "chain.n = 5\nsweep.r = 0.6\nsweep.tau_end = 5\nsweep.tau_step = 0.25\n")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", cfg, "--out", str(a)])
        main(["sweep", "--config", cfg, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_simulate(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chain.n = 3\nsimulate.tau = 44.2\n")
        assert main(["simulate", "--config", cfg, "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert len(data["covariance"]) == 6
        assert data["log_negativity"]["1-3"] < 1e-6
        assert main(["simulate", "--config", cfg]) == EXIT_OK
        assert capsys.readouterr().out.startswith("pair,log_negativity\n1-2,")

    def test_decompose(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chain.n = 4\nsimulate.tau = 3\n")
        assert main(["decompose", "--config", cfg]) == EXIT_OK
        text = capsys.readouterr().out
        assert text.startswith("# n=4")
        assert parse_circuit(text).n == 4

    def test_validate_passes(self, capsys):
        assert main(["validate"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "PASS oracle-equivalence" in out and "FAIL" not in out

    def test_validate_unstable(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chain.kappa = 0.8\n")
        assert main(["validate", "--config", cfg]) == EXIT_VALIDATION
        assert "FAIL stability" in capsys.readouterr().out

    def test_validate_rotating_wave(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chain.n = 4\nchain.model = rotating_wave\n")
        assert main(["validate", "--config", cfg]) == EXIT_OK
        assert "PASS rotating-wave-null: max error 0.000e+00" in capsys.readouterr().out

    def test_unstable_sweep_is_validation_failure(self, tmp_path):
        cfg = write_config(tmp_path, "chain.kappa = 0.8\n")
        assert main(["sweep", "--config", cfg]) == EXIT_VALIDATION

    def test_usage_errors(self, tmp_path):
        assert main(["explode"]) == EXIT_USAGE
        assert main(["sweep", "--config", write_config(tmp_path, "chain.kapa = 1\n")]) == EXIT_USAGE

    def test_io_errors(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "nope.cfg")]) == EXIT_IO
        cfg = write_config(tmp_path, "sweep.tau_end = 1\nsweep.tau_step = 1\n")
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "no" / "x.csv")]) == EXIT_IO
