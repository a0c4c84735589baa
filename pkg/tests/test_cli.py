import io
import json

import pytest

from tenfold.config import get_settings
from tenfold.exceptions import SpecFileNotFoundError, UsageError
from tenfold.main import execute, main, parse_args, parse_params, parse_range
from tenfold.models.symmetry_models import AZClass

D_ID = ["--model", "d_id_wave", "--set", "mu=2,t=1,dx2y2=1,dxy=1", "--grid", "16"]
KITAEV = ["--model", "kitaev_chain", "--set", "mu=0.5,t=1,delta=1", "--grid", "16"]


def run(argv):
    out = io.StringIO()
    code = execute(parse_args(argv), out)
    return code, out.getvalue()


class TestParsing:
    def test_table_json(self):
        cfg = parse_args(["table", "--format", "json"])
        assert cfg.command == "table" and cfg.output_format == "json"

    def test_invariant_params(self):
        cfg = parse_args(["invariant", "--model", "chiral_p_wave", "--set", "mu=2,t=1,delta=1", "--class", "D"])
        assert cfg.params == {"mu": 2.0, "t": 1.0, "delta": 1.0}
        assert cfg.az_class == AZClass.D
        assert cfg.grid_size == 32

    def test_sweep_range_with_negative_start(self):
        cfg = parse_args([
            "sweep", "--model", "kitaev_chain", "--set", "t=1,delta=1",
            "--axis", "mu", "--range", "-2:2:0.05", "--grid", "32",
        ])
        values = cfg.sweep_values()
        assert len(values) == 81
        assert values[0] == -2.0 and values[-1] == 2.0
        assert 1.0 in values and -1.0 in values

    def test_kr_flags(self):
        cfg = parse_args(["kr", "--space", "torus", "--i", "4", "--d", "3", "--reduced"])
        assert (cfg.space, cfg.degree, cfg.dimension, cfg.reduced) == ("torus", 4, 3, True)

    def test_params_helper(self):
        assert parse_params("") == {}
        assert parse_params("mu=-1.5, t=2") == {"mu": -1.5, "t": 2.0}
        with pytest.raises(UsageError):
            parse_params("mu")
        with pytest.raises(UsageError):
            parse_params("mu=abc")

    def test_range_helper(self):
        assert parse_range("0:1:0.25") == (0.0, 1.0, 0.25)
        with pytest.raises(UsageError):
            parse_range("0:1")

    def test_missing_model(self):
        with pytest.raises(UsageError):
            parse_args(["classify"])

    def test_odd_grid(self):
        with pytest.raises(UsageError):
            parse_args(["classify", "--model", "kitaev_chain", "--grid", "31"])

    def test_unknown_class(self):
        with pytest.raises(UsageError):
            parse_args(["invariant", "--model", "kitaev_chain", "--class", "E8"])

    def test_bad_step(self):
        with pytest.raises(UsageError):
            parse_args(["sweep", "--model", "kitaev_chain", "--axis", "mu", "--range", "0:1:0"])

    def test_missing_spec(self, tmp_path):
        with pytest.raises(SpecFileNotFoundError):
            parse_args(["classify", "--spec", str(tmp_path / "none.toml")])


class TestCommands:
    def test_table_json(self):
        code, text = run(["table", "--format", "json"])
        assert code == 0
        rows = json.loads(text)
        assert len(rows) == 24
        assert set(rows[0]) == {"class", "d", "group", "ko_label", "index_tag"}
        d2 = next(r for r in rows if r["class"] == "D" and r["d"] == 2)
        assert d2["group"] == "Z"

    def test_table_text(self):
        code, text = run(["table"])
        assert code == 0
        lines = text.splitlines()
        assert lines[0].split()[:3] == ["class", "d", "group"]
        assert lines[0].split()[-1] == "cotangent"
        assert len(lines) == 25

    def test_table_csv(self):
        _, text = run(["table", "--format", "csv"])
        assert text.splitlines()[0] == "class,d,group,ko_label,index_tag"

    def test_kr_torus(self):
        assert run(["kr", "--space", "torus", "--i", "4", "--d", "3", "--reduced"]) == (0, "Z2^4\n")

    def test_kr_json(self):
        _, text = run(["kr", "--i", "5", "--d", "1", "--reduced", "--format", "json"])
        payload = json.loads(text)
        assert payload["group"] == "Z" and payload["theory"] == "KR"

    def test_kq(self):
        assert run(["kr", "--kq", "--i", "0", "--d", "2", "--reduced"])[1] == "Z2\n"

    def test_classify_d_id(self):
        code, text = run(["classify", *D_ID])
        assert code == 0
        assert text.splitlines()[0] == "C (PHS -1 witness: pauli:y K)"

    def test_classify_lists_alternatives(self):
        _, text = run(["classify", *KITAEV])
        lines = text.splitlines()
        assert lines[0].startswith("BDI (")
        assert lines[1:] == ["also consistent: D", "also consistent: AI", "also consistent: AIII"]

    def test_classify_json(self):
        _, text = run(["classify", *D_ID, "--format", "json"])
        payload = json.loads(text)
        assert payload["class"] == "C"
        assert payload["signature"] == [0, -1, 0]

    def test_invariant_p_wave(self):
        code, text = run(["invariant", "--model", "chiral_p_wave", "--set", "mu=2,t=1,delta=1", "--class", "D"])
        assert code == 0
        fields = dict(part.split("=", 1) for part in text.split())
        assert fields["kind"] == "Integer"
        assert abs(int(fields["value"])) == 1
        assert fields["grid"] == "32"

    def test_invariant_json(self):
        _, text = run(["invariant", *KITAEV, "--class", "D", "--format", "json"])
        payload = json.loads(text)
        assert set(payload) == {"kind", "value", "raw", "grid", "residual"}
        assert payload["kind"] == "Mod2" and payload["value"] == 1

    def test_invariant_json_rounds_floats(self):
        _, text = run(["invariant", "--model", "chiral_p_wave", "--set", "mu=1,t=1,delta=1", "--grid", "16",
                       "--format", "json"])
        payload = json.loads(text)
        for key in ("raw", "residual"):
            assert payload[key] == float(f"{payload[key]:.12g}")

    def test_classify_uses_registered_witnesses(self):
        code, text = run(["classify", "--model", "diii_superposition", "--set", "mu=2,t=1,delta=1", "--grid", "16"])
        assert code == 0
        first = text.splitlines()[0]
        assert first.startswith("DIII (")
        assert "pauli:0*y" in first

    def test_inconsistent_class_request(self):
        with pytest.raises(UsageError):
            run(["invariant", *D_ID, "--class", "D"])

    def test_spec_file_route(self, tmp_path):
        path = tmp_path / "chain.toml"
        path.write_text(
            '[model]\nname = "kitaev_chain"\n\n[params]\nmu = 0.5\nt = 1.0\ndelta = 1.0\n\n'
            '[symmetry.phs]\nu = "pauli:x"\n'
        )
        _, text = run(["classify", "--spec", str(path), "--grid", "16"])
        assert text.splitlines()[0] == "D (PHS +1 witness: pauli:x K)"

    def test_deterministic(self):
        argv = ["invariant", "--model", "chiral_p_wave", "--set", "mu=1,t=1,delta=1", "--grid", "16"]
        assert run(argv) == run(argv)


class TestMain:
    def test_success(self, capsys):
        assert main(["kr", "--i", "4", "--d", "2", "--reduced"]) == 0
        assert capsys.readouterr().out == "Z2\n"

    def test_usage_error_exit(self, capsys):
        assert main(["classify"]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_spec_exit(self, tmp_path):
        assert main(["classify", "--spec", str(tmp_path / "none.toml")]) == 3

    def test_gapless_exit(self, capsys):
        assert main(["invariant", "--model", "kitaev_chain", "--set", "mu=1,t=1,delta=1"]) == 4
        assert capsys.readouterr().out == ""

    def test_unknown_model_exit(self):
        assert main(["classify", "--model", "haldane"]) == 1


class TestSettings:
    def test_environment(self, monkeypatch):
        monkeypatch.setenv("TENFOLD_GRID", "16")
        monkeypatch.setenv("TENFOLD_SWEEP_WORKERS", "2")
        monkeypatch.setenv("TENFOLD_LOG_LEVEL", "debug")
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.grid_size == 16
        assert settings.sweep_workers == 2
        assert settings.log_level == "DEBUG"
        assert parse_args(["classify", "--model", "kitaev_chain"]).grid_size == 16

    def test_defaults(self, monkeypatch):
        for name in ("TENFOLD_GRID", "TENFOLD_SYMMETRY_TOL", "TENFOLD_SWEEP_WORKERS"):
            monkeypatch.delenv(name, raising=False)
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.grid_size == 32
        assert settings.symmetry_tol == 1e-9
