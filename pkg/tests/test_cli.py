"""
Command-line tests: exit codes, output formats and settings precedence.
"""

import json

import pytest

from app.main import RunConfig, build_parser, main, make_config
from core.errors import UsageError
from core.settings_manager import SettingsManager


@pytest.fixture(autouse=True)
def no_user_settings(isolated_settings):
    """Keep the developer's own settings out of CLI runs."""
    return isolated_settings


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.cli
class TestExitCodes:
    """Test the 0/1/2 exit code contract."""

    def test_verify_pass(self, capsys):
        """Test a passing verification exits 0 with a JSON report."""
        code, out, _ = run_cli(capsys, "verify", "n2")
        assert code == 0
        assert json.loads(out)["status"] == "pass"

    def test_verify_fail_exits_2(self, capsys):
        """Test a failing identity exits 2."""
        code, out, _ = run_cli(capsys, "verify", "control_nonleibniz")
        assert code == 2
        assert json.loads(out)["witness"]["triple"] == [0, 0, 0]

    def test_hnn_status_names_degree(self, capsys):
        """Test the no-collapse verdict spells out the truncation degree."""
        code, out, _ = run_cli(
            capsys, "hnn", "n2", "--subspace", "1,0", "--map", "1", "--degree", "4"
        )
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "no-collapse-up-to-4"
        assert data["degree"] == 4

    def test_rejected_hnn_exits_2(self, capsys):
        """Test a map that is not a derivation exits 2."""
        code, out, _ = run_cli(
            capsys, "hnn", "n2", "--subspace", "1,0;0,1", "--map", "1", "--degree", "2"
        )
        assert code == 2
        assert json.loads(out)["status"] == "rejected"

    def test_unknown_algebra_exits_1(self, capsys):
        """Test a missing input is a usage error."""
        code, out, err = run_cli(capsys, "verify", "no_such_algebra")
        assert code == 1
        assert out == ""
        assert "error:" in err

    def test_degree_above_cap_exits_1(self, capsys):
        """Test the degree cap is enforced before any work."""
        code, _, err = run_cli(
            capsys, "hnn", "n2", "--subspace", "1,0", "--map", "1", "--degree", "9"
        )
        assert code == 1
        assert "--force" in err

    def test_malformed_command_line_exits_1(self, capsys):
        """Test argparse errors use the usage exit code."""
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 1
        with pytest.raises(SystemExit) as exc:
            main(["derivations", "n2", "--kind", "lie"])
        assert exc.value.code == 1

    def test_negative_verdict_exits_0(self, capsys):
        """Test no-solution is a valid answer."""
        code, out, _ = run_cli(capsys, "solve", "n2", "n2_no_root")
        assert code == 0
        assert json.loads(out)["status"] == "no-solution"


@pytest.mark.cli
class TestOutput:
    """Test rendering and determinism."""

    @pytest.mark.parametrize(
        "argv",
        [
            ("verify", "sl2_q", "--seed", "7"),
            ("verify", "control_nonleibniz"),
            ("analyze", "sl2_q", "--subspace", "B=1,0,0;0,0,1"),
            ("derivations", "solvable3"),
            ("hnn", "n2", "--subspace", "1,0", "--map", "1", "--degree", "3"),
            ("hnn", "n2", "--subspace", "1,0;0,1", "--map", "1", "--degree", "2"),
            ("solve", "n2", "n2_square_root"),
            ("solve", "n2", "n2_no_root", "--workers", "3"),
            ("solve", "abelian2", "--mode", "divide", "--x", "1,0", "--b", "0,1"),
            ("free", "[[x1, x2], x3]"),
            ("fixtures",),
        ],
    )
    def test_json_is_byte_identical(self, capsys, argv):
        """Test two runs with the same seed print the same bytes."""
        first_code, first, _ = run_cli(capsys, *argv)
        second_code, second, _ = run_cli(capsys, *argv)
        assert first_code == second_code
        assert first == second
        assert json.loads(first)["schema_version"] == "1.0"

    def test_text_format(self, capsys):
        """Test the text rendering starts with command and status."""
        code, out, _ = run_cli(capsys, "free", "[x1, [x2, x3]]", "--format", "text")
        assert code == 0
        assert out.splitlines()[0] == "free: pass"

    def test_divide(self, capsys):
        """Test division from the command line."""
        code, out, _ = run_cli(
            capsys,
            "solve",
            "n2",
            "--mode",
            "divide",
            "--x",
            "0,1",
            "--b",
            "1,0",
            "--side",
            "left",
            "--degree",
            "2",
        )
        assert code == 0
        assert json.loads(out)["model_kind"] == "exact"


@pytest.mark.cli
class TestSettingsPrecedence:
    """Test flags over settings over built-in defaults."""

    def test_settings_file_applies(self, capsys, isolated_settings):
        """Test a stored output format is used."""
        isolated_settings.write_text(json.dumps({"format": "text"}), encoding="utf-8")
        _, out, _ = run_cli(capsys, "fixtures")
        assert out.startswith("fixtures: pass")

    def test_flag_overrides_settings(self, capsys, isolated_settings):
        """Test an explicit flag beats the stored value."""
        isolated_settings.write_text(json.dumps({"format": "text"}), encoding="utf-8")
        _, out, _ = run_cli(capsys, "fixtures", "--format", "json")
        assert json.loads(out)["command"] == "fixtures"

    def test_make_config(self, temp_dir):
        """Test degree resolution order."""
        path = temp_dir / "s.json"
        path.write_text(json.dumps({"degree": 3}), encoding="utf-8")
        settings = SettingsManager(path)
        parser = build_parser()
        assert make_config(parser.parse_args(["verify", "n2"]), settings).degree == 3
        flagged = parser.parse_args(["verify", "n2", "--degree", "5"])
        assert make_config(flagged, settings).degree == 5
        assert make_config(flagged, settings).inputs == ("n2",)

    def test_run_config_validates(self):
        """Test invalid fields and formats are usage errors."""
        with pytest.raises(UsageError):
            RunConfig("verify", field="gfp:4")
        with pytest.raises(UsageError):
            RunConfig("verify", output_format="yaml")
