import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

from kepinch.cli import CliUsageError, execute, main, parse_command
from kepinch.service import schemas

GOLDEN = Path(__file__).parent / "data" / "analyze_golden.json"

ANALYZE_ARGV = ["analyze", "--a", "-3", "--b", "-1", "--B", "0.5", "--json"]


class TestParseCommand:
    def test_constants(self):
        cmd = parse_command(["constants"])
        assert cmd.verb == "constants"
        assert cmd.request is None
        assert not cmd.json_output

    def test_analyze_flags(self):
        cmd = parse_command(ANALYZE_ARGV)
        assert cmd.verb == "analyze"
        assert isinstance(cmd.request, schemas.AnalyzeRequest)
        assert (cmd.request.a, cmd.request.b, cmd.request.bmod) == (-3.0, -1.0, 0.5)
        assert cmd.json_output

    def test_oracle_grid_precondition(self):
        argv = ["oracle", "--grid", "0", "--a", "-3", "--b", "-1", "--B", "0.5"]
        with pytest.raises(CliUsageError, match="--grid"):
            parse_command(argv)

    def test_unknown_verb(self):
        with pytest.raises(CliUsageError):
            parse_command(["frobnicate"])

    def test_missing_required_flag(self):
        with pytest.raises(CliUsageError):
            parse_command(["analyze", "--a", "-3", "--b", "-1"])

    def test_unparseable_number(self):
        with pytest.raises(CliUsageError):
            parse_command(["analyze", "--a", "x", "--b", "-1", "--B", "0.5"])

    def test_profile_validation(self):
        with pytest.raises(CliUsageError):
            parse_command(["analyze", "--a", "-3", "--b", "-1", "--B", "7"])

    def test_lambda_range(self):
        with pytest.raises(CliUsageError, match="--lambda"):
            parse_command(["certify", "--lambda", "1.5"])

    def test_chi_names_and_values(self):
        assert parse_command(["certify", "--chi", "guan"]).request.chi == 0.5
        assert parse_command(["certify", "--chi", "value:0.45"]).request.chi == 0.45
        with pytest.raises(CliUsageError, match="--chi"):
            parse_command(["certify", "--chi", "bogus"])
        with pytest.raises(CliUsageError, match="--chi"):
            parse_command(["certify", "--chi", "value:abc"])

    def test_sweep_has_no_json_flag(self):
        with pytest.raises(CliUsageError):
            parse_command(["sweep", "--json"])

    def test_average_sample_floor(self):
        with pytest.raises(CliUsageError, match="--samples"):
            parse_command(["average", "--a", "-3", "--b", "-1", "--B", "0.5", "--samples", "5"])


class TestExecute:
    def test_analyze_matches_golden(self):
        code, text = execute(parse_command(ANALYZE_ARGV))
        assert code == 0
        assert text == GOLDEN.read_text()

    def test_analyze_repeat_is_byte_identical(self):
        first = execute(parse_command(ANALYZE_ARGV))
        second = execute(parse_command(ANALYZE_ARGV))
        assert first == second

    def test_analyze_golden_fields(self):
        _, text = execute(parse_command(ANALYZE_ARGV))
        doc = json.loads(text)
        assert doc["schema_version"] == 1
        assert doc["regime"]["ratio"] == pytest.approx(0.444444, abs=1e-6)
        assert doc["summary"]["k_max"] == -2.25
        assert doc["variational"]["phi"] == 0.5
        assert doc["variational"]["c_const"] == 10.5

    def test_text_mode_uses_nine_significant_digits(self):
        code, text = execute(parse_command(["analyze", "--a", "-3", "--b", "-1", "--B", "0.5"]))
        assert code == 0
        assert "ratio=0.444444444" in text
        assert "k_av=-2.66666667" in text

    def test_constants_table(self):
        code, text = execute(parse_command(["constants"]))
        assert code == 0
        assert "siu-yang" in text and "0.383461546" in text
        assert "improved" in text and "0.473401368" in text
        assert "guan" in text and "0.5" in text

    def test_sweep_csv(self):
        code, text = execute(parse_command(["sweep", "--steps", "5"]))
        assert code == 0
        lines = text.strip().split("\r\n")
        assert lines[0] == "t,ratio,in_sy,in_improved,in_guan,phi,c_const"
        assert len(lines) == 6
        assert lines[1].startswith("0.0,")

    def test_sweep_deterministic(self):
        argv = ["sweep", "--t-min", "0.2", "--t-max", "0.9", "--steps", "17"]
        assert execute(parse_command(argv)) == execute(parse_command(argv))

    def test_certify_exit_codes(self):
        clean = ["certify", "--chi", "improved", "--lambda", "0.1", "--samples", "800", "--seed", "1"]
        code, text = execute(parse_command(clean))
        assert code == 0
        assert "violations: 0" in text
        dirty = ["certify", "--chi", "improved", "--lambda", "0.5", "--samples", "200", "--seed", "1"]
        code, text = execute(parse_command(dirty))
        assert code == 2
        assert "product-ge-one" in text

    def test_certify_reference_invocation(self):
        argv = ["certify", "--chi", "improved", "--lambda", "0.1",
                "--samples", "10000", "--seed", "1", "--json"]
        code, text = execute(parse_command(argv))
        assert code == 0
        doc = json.loads(text)
        assert doc["violation_count"] == 0
        assert doc["min_margin"] > 0

    def test_lemma_test_exit_code(self):
        code, text = execute(parse_command(["lemma-test", "--samples", "3", "--seed", "0"]))
        assert code == 0
        assert "failures: 0" in text

    def test_average_text(self):
        argv = ["average", "--a", "-3", "--b", "-1", "--B", "0.5", "--samples", "2000", "--seed", "3"]
        code, text = execute(parse_command(argv))
        assert code == 0
        assert "closed form  k_av = -2.66666667" in text

    def test_oracle_text(self):
        argv = ["oracle", "--a", "-5", "--b", "-1", "--B", "1", "--grid", "24"]
        code, text = execute(parse_command(argv))
        assert code == 0
        assert "k_min=-5 k_max=-3" in text

    def test_out_file(self, tmp_path):
        out = tmp_path / "report.json"
        code, text = execute(parse_command(ANALYZE_ARGV + ["--out", str(out)]))
        assert code == 0
        assert text == ""
        assert out.read_text() == GOLDEN.read_text()

    def test_out_failure_is_io_error(self, tmp_path):
        target = tmp_path / "missing" / "report.json"
        with pytest.raises(Exception):
            execute(parse_command(ANALYZE_ARGV + ["--out", str(target)]))


class TestMain:
    def test_usage_error_exit_code(self, capsys):
        assert main(["analyze", "--a", "-3"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_success(self, capsys):
        assert main(["constants"]) == 0
        assert "guan" in capsys.readouterr().out

    def test_out_write_failure(self, tmp_path, capsys):
        bad = tmp_path / "nope" / "x.json"
        assert main(ANALYZE_ARGV + ["--out", str(bad)]) == 1
        assert "error" in capsys.readouterr().err


@pytest.mark.slow
def test_cli_against_live_server(tmp_path):
    pytest.importorskip("uvicorn")
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    proc = subprocess.Popen(
        [sys.executable, "-m", "uvicorn", "kepinch.service.app:app", "--port", str(port), "--log-level", "error"],
    )
    try:
        base = f"http://127.0.0.1:{port}"
        for _ in range(100):
            try:
                httpx.get(f"{base}/healthz", timeout=1.0)
                break
            except httpx.HTTPError:
                time.sleep(0.1)
        else:
            raise RuntimeError("service did not come up")
        code, text = execute(parse_command(ANALYZE_ARGV + ["--server", base]))
        assert code == 0
        assert text == GOLDEN.read_text()
    finally:
        proc.terminate()
        proc.wait()
