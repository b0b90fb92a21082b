"""
End-to-end tests for the pwlab command line
"""
import json

import pytest

from src.reports.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from src.reports.output import REPORT_NAME


def run(tmp_path, *args, out="run"):
    out_dir = tmp_path / out
    return main([*args, "--out", str(out_dir)]), out_dir


class TestParser:
    """Test cases for argument parsing"""

    def test_scenario_choices(self):
        """Test an unknown scenario is an argparse error"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["hydrogen"])

    def test_verbosity_exclusive(self):
        """Test --verbose and --quiet cannot be combined"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["equivariance", "--verbose", "--quiet"])


class TestMain:
    """Test cases for main and its exit codes"""

    def test_measurement_chain(self, tmp_path):
        """Test a passing run writes the report and the distribution"""
        code, out_dir = run(tmp_path, "measurement-chain", "--grid-n", "64")
        assert code == EXIT_OK
        report = json.loads((out_dir / REPORT_NAME).read_text(encoding="utf-8"))
        assert report["error"] is None
        assert report["artifacts"] == ["distribution.csv"]
        assert all(m["passed"] for m in report["metrics"].values())
        lines = (out_dir / "distribution.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "x,x_prime,p"
        assert len(lines) == 1 + 64 * 64

    def test_reproducible(self, tmp_path):
        """Test the same seed writes byte-identical CSV files"""
        _, first = run(tmp_path, "measurement-chain", "--grid-n", "64", out="a")
        _, second = run(tmp_path, "measurement-chain", "--grid-n", "64", out="b")
        assert (first / "distribution.csv").read_bytes() == (second / "distribution.csv").read_bytes()

    def test_ghose_two_slit(self, tmp_path):
        """Test the sum-law scenario with a small sample"""
        code, out_dir = run(tmp_path, "ghose-two-slit", "--samples", "1000")
        assert code == EXIT_OK
        header = (out_dir / "velocity_field.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "x1,x2,v1,v2,vsum,predicted_vsum"
        lines = (out_dir / "trajectories.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,x_0,x_1"
        t = [float(row.split(",")[0]) for row in lines[1:]]
        assert all(b > a for a, b in zip(t, t[1:]))

    def test_invalid_key(self, tmp_path):
        """Test an unknown config key exits 2 without writing anything"""
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour=blue\n")
        code, out_dir = run(tmp_path, "measurement-chain", "--config", str(cfg))
        assert code == EXIT_CONFIG
        assert not out_dir.exists()

    def test_invalid_domain(self, tmp_path):
        """Test a malformed domain exits 2"""
        code, out_dir = run(tmp_path, "equivariance", "--domain", "8")
        assert code == EXIT_CONFIG
        assert not out_dir.exists()

    def test_invalid_thread_cap(self, tmp_path, monkeypatch):
        """Test a malformed PWLAB_THREADS exits 2 without writing anything"""
        monkeypatch.setenv("PWLAB_THREADS", "abc")
        code, out_dir = run(tmp_path, "equivariance")
        assert code == EXIT_CONFIG
        assert not out_dir.exists()

    def test_numerical_failure(self, tmp_path):
        """Test a domain too small for the ground state exits 3 with the error recorded"""
        code, out_dir = run(tmp_path, "measurement-chain", "--grid-n", "64", "--domain=-2,2")
        assert code == EXIT_NUMERICAL
        report = json.loads((out_dir / REPORT_NAME).read_text(encoding="utf-8"))
        assert report["error"]["type"] == "DomainTooSmallError"
        assert report["artifacts"] == []
        assert not (out_dir / "distribution.csv").exists()

    @pytest.mark.slow
    def test_neumaier_correlations(self, tmp_path):
        """Test the correlation scenario at reduced size"""
        code, out_dir = run(tmp_path, "neumaier-correlations", "--grid-n", "256", "--samples", "20000")
        assert code == EXIT_OK
        report = json.loads((out_dir / REPORT_NAME).read_text(encoding="utf-8"))
        assert report["metrics"]["sign_discrepancy"]["value"] == pytest.approx(1.0, abs=2e-6)

    @pytest.mark.slow
    def test_equivariance(self, tmp_path):
        """Test the equivariance scenario at default size"""
        code, out_dir = run(tmp_path, "equivariance")
        assert code == EXIT_OK
        assert (out_dir / "trajectories.csv").exists()
