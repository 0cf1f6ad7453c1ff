import json
import math

import numpy as np
import pytest

from equirig.cli import main
from equirig.numerics import PI
from equirig.spherical import angular_width


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def profile_csv(tmp_path):
    r = np.linspace(4.0, 6.0, 801)
    f0 = np.exp(-((r - 5.0) ** 2) / (2 * 0.01**2))
    path = tmp_path / "profile.csv"
    path.write_text("r,f0\n" + "\n".join(f"{a!r},{b!r}" for a, b in zip(r.tolist(), f0.tolist())) + "\n")
    return path


class TestRigidityCommand:
    def test_explicit_list(self, capsys):
        code, out, err = run(capsys, "rigidity", "--m", "0", "1", "10")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "m,R_product,R_gamma,R_quadrature,R_asymptotic,defect,spread"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == pytest.approx(0.636620, abs=1e-6)

    def test_range_with_stride(self, capsys):
        code, out, _ = run(capsys, "rigidity", "--m-max", "100", "--stride", "10")
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 11
        defects = [float(r.split(",")[5]) for r in rows]
        assert all(a > b for a, b in zip(defects, defects[1:]))

    def test_negative_m_usage_error(self, capsys):
        code, out, err = run(capsys, "rigidity", "--m", "-3")
        assert code == 2
        assert out == ""
        assert "non-negative" in err

    def test_m_and_m_max_conflict(self, capsys):
        code, _, err = run(capsys, "rigidity", "--m", "1", "--m-max", "5")
        assert code == 2

    def test_json_carries_manifest(self, capsys):
        code, out, _ = run(capsys, "rigidity", "--m", "0", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["manifest"]["command"] == "rigidity"
        assert payload["manifest"]["parameters"]["m"] == [0]
        assert "tool_version" in payload["manifest"]
        assert payload["columns"][0] == "m"


class TestDensityCommand:
    def test_trapezoid_normalization(self, capsys):
        code, out, _ = run(capsys, "density", "--m", "0", "2", "8", "32", "--points", "721")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,P_m0,P_m2,P_m8,P_m32"
        data = np.array([[float(c) for c in row.split(",")] for row in lines[1:]])
        assert data.shape == (721, 5)
        dtheta = PI / 720
        for col in range(1, 5):
            trap = np.trapezoid(data[:, col], dx=dtheta)
            assert trap == pytest.approx(1.0, abs=1e-4)

    def test_two_points_are_poles(self, capsys):
        code, out, _ = run(capsys, "density", "--m", "8", "--points", "2")
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 2
        assert all(float(r.split(",")[1]) == 0.0 for r in rows)

    def test_gaussian_columns_agree_at_width(self, capsys):
        code, out, _ = run(capsys, "density", "--m", "50", "--points", "721", "--gaussian")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,P_m50,gauss_m50"
        data = np.array([[float(c) for c in row.split(",")] for row in lines[1:]])
        for target in (PI / 2 - angular_width(50), PI / 2 + angular_width(50)):
            i = int(np.argmin(np.abs(data[:, 0] - target)))
            assert data[i, 2] == pytest.approx(data[i, 1], rel=0.02)

    def test_bad_points(self, capsys):
        code, _, err = run(capsys, "density", "--m", "1", "--points", "1")
        assert code == 2


class TestPiCommand:
    def test_small_table(self, capsys):
        code, out, _ = run(capsys, "pi", "--m-max", "4")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "m,pi_estimate,error,scaled_error"
        last = lines[-1].split(",")
        expected = 2 * (4 / 3) * (16 / 15) * (36 / 35) * (64 / 63)
        assert float(last[1]) == pytest.approx(expected, rel=1e-14)

    def test_m0(self, capsys):
        code, out, _ = run(capsys, "pi", "--m-max", "0")
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 1
        assert float(rows[0].split(",")[1]) == 2.0

    def test_cap_is_computation_error(self, capsys):
        code, out, err = run(capsys, "pi", "--m-max", "200000")
        assert code == 1
        assert out == ""
        assert "cap" in err

    def test_scaled_error_law(self, capsys):
        code, out, _ = run(capsys, "pi", "--m-max", "10000")
        last = out.strip().splitlines()[-1].split(",")
        assert float(last[3]) == pytest.approx(PI / 4, rel=0.05)


class TestSampleCommand:
    def test_summary_moment(self, capsys):
        code, out, _ = run(capsys, "sample", "--m", "5", "--count", "1000000", "--seed", "7")
        assert code == 0
        summary = {
            line[2:].split("=")[0]: float(line.split("=")[1])
            for line in out.strip().splitlines()
            if line.startswith("# ")
        }
        assert abs(summary["mean_cos2"] - 1 / 13) < 4 * summary["se_cos2"]
        assert summary["target_cos2"] == pytest.approx(1 / 13, rel=1e-12)

    def test_determinism(self, capsys):
        _, out1, _ = run(capsys, "sample", "--m", "0", "--count", "10", "--seed", "1")
        _, out2, _ = run(capsys, "sample", "--m", "0", "--count", "10", "--seed", "1")
        assert out1 == out2

    def test_csc_target(self, capsys):
        code, out, _ = run(capsys, "sample", "--m", "20", "--count", "1000000", "--seed", "3")
        summary = {
            line[2:].split("=")[0]: float(line.split("=")[1])
            for line in out.strip().splitlines()
            if line.startswith("# ")
        }
        assert abs(summary["mean_csc"] - summary["target_csc"]) < 4 * summary["se_csc"]

    def test_m0_has_no_csc_summary(self, capsys):
        _, out, _ = run(capsys, "sample", "--m", "0", "--count", "10", "--seed", "1")
        assert "mean_csc" not in out

    def test_bad_count(self, capsys):
        code, _, err = run(capsys, "sample", "--m", "1", "--count", "0")
        assert code == 2


class TestShellCommand:
    def test_thin_bump(self, capsys, profile_csv):
        code, out, err = run(
            capsys, "shell", "--profile", str(profile_csv), "--mass", "2.0",
            "--radial-energy", "0.0", "--ell-max", "3",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "ell,energy"
        meta = {
            line[2:].split("=")[0]: float(line.split("=")[1])
            for line in lines
            if line.startswith("# ")
        }
        assert meta["R_eff"] == pytest.approx(5.0, rel=1e-3)
        energies = [float(r.split(",")[1]) for r in lines[1:5]]
        spacing = energies[1] - energies[0]
        assert spacing == pytest.approx(1.0 / (2.0 * meta["R_eff"] ** 2), rel=1e-12)

    def test_ell_max_zero(self, capsys, profile_csv):
        code, out, _ = run(
            capsys, "shell", "--profile", str(profile_csv), "--mass", "1.0",
            "--radial-energy", "0.25", "--ell-max", "0",
        )
        rows = [l for l in out.strip().splitlines() if l and not l.startswith("#")][1:]
        assert len(rows) == 1
        assert float(rows[0].split(",")[1]) == 0.25

    def test_malformed_csv(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("r,f0\n1,1\n2,xyz\n3,1\n4,1\n")
        code, out, err = run(capsys, "shell", "--profile", str(bad), "--mass", "1.0")
        assert code == 1
        assert "row 3" in err


class TestOutputPlumbing:
    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "table.csv"
        code, out, _ = run(capsys, "rigidity", "--m", "0", "--out", str(dest))
        assert code == 0
        assert out == ""
        assert dest.read_text().startswith("m,")

    def test_precision(self, capsys):
        _, out5, _ = run(capsys, "pi", "--m-max", "0", "--precision", "5")
        assert "1.1416" in out5

    def test_bad_precision(self, capsys):
        code, _, err = run(capsys, "rigidity", "--m", "0", "--precision", "30")
        assert code == 2

    def test_unknown_argument_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["rigidity", "--bogus"])
        assert exc.value.code == 2

    def test_byte_identical_reruns_all_commands(self, capsys, tmp_path, profile_csv):
        commands = [
            ["rigidity", "--m", "0", "3", "10"],
            ["density", "--m", "2", "--points", "11", "--gaussian"],
            ["pi", "--m-max", "12"],
            ["sample", "--m", "4", "--count", "100", "--seed", "42"],
            ["shell", "--profile", str(profile_csv), "--mass", "1.0", "--ell-max", "2"],
        ]
        for argv in commands:
            for fmt in ("csv", "json"):
                a = tmp_path / "a.out"
                b = tmp_path / "b.out"
                assert main(argv + ["--format", fmt, "--out", str(a)]) == 0
                assert main(argv + ["--format", fmt, "--out", str(b)]) == 0
                capsys.readouterr()
                assert a.read_bytes() == b.read_bytes()
