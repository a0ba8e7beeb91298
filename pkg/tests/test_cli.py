import json
import subprocess
import sys

import pytest

from symgt.cli import ALPHA_HEADER, TABLE1_HEADER, main
from symgt.superimposed_codes import load_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def matrix_file(tmp_path):
    def write(text):
        path = tmp_path / "code.txt"
        path.write_text(text)
        return str(path)

    return write


class TestTable1:
    def test_m2(self, capsys):
        code, out, _ = run(capsys, "table1", "--m-max", "2")
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == TABLE1_HEADER
        assert lines[1].startswith("2,0.500,0,1,0.75")

    def test_m3_rows(self, capsys):
        _, out, _ = run(capsys, "table1", "--m-max", "3")
        rows = [line.split(",")[:4] for line in out.strip().splitlines()[1:]]
        assert ["3", "0.351", "0", "1"] in rows and ["3", "0.649", "1", "2"] in rows

    def test_m13_rows(self, capsys):
        _, out, _ = run(capsys, "table1", "--m-max", "13")
        rows = [tuple(line.split(",")[:4]) for line in out.strip().splitlines()[1:]]
        assert ("13", "0.161", "1", "2") in rows and ("13", "0.839", "10", "11") in rows
        assert rows == sorted(rows, key=lambda r: (int(r[0]), float(r[1])))

    def test_byte_stable(self, capsys):
        _, a, _ = run(capsys, "table1", "--m-max", "4")
        _, b, _ = run(capsys, "table1", "--m-max", "4")
        assert a == b

    def test_json(self, capsys):
        _, out, _ = run(capsys, "table1", "--m-max", "3", "--format", "json")
        rows = json.loads(out)
        assert {"m", "p_star", "eta1_star", "eta2_star", "alpha"} <= set(rows[0])

    def test_usage(self, capsys):
        code, out, err = run(capsys, "table1", "--m-max", "1")
        assert code == 2 and out == "" and "m-max" in err


class TestAlpha:
    def test_noise_free(self, capsys):
        _, out, _ = run(capsys, "alpha", "--m-max", "3")
        lines = out.strip().splitlines()
        assert lines[0] == ALPHA_HEADER
        m2 = [float(x) for x in lines[1].split(",")]
        m3 = [float(x) for x in lines[2].split(",")]
        assert m2[2] / m2[1] == pytest.approx(1.5, abs=0.01)
        assert m3[3] / m3[2] == pytest.approx(1.4, abs=0.05)

    def test_noisy(self, capsys):
        _, out, _ = run(capsys, "alpha", "--m-max", "2", "--q", "0.75")
        m, a, s, g = out.strip().splitlines()[1].split(",")
        assert g == ""
        assert float(s) / float(a) == pytest.approx(4.5, abs=0.25)

    def test_model_subset(self, capsys):
        _, out, _ = run(capsys, "alpha", "--m-max", "2", "--model", "sgt")
        assert out.strip().splitlines()[1] == "2,,0.75,"

    def test_noisy_ggt_rejected(self, capsys):
        code, _, _ = run(capsys, "alpha", "--m-max", "2", "--q", "0.5", "--model", "ggt")
        assert code == 2


class TestVerify:
    def test_identity(self, capsys, matrix_file):
        code, out, _ = run(capsys, "verify", "--file", matrix_file("100\n010\n001\n"), "--property", "separable", "--m", "2")
        assert code == 0 and json.loads(out)["verdict"] is True

    def test_cross(self, capsys, matrix_file):
        code, out, _ = run(capsys, "verify", "--file", matrix_file("0101\n0110\n"), "--property", "separable", "--m", "2")
        payload = json.loads(out)
        assert code == 1 and payload["verdict"] is False
        assert payload["counterexample"]["sum_x"] == payload["counterexample"]["sum_y"] == "22"

    def test_hamming(self, capsys, matrix_file):
        code, out, _ = run(capsys, "verify", "--file", matrix_file("1010101\n0110011\n0001111\n"), "--property", "dmin5")
        assert code == 1 and json.loads(out)["counterexample"]["dependent_columns"] == [0, 1, 2]

    def test_disjunct(self, capsys, matrix_file):
        code, out, _ = run(capsys, "verify", "--file", matrix_file("0101\n0110\n"), "--property", "disjunct", "--m", "2")
        assert code == 1 and json.loads(out)["counterexample"]["set_x"] == [0]

    @pytest.mark.parametrize("text", ["10\n0\n", "12\n"])
    def test_bad_file(self, capsys, matrix_file, text):
        code, out, _ = run(capsys, "verify", "--file", matrix_file(text), "--property", "dmin5")
        assert code == 2 and out == ""

    def test_missing_file(self, capsys):
        assert run(capsys, "verify", "--file", "/nonexistent", "--property", "dmin5")[0] == 2

    def test_guard(self, capsys, matrix_file):
        text = "".join("".join("1" if i == j else "0" for j in range(21)) + "\n" for i in range(21))
        path = matrix_file(text)
        assert run(capsys, "verify", "--file", path, "--property", "disjunct", "--m", "2")[0] == 2
        assert run(capsys, "verify", "--file", path, "--property", "disjunct", "--m", "1", "--force")[0] == 0


class TestConstruct:
    @pytest.mark.parametrize("k,shape", [(4, (8, 15)), (3, (6, 7))])
    def test_shape(self, capsys, k, shape):
        code, out, _ = run(capsys, "construct", "bch", "--k", str(k))
        assert code == 0 and load_matrix(out).shape == shape

    def test_out_of_range(self, capsys):
        assert run(capsys, "construct", "bch", "--k", "1")[0] == 2


class TestBounds:
    def test_disjunct(self, capsys):
        _, out, _ = run(capsys, "bounds", "disjunct_maxN", "--n", "50", "--m", "2")
        d = json.loads(out)
        assert d["kind"] == "disjunct_maxN" and abs(d["exact"] - 380) <= 2
        assert {"kind", "exact", "asymptotic", "m", "model"} <= set(d)

    def test_sufficient(self, capsys):
        _, out, _ = run(capsys, "bounds", "sufficient_n", "--N", "100", "--m", "2", "--model", "sgt", "--p", "0.5")
        assert json.loads(out)["integer"] == 9

    def test_rate_ratio(self, capsys):
        _, out, _ = run(capsys, "bounds", "rate_ratio", "--m", "2")
        assert json.loads(out)["exact"] == pytest.approx(2.1544, abs=5e-5)

    def test_estimates(self, capsys):
        _, out, _ = run(capsys, "bounds", "gv_estimate", "--r", "12")
        assert json.loads(out)["asymptotic"] == pytest.approx(29.07, abs=5e-3)
        _, out, _ = run(capsys, "bounds", "sphere_estimate", "--r", "12")
        assert json.loads(out)["asymptotic"] == pytest.approx(17.71, abs=5e-3)

    def test_other_kinds(self, capsys):
        for argv in (["separable_maxN", "--n", "30"], ["disjunct_maxN_agt", "--n", "30", "--m", "2"], ["necessary_n", "--N", "50", "--m", "3", "--model", "ggt", "--eta1", "0", "--eta2", "1"]):
            code, out, _ = run(capsys, "bounds", *argv)
            assert code == 0 and "exact" in json.loads(out)

    def test_usage(self, capsys):
        assert run(capsys, "bounds", "sufficient_n", "--N", "100")[0] == 2
        assert run(capsys, "bounds", "nonsense")[0] == 2
        assert run(capsys, "bounds", "disjunct_maxN", "--n", "1", "--m", "2")[0] == 2


class TestSimulate:
    args = ["simulate", "--N", "20", "--m", "2", "--n", "8", "--trials", "200"]

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, *self.args, "--seed", "7")
        _, b, _ = run(capsys, *self.args, "--seed", "7")
        assert a == b
        d = json.loads(a)
        assert d["successes"] + d["ambiguities"] + d["wrong_sets"] == 200

    def test_zero_tests(self, capsys):
        _, out, _ = run(capsys, "simulate", "--N", "64", "--m", "2", "--n", "0", "--trials", "5")
        assert json.loads(out)["error_rate"] == 1.0

    def test_csv(self, capsys):
        _, out, _ = run(capsys, *self.args, "--format", "csv")
        assert out.splitlines()[0] == "n,trials,successes,ambiguities,wrong_sets,error_rate"

    def test_invalid(self, capsys):
        assert run(capsys, "simulate", "--N", "5", "--m", "5", "--n", "3")[0] == 2
        assert run(capsys, "simulate", "--N", "5", "--m", "2", "--n", "3", "--q", "2")[0] == 2
        assert run(capsys)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "symgt", "construct", "bch", "--k", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.splitlines()) == 4
