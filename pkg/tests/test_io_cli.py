import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import MP_EXAMPLE
from dualmat import cli, io
from dualmat.dmatrix import DualMatrix, max_deviation
from dualmat.errors import ParseError
from dualmat.ginv import dual_index_is_one
from dualmat.relations import dcore_leq

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@st.composite
def dual_matrices(draw):
    m = draw(st.integers(0, 4))
    n = draw(st.integers(0, 4))
    parts = [draw(arrays(np.float64, (m, n), elements=finite)) for _ in range(4)]
    return DualMatrix(parts[0] + 1j * parts[1], parts[2] + 1j * parts[3])


class TestJson:
    @given(dual_matrices())
    @settings(max_examples=60)
    def test_round_trip_is_bit_exact(self, A):
        B = io.loads(io.dumps(A))
        assert B.shape == A.shape
        assert A.S.tobytes() == B.S.tobytes() and A.D.tobytes() == B.D.tobytes()

    def test_bare_numbers_and_missing_infinitesimal(self):
        A = io.loads('{"rows": 1, "cols": 2, "standard": [[1, [0, 2]]]}')
        np.testing.assert_array_equal(A.S, [[1, 2j]])
        np.testing.assert_array_equal(A.D, [[0, 0]])

    @pytest.mark.parametrize("text", [
        "not json",
        "[1, 2]",
        '{"rows": 1, "cols": 1}',
        '{"rows": -1, "cols": 1, "standard": []}',
        '{"rows": 1, "cols": 2, "standard": [[1]]}',
        '{"rows": 1, "cols": 1, "standard": [[[1, 2, 3]]]}',
        '{"rows": 1, "cols": 1, "standard": [["x"]]}',
        '{"rows": 1, "cols": 1, "standard": [[true]]}',
        '{"rows": 1, "cols": 1, "standard": [[NaN]]}',
        '{"rows": 2, "cols": 1, "standard": [[1]]}',
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            io.loads(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            io.load_matrix(tmp_path / "absent.json")

    def test_non_finite_refused_on_write(self):
        with pytest.raises(ValueError):
            io.dumps(DualMatrix([[np.inf]], [[0.0]]))

    def test_fixtures_load(self, ex31, ex32, ex4):
        assert ex31.shape == ex32.shape == (4, 4) and ex4.shape == (3, 3)


@pytest.fixture
def fixture_file(tmp_path):
    def write(A, name="a.json"):
        path = tmp_path / name
        io.save_matrix(A, path)
        return str(path)
    return write


def strip_time(report):
    return {k: v for k, v in report.items() if k != "wall_time"}


class TestCommands:
    def test_inverse_of_second_example(self, fixture_file, ex32):
        report, code = cli.run(["inv", fixture_file(ex32), "--kind", "dmpgi"])
        assert code == 0 and report["passed"]
        assert max_deviation(io.matrix_from_json(report["results"]["value"]), MP_EXAMPLE) < 1e-9
        assert set(report) >= {"command", "args", "config", "results", "residuals", "passed", "error",
                               "exit_code", "wall_time"}

    def test_missing_inverse_exits_one(self, fixture_file, ex31):
        report, code = cli.run(["inv", fixture_file(ex31), "--kind", "dmpgi", "--method", "decomposition"])
        assert code == 1 and report["error"]["code"] == "inverse_not_exists"

    def test_rectangular_group_inverse_is_input_error(self, fixture_file, rng):
        path = fixture_file(DualMatrix(rng.standard_normal((2, 3)), np.zeros((2, 3))))
        report, code = cli.run(["inv", path, "--kind", "dggi"])
        assert code == 2 and report["error"]["code"] == "shape_mismatch"

    @pytest.mark.parametrize("argv", [
        ["svd", "/nonexistent/a.json"],
        ["frobnicate"],
        ["inv", "x.json"],
        ["gen", "--kind", "index1"],
        ["gen", "--kind", "index1", "--seed", "1", "-n", "0"],
    ])
    def test_input_errors_exit_two(self, argv):
        report, code = cli.run(argv)
        assert code == 2 and report["error"]["code"] in ("parse_error", "invalid_argument")

    def test_zero_matrix_svd(self, fixture_file):
        report, code = cli.run(["svd", fixture_file(DualMatrix.zeros(3))])
        assert code == 0 and report["results"]["sigma"] == []

    @pytest.mark.parametrize("form", ["basic", "partitioned", "refined"])
    def test_hsd_forms(self, fixture_file, ex31, form):
        report, code = cli.run(["hsd", fixture_file(ex31), "--form", form])
        assert code == 0
        assert report["residuals"]["reconstruction"] < 1e-12

    def test_check_suites(self, fixture_file, ex4):
        path = fixture_file(ex4)
        report, code = cli.run(["check", path, "--suite", "existence"])
        assert code == 0
        report, code = cli.run(["check", path, "--suite", "orders"])
        assert code == 0
        report, code = cli.run(["check", path, "--suite", "identities"])
        # two group identities do not hold for this matrix
        failing = {k for k, v in report["residuals"].items() if v >= 1e-8}
        assert code == 1 and failing == {"group:(f) (A#)+A#A=A", "group:(g) (A*)#=(A+)#",
                                         "coincidence:N=#", "coincidence:N=core", "coincidence:#=core",
                                         "coincidence:L=0", "self_inverse:A=A#", "self_inverse:A=Acore",
                                         "self_inverse:A*=A#", "self_inverse:A*=Acore",
                                         "self_inverse:(S1K)^2=I", "self_inverse:L=0", "self_inverse:S1=I"}

    def test_gen_pair_and_order(self, tmp_path):
        out = tmp_path / "pair.json"
        report, code = cli.run(["gen", "--kind", "dcore-pair", "-n", "6", "--seed", "1", "--output", str(out)])
        assert code == 0
        a, b = tmp_path / "pair_A.json", tmp_path / "pair_B.json"
        assert report["results"]["files"] == [str(a), str(b)]
        assert dcore_leq(io.load_matrix(a), io.load_matrix(b)).holds
        for kind in ("dcore", "dminus"):
            report, code = cli.run(["order", str(a), str(b), "--kind", kind])
            assert code == 0 and report["passed"]
        _, code = cli.run(["order", str(b), str(a), "--kind", "dcore"])
        assert code == 1

    def test_gen_self_verified(self, tmp_path):
        out = tmp_path / "m.json"
        _, code = cli.run(["gen", "--kind", "index1", "-n", "5", "--seed", "42", "--output", str(out)])
        assert code == 0 and dual_index_is_one(io.load_matrix(out)).exists

    def test_deterministic_reports(self, fixture_file, ex31):
        path = fixture_file(ex31)
        for argv in (["svd", path], ["inv", path, "--kind", "ndmpi"], ["gen", "--kind", "index1", "--seed", "3"]):
            a, _ = cli.run(argv)
            b, _ = cli.run(argv)
            assert json.dumps(strip_time(a), sort_keys=True) == json.dumps(strip_time(b), sort_keys=True)

    def test_tolerance_from_environment(self, fixture_file, rng, monkeypatch):
        # rounding leaves residuals near 1e-16 on a random input, above a 1e-30 tolerance
        path = fixture_file(DualMatrix(rng.standard_normal((4, 4)), rng.standard_normal((4, 4))))
        monkeypatch.setenv("DUALMAT_TOL", "1e-30")
        report, code = cli.run(["inv", path, "--kind", "dmpgi"])
        assert report["config"]["tolerance"]["residual"] == 1e-30
        assert code == 1
        report, code = cli.run(["inv", path, "--kind", "dmpgi", "--tol", "1e-6"])
        assert code == 0 and report["config"]["tolerance"]["residual"] == 1e-6

    def test_report_file(self, fixture_file, ex32, tmp_path):
        out = tmp_path / "report.json"
        report, _ = cli.run(["svd", fixture_file(ex32), "--output", str(out)])
        assert json.loads(out.read_text())["results"] == report["results"]

    def test_main_prints_json(self, fixture_file, ex32, capsys):
        assert cli.main(["svd", fixture_file(ex32)]) == 0
        assert json.loads(capsys.readouterr().out)["command"] == "svd"
