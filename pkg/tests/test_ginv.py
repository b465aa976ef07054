import numpy as np
import pytest

from conftest import CORE_EXAMPLE, GROUP_EXAMPLE, MP_EXAMPLE
from dualmat.dmatrix import DualMatrix, dm_inv, max_deviation, relative_deviation
from dualmat.dsvd import dual_svd, essential_part
from dualmat.errors import InverseNotExists, NotIndexOne, ShapeMismatch
from dualmat.generators import (
    fan_instance,
    gen_dmpgi_exists,
    gen_index1,
    gen_invalid,
    random_dual,
    random_dual_unitary,
)
from dualmat.ginv import (
    EQUATIONS,
    compute,
    dcgi,
    dggi,
    dmpgi,
    dmpgi_exists,
    dual_index_is_one,
    ndmpi,
    verify_defining_equations,
)
from dualmat.hsd import hs_refined

METHODS = ["formula", "decomposition"]


class TestPrintedValues:
    @pytest.mark.parametrize("method", METHODS)
    def test_dmpgi_of_second_example(self, ex32, method):
        res = dmpgi(ex32, method)
        assert max_deviation(res.value, MP_EXAMPLE) < 1e-9
        assert res.passed

    @pytest.mark.parametrize("method", METHODS)
    def test_ndmpi_of_first_example(self, ex31, method):
        res = ndmpi(ex31, method)
        assert max_deviation(res.value, MP_EXAMPLE) < 1e-9
        assert res.passed

    def test_dmpgi_of_first_example_does_not_exist(self, ex31):
        assert not dmpgi_exists(ex31).exists
        for method in METHODS:
            with pytest.raises(InverseNotExists):
                dmpgi(ex31, method)

    @pytest.mark.parametrize("method", METHODS)
    def test_group_and_core(self, ex4, method):
        assert max_deviation(dggi(ex4, method).value, GROUP_EXAMPLE) < 1e-9
        assert max_deviation(dcgi(ex4, method).value, CORE_EXAMPLE) < 1e-9

    def test_printed_values_satisfy_equations(self, ex31, ex32, ex4):
        assert max(verify_defining_equations("dmpgi", ex32, MP_EXAMPLE).values()) < 1e-9
        res = verify_defining_equations("ndmpi", ex31, MP_EXAMPLE, essential=essential_part(ex31))
        assert res["AXA=Ae"] < 1e-9
        assert max(verify_defining_equations("dggi", ex4, GROUP_EXAMPLE).values()) < 1e-9
        assert max(verify_defining_equations("dcgi", ex4, CORE_EXAMPLE).values()) < 1e-9


def test_wrong_candidate_has_residual_of_size_a(ex32):
    res = verify_defining_equations("dmpgi", ex32, DualMatrix.zeros(4))
    # the first equation reads 0 = A, so its residual is the largest entry of A (already at scale 1)
    assert res["AXA=A"] == pytest.approx(max_deviation(ex32, DualMatrix.zeros(4)) / ex32.scale())
    assert res["AXA=A"] > 0.1


@pytest.mark.parametrize("kind", ["dmpgi", "ndmpi", "dggi", "dcgi"])
@pytest.mark.parametrize("method", METHODS)
def test_identity_and_invertible(rng, kind, method):
    I = DualMatrix.identity(3)
    assert max_deviation(compute(kind, I, method).value, I) < 1e-12
    A = random_dual(rng, 4)
    assert relative_deviation(compute(kind, A, method).value, dm_inv(A)) < 1e-9


def test_hermitian_invertible_core(rng):
    X = random_dual(rng, 4)
    H = X @ X.H + DualMatrix.identity(4)
    assert relative_deviation(dcgi(H).value, dm_inv(H)) < 1e-9


def test_zero_matrix():
    for kind in ("dmpgi", "ndmpi", "dggi", "dcgi"):
        for method in METHODS:
            assert max_deviation(compute(kind, DualMatrix.zeros(3), method).value, DualMatrix.zeros(3)) == 0


@pytest.mark.parametrize("shape", [(5, 3), (3, 5), (6, 6)])
def test_dmpgi_cross_method(rng, shape):
    for _ in range(5):
        A = gen_dmpgi_exists(rng, *shape)
        f, d = dmpgi(A, "formula"), dmpgi(A, "decomposition")
        assert f.passed and d.passed
        assert relative_deviation(f.value, d.value) < 1e-9


@pytest.mark.parametrize("shape", [(5, 3), (3, 5), (5, 5)])
def test_ndmpi_on_generic_input(rng, shape):
    m, n = shape
    U, V = random_dual_unitary(rng, m), random_dual_unitary(rng, n)
    k = min(m, n)
    S = np.zeros((m, n))
    S[0, 0], S[1, 1] = 2.5, 1.0
    D = np.zeros((m, n))
    D[0, 0], D[2, 2] = 0.3, 1.7
    A = U @ DualMatrix(S, D) @ V.H
    assert k >= 3 and not dmpgi_exists(A).exists
    f, d = ndmpi(A, "formula"), ndmpi(A, "decomposition")
    assert f.passed and d.passed
    assert relative_deviation(f.value, d.value) < 1e-9
    # oracle: the printed block form through the dual SVD
    svd = dual_svd(A)
    core = DualMatrix.block([[dm_inv(svd.Sigma1), DualMatrix.zeros(2, m - 2)],
                             [DualMatrix.zeros(n - 2, 2), DualMatrix.zeros(n - 2, m - 2)]])
    assert relative_deviation(f.value, svd.V @ core @ svd.U.H) < 1e-9


def test_ndmpi_equals_dmpgi_when_it_exists(rng):
    for _ in range(5):
        A = gen_dmpgi_exists(rng, 5)
        assert relative_deviation(ndmpi(A).value, dmpgi(A).value) < 1e-9


class TestGroupAndCore:
    @pytest.mark.parametrize("l_zero", [False, True])
    def test_cross_method_on_canonical_form(self, rng, l_zero):
        for n in (3, 5, 7):
            A = gen_index1(rng, n, r=n - 2, l_zero=l_zero)
            for op in (dggi, dcgi):
                f, d = op(A, "formula"), op(A, "decomposition")
                assert f.passed and d.passed
                assert relative_deviation(f.value, d.value) < 1e-9

    def test_core_is_group_times_a_times_mp(self, rng):
        for _ in range(5):
            A = gen_index1(rng, 6)
            oracle = dggi(A).value @ A @ dmpgi(A).value
            assert relative_deviation(dcgi(A).value, oracle) < 1e-9

    def test_split_forms_from_refined_blocks(self, rng):
        inst = fan_instance(rng, 6, 4)
        A = inst.A
        ref = hs_refined(A)
        inv = np.linalg.inv
        K1i, S1i = inv(ref.K1), inv(ref.Sigma1s)
        K2, L1, L2, S1d = ref.K2, ref.L1, ref.L2, ref.Sigma1d
        r, k = ref.r, 2
        zero = np.zeros((k, r + k))
        R = (K1i @ S1i @ K1i @ L2
             - K1i @ (S1i @ K1i @ K2 + K2 @ K1i @ S1i) @ K1i @ L1
             - K1i @ S1i @ S1i @ S1d @ K1i @ L1)
        top_d = -K1i @ K2 @ K1i @ S1i - K1i @ S1i @ S1i @ S1d
        grp = DualMatrix(np.vstack([np.hstack([K1i @ S1i, K1i @ S1i @ K1i @ L1]), zero]),
                         np.vstack([np.hstack([top_d, R]), zero]))
        core = DualMatrix(np.vstack([np.hstack([K1i @ S1i, np.zeros((r, k))]), zero]),
                          np.vstack([np.hstack([top_d, np.zeros((r, k))]), zero]))
        U = ref.U
        assert relative_deviation(U @ grp @ U.H, dggi(A).value) < 1e-9
        assert relative_deviation(U @ core @ U.H, dcgi(A).value) < 1e-9

    def test_not_index_one(self, rng):
        N = DualMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros((2, 2)))
        for op in (dggi, dcgi):
            with pytest.raises(NotIndexOne):
                op(N)
            with pytest.raises(NotIndexOne):
                op(gen_invalid(rng, 5, "sigma2_nonzero"))

    def test_rectangular_rejected(self, rng):
        A = random_dual(rng, 3, 4)
        for op in (dggi, dcgi):
            with pytest.raises(ShapeMismatch):
                op(A)
        with pytest.raises(ShapeMismatch):
            dual_index_is_one(A)
        with pytest.raises(ShapeMismatch):
            verify_defining_equations("dggi", A, random_dual(rng, 4, 3))


class TestExistence:
    def test_examples(self, ex31, ex32, ex4):
        assert dmpgi_exists(ex32).exists and dmpgi_exists(ex32).agree
        rep = dmpgi_exists(ex31)
        assert rep.agree and not rep.exists
        rep = dual_index_is_one(ex4)
        assert rep.agree and rep.exists

    def test_infinitesimal_equal_to_standard(self, rng):
        S = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
        rep = dmpgi_exists(DualMatrix(S, S))
        assert rep.agree and rep.exists

    def test_nilpotent_standard_part(self):
        N = DualMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))
        rep = dual_index_is_one(N)
        assert rep.agree and not rep.exists

    @pytest.mark.parametrize("kind", ["generic_singular", "nilpotent_part", "sigma2_nonzero"])
    def test_invalid_families_agree(self, rng, kind):
        for _ in range(10):
            A = gen_invalid(rng, 5, kind)
            for rep in (dmpgi_exists(A), dual_index_is_one(A)):
                assert rep.agree, rep.values
            assert not dual_index_is_one(A).exists

    def test_nilpotent_family_still_has_dmpgi(self, rng):
        A = gen_invalid(rng, 4, "nilpotent_part")
        assert dmpgi_exists(A).exists

    def test_group_exists_iff_mp_exists_under_index_one(self, rng):
        for A in (gen_index1(rng, 5), gen_invalid(rng, 5, "sigma2_nonzero")):
            assert dmpgi_exists(A).exists == dual_index_is_one(A).exists

    def test_report_serializes(self, ex31):
        d = dmpgi_exists(ex31).to_dict()
        assert d["exists"] is False and set(d["predicates"]) == {"projector", "bordered_rank", "rank_equality"}


def test_equation_names_match_kinds(ex32):
    for kind, names in EQUATIONS.items():
        if kind in ("dggi", "dcgi"):
            continue
        assert tuple(compute(kind, ex32).residuals) == names


def test_unknown_method(ex32):
    with pytest.raises(ValueError):
        dmpgi(ex32, method="qr")
