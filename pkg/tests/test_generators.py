import numpy as np
import pytest

from dualmat.dmatrix import DualMatrix, is_dual_unitary, max_deviation
from dualmat.dsvd import dual_svd
from dualmat.generators import (
    GEN_KINDS,
    INVALID_KINDS,
    fan_instance,
    gen_invalid,
    gen_repeated,
    generate,
    random_dual_unitary,
    random_skew,
    random_unitary,
)
from dualmat.ginv import dmpgi_exists, dual_index_is_one
from dualmat.relations import dcore_leq


def test_building_blocks(rng):
    Q = random_unitary(rng, 5)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(5), atol=1e-13)
    K = random_skew(rng, 4)
    np.testing.assert_allclose(K.conj().T, -K)
    assert is_dual_unitary(random_dual_unitary(rng, 6))


@pytest.mark.parametrize("kind", GEN_KINDS)
@pytest.mark.parametrize("n", [1, 2, 5])
def test_generate_is_deterministic(kind, n):
    a, b = generate(kind, n, 11), generate(kind, n, 11)
    assert len(a) == len(b) == (2 if kind == "dcore-pair" else 1)
    for x, y in zip(a, b):
        assert max_deviation(x, y) == 0


def test_generated_instances_have_their_property():
    (A,) = generate("dmpgi-exists", 4, 7)
    assert dmpgi_exists(A).exists
    (A,) = generate("index1", 5, 42)
    assert dual_index_is_one(A).exists
    A, B = generate("dcore-pair", 6, 1)
    assert dcore_leq(A, B).holds


def test_bad_requests():
    with pytest.raises(ValueError):
        generate("index1", 0, 1)
    with pytest.raises(ValueError):
        generate("bogus", 3, 1)


def test_fan_instance_blocks(rng):
    inst = fan_instance(rng, 6, 4)
    assert inst.r == 4
    assert max_deviation(inst.K @ inst.K.H + inst.L @ inst.L.H, DualMatrix.identity(4)) < 1e-10
    assert np.linalg.svd(inst.K.S, compute_uv=False)[-1] >= 0.1
    l0 = fan_instance(rng, 6, 4, l_zero=True)
    assert max(np.abs(l0.L.S).max(), np.abs(l0.L.D).max()) == 0


@pytest.mark.parametrize("kind", INVALID_KINDS)
def test_invalid_instances_lack_dual_index_one(rng, kind):
    for _ in range(5):
        assert not dual_index_is_one(gen_invalid(rng, 4, kind)).exists


def test_repeated_values(rng):
    A = gen_repeated(rng, 5, 3)
    s = np.linalg.svd(A.S, compute_uv=False)
    gaps = np.abs(s[:, None] - s[None, :]) < 1e-10 * s[0]
    assert gaps.sum(axis=1).max() == 3
    assert dual_svd(A).r == 5
