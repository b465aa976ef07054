"""Seeded random instances with a known structure.

Every public generator checks its output against the predicate it promises
before returning it, and raises :class:`RuntimeError` if that check fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dmatrix import DualMatrix
from .ginv import dmpgi_exists, dual_index_is_one

GEN_KINDS = ("dmpgi-exists", "index1", "dcore-pair")


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_complex(rng, m: int, n: int | None = None) -> np.ndarray:
    n = m if n is None else n
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def random_unitary(rng, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(random_complex(rng, n))
    d = np.diag(R)
    return Q * (d / np.abs(d)) if n else Q


def random_skew(rng, n: int) -> np.ndarray:
    Z = random_complex(rng, n)
    return 0.5 * (Z - Z.conj().T)


def random_dual_unitary(rng, n: int) -> DualMatrix:
    """``U (I + eps X)`` with unitary ``U`` and skew-Hermitian ``X``."""
    U = random_unitary(rng, n)
    return DualMatrix(U, U @ random_skew(rng, n))


def random_dual(rng, m: int, n: int | None = None) -> DualMatrix:
    n = m if n is None else n
    return DualMatrix(random_complex(rng, m, n), random_complex(rng, m, n))


def _singular_values(rng, r: int) -> np.ndarray:
    return np.sort(rng.uniform(0.5, 3.0, r))[::-1]


def low_rank(rng, m: int, n: int, r: int, sigma=None) -> np.ndarray:
    s = _singular_values(rng, r) if sigma is None else np.asarray(sigma, dtype=float)
    U, V = random_unitary(rng, m), random_unitary(rng, n)
    return (U[:, :r] * s) @ V[:, :r].conj().T


def _check(ok: bool, what: str):
    if not ok:
        raise RuntimeError(f"generated instance failed its own check: {what}")


def gen_dmpgi_exists(rng, m: int, n: int | None = None, r: int | None = None) -> DualMatrix:
    """``A_s`` of rank ``r`` and ``A_d = A_s X + Y A_s``, so the projected block vanishes."""
    rng = rng_from(rng)
    n = m if n is None else n
    r = int(rng.integers(0, min(m, n) + 1)) if r is None else r
    As = low_rank(rng, m, n, r)
    Ad = As @ random_complex(rng, n) + random_complex(rng, m) @ As
    A = DualMatrix(As, Ad)
    rep = dmpgi_exists(A)
    _check(rep.agree and rep.exists, "dmpgi_exists")
    return A


@dataclass(frozen=True, eq=False)
class FanInstance:
    """``A = U [Sigma1 K, Sigma1 L; 0 0] U^*`` together with its building blocks."""

    A: DualMatrix
    U: DualMatrix
    Sigma1: DualMatrix
    K: DualMatrix
    L: DualMatrix

    @property
    def r(self) -> int:
        return self.K.shape[0]


def _kl_blocks(rng, n: int, r: int, l_zero: bool, min_sv: float = 0.1):
    """First ``r`` rows of a random dual unitary, with ``K_1`` kept well conditioned."""
    for _ in range(100):
        if l_zero:
            W1 = random_dual_unitary(rng, r)
            W2 = random_dual_unitary(rng, n - r)
            W = DualMatrix.block([[W1, DualMatrix.zeros(r, n - r)], [DualMatrix.zeros(n - r, r), W2]])
        else:
            W = random_dual_unitary(rng, n)
        K, L = W[:r, :r], W[:r, r:]
        if r == 0 or np.linalg.svd(K.S, compute_uv=False)[-1] >= min_sv:
            return K, L
    raise RuntimeError("could not draw a well-conditioned K block")


def fan_instance(rng, n: int, r: int | None = None, l_zero: bool = False,
                 sigma: np.ndarray | None = None) -> FanInstance:
    """Dual index-one matrix in the form built from a dual unitary ``U`` and invertible ``K``."""
    rng = rng_from(rng)
    if r is None:
        r = int(rng.integers(1, n + 1))
    if l_zero and r == n:
        l_zero = False  # L is empty anyway
    s = _singular_values(rng, r) if sigma is None else np.asarray(sigma, dtype=float)
    Sigma1 = DualMatrix(np.diag(s).astype(complex).reshape(r, r),
                        np.diag(rng.standard_normal(r)).astype(complex).reshape(r, r))
    K, L = _kl_blocks(rng, n, r, l_zero)
    U = random_dual_unitary(rng, n)
    top = DualMatrix.block([[Sigma1 @ K, Sigma1 @ L]])
    core = DualMatrix.block([[top], [DualMatrix.zeros(n - r, n)]])
    return FanInstance(A=U @ core @ U.H, U=U, Sigma1=Sigma1, K=K, L=L)


def gen_index1(rng, n: int, r: int | None = None, l_zero: bool = False) -> DualMatrix:
    inst = fan_instance(rng, n, r, l_zero)
    rep = dual_index_is_one(inst.A)
    _check(rep.agree and rep.exists, "dual_index_is_one")
    return inst.A


def dominator_from(inst: FanInstance, P: DualMatrix) -> DualMatrix:
    """``U [Sigma1 K, Sigma1 L; 0 P] U^*``."""
    n, r = inst.U.shape[0], inst.r
    core = DualMatrix.block([[inst.Sigma1 @ inst.K, inst.Sigma1 @ inst.L],
                             [DualMatrix.zeros(n - r, r), P]])
    return inst.U @ core @ inst.U.H


def gen_dcore_pair(rng, n: int, r: int | None = None, p_kind: str = "random") -> tuple[DualMatrix, DualMatrix]:
    """A dual index-one ``A`` and a matrix above it in the D-core order.

    ``p_kind`` picks the lower-right block: ``random`` (dual index one),
    ``zero`` or ``identity``.
    """
    from .relations import dcore_leq

    rng = rng_from(rng)
    if r is None:
        r = int(rng.integers(1, n + 1))
    inst = fan_instance(rng, n, r)
    k = n - r
    if p_kind == "zero" or k == 0:
        P = DualMatrix.zeros(k)
    elif p_kind == "identity":
        P = DualMatrix.identity(k)
    elif p_kind == "random":
        P = fan_instance(rng, k, int(rng.integers(0, k + 1))).A
    else:
        raise ValueError(f"unknown p_kind {p_kind!r}")
    B = dominator_from(inst, P)
    _check(dcore_leq(inst.A, B).holds, "dcore_leq")
    return inst.A, B


# ----------------------------------------------------------- invalid mixes

INVALID_KINDS = ("generic_singular", "nilpotent_part", "sigma2_nonzero")


def gen_invalid(rng, n: int, kind: str) -> DualMatrix:
    """Instances that violate dual index one in a controlled way.

    ``generic_singular``  rank-deficient ``A_s`` with an unstructured ``A_d``
    ``nilpotent_part``  ``A_s`` has a nilpotent Jordan block (index two) and
        ``A_d = A_s X + Y A_s``, so the DMPGI still exists
    ``sigma2_nonzero``  index-one ``A_s`` with an unstructured ``A_d``
    """
    rng = rng_from(rng)
    if n < 2:
        raise ValueError("invalid instances need n >= 2")
    if kind == "generic_singular":
        r = int(rng.integers(0, n))
        return DualMatrix(low_rank(rng, n, n, r), random_complex(rng, n))
    if kind == "nilpotent_part":
        J = np.zeros((n, n), dtype=complex)
        J[0, 1] = rng.uniform(0.5, 2.0)
        rest = int(rng.integers(0, n - 1))
        for i in range(2, 2 + rest):
            J[i, i] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.random())
        Q = random_unitary(rng, n)
        As = Q @ J @ Q.conj().T
        Ad = As @ random_complex(rng, n) + random_complex(rng, n) @ As
        return DualMatrix(As, Ad)
    if kind == "sigma2_nonzero":
        r = int(rng.integers(1, n))
        return DualMatrix(fan_instance(rng, n, r).A.S, random_complex(rng, n))
    raise ValueError(f"unknown invalid kind {kind!r}")


def gen_repeated(rng, n: int, multiplicity: int = 2, m: int | None = None) -> DualMatrix:
    """Full-dimension random dual matrix whose standard part repeats one singular value."""
    rng = rng_from(rng)
    m = n if m is None else m
    k = min(m, n)
    s = list(_singular_values(rng, k - multiplicity + 1))
    s = sorted(s + [s[0]] * (multiplicity - 1), reverse=True)
    return DualMatrix(low_rank(rng, m, n, k, s), random_complex(rng, m, n))


def generate(kind: str, n: int, seed) -> tuple[DualMatrix, ...]:
    """CLI entry: one matrix for ``dmpgi-exists`` and ``index1``, two for ``dcore-pair``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = rng_from(seed)
    if kind == "dmpgi-exists":
        return (gen_dmpgi_exists(rng, n),)
    if kind == "index1":
        return (gen_index1(rng, n),)
    if kind == "dcore-pair":
        return gen_dcore_pair(rng, n)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {GEN_KINDS}")


__all__ = [
    "GEN_KINDS", "INVALID_KINDS", "FanInstance",
    "random_complex", "random_unitary", "random_skew", "random_dual_unitary", "random_dual",
    "low_rank", "gen_dmpgi_exists", "fan_instance", "gen_index1", "dominator_from",
    "gen_dcore_pair", "gen_invalid", "gen_repeated", "generate", "rng_from",
]
