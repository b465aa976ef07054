"""Dual Hartwig-Spindelboeck decomposition of square dual matrices.

All three forms come from one dual SVD ``A = U Sigma V^*``: writing the dual
unitary ``V^* U`` in blocks gives ``A = U (Sigma V^* U) U^*``.  The basic form
cuts ``V^* U`` at the dual rank ``t``; the partitioned and refined forms cut it
at the appreciable rank ``r`` (the refined one additionally splits every block
into its standard and infinitesimal parts).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerance
from .dmatrix import DualMatrix, as_dual, max_deviation
from .dsvd import DualSVD, dual_svd
from .dualnum import DualReal
from .errors import ShapeMismatch


def _eye(k: int) -> DualMatrix:
    return DualMatrix.identity(k)


def _gram_residual(X: DualMatrix, Y: DualMatrix, target: DualMatrix) -> float:
    """max-entry of ``X X^* + Y Y^* - target``; vacuous for empty blocks."""
    if target.shape[0] == 0:
        return 0.0
    return max_deviation(X @ X.H + Y @ Y.H, target)


@dataclass(frozen=True, eq=False)
class HSBasic:
    """``A = U [Sigma0 K0, Sigma0 L0; 0 0] U^*`` with ``K0 K0^* + L0 L0^* = I_t``."""

    U: DualMatrix
    Sigma0: tuple[DualReal, ...]
    K0: DualMatrix
    L0: DualMatrix

    @property
    def t(self) -> int:
        return len(self.Sigma0)

    def core(self) -> DualMatrix:
        n = self.U.shape[0]
        S0 = DualMatrix.diag(self.Sigma0)
        top = DualMatrix.block([[S0 @ self.K0, S0 @ self.L0]])
        return DualMatrix.block([[top], [DualMatrix.zeros(n - self.t, n)]])

    def reconstruct(self) -> DualMatrix:
        return self.U @ self.core() @ self.U.H

    def constraint_residuals(self) -> dict[str, float]:
        return {"K0K0*+L0L0*=I": _gram_residual(self.K0, self.L0, _eye(self.t))}


@dataclass(frozen=True, eq=False)
class HSPartitioned:
    """``A = U [Sigma1 K, Sigma1 L; Sigma2 M, Sigma2 N] U^*``.

    ``Sigma2`` is stored zero-padded to length ``n - r``.
    """

    U: DualMatrix
    Sigma1: tuple[DualReal, ...]
    Sigma2: tuple[DualReal, ...]
    K: DualMatrix
    L: DualMatrix
    M: DualMatrix
    N: DualMatrix

    @property
    def r(self) -> int:
        return len(self.Sigma1)

    @property
    def Sigma1_matrix(self) -> DualMatrix:
        return DualMatrix.diag(self.Sigma1)

    @property
    def Sigma2_matrix(self) -> DualMatrix:
        return DualMatrix.diag(self.Sigma2)

    def core(self) -> DualMatrix:
        S1, S2 = self.Sigma1_matrix, self.Sigma2_matrix
        return DualMatrix.block([[S1 @ self.K, S1 @ self.L], [S2 @ self.M, S2 @ self.N]])

    def reconstruct(self) -> DualMatrix:
        return self.U @ self.core() @ self.U.H

    def constraint_residuals(self) -> dict[str, float]:
        r, k = self.K.shape[0], self.N.shape[0]
        res = {
            "KK*+LL*=I": _gram_residual(self.K, self.L, _eye(r)),
            "MM*+NN*=I": _gram_residual(self.M, self.N, _eye(k)),
        }
        res["KM*+LN*=0"] = (
            0.0 if r == 0 or k == 0
            else max_deviation(self.K @ self.M.H + self.L @ self.N.H, DualMatrix.zeros(r, k))
        )
        return res


@dataclass(frozen=True, eq=False)
class HSRefined:
    """The partitioned form with every block split as ``X = X1 + eps X2``."""

    U: DualMatrix
    Sigma1s: np.ndarray
    Sigma1d: np.ndarray
    Sigma2d: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    L1: np.ndarray
    L2: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    N1: np.ndarray
    N2: np.ndarray

    @property
    def r(self) -> int:
        return self.K1.shape[0]

    def reconstruct(self) -> DualMatrix:
        """First line of the refined form: dual products of split blocks."""
        S1 = DualMatrix(self.Sigma1s, self.Sigma1d)
        S2 = DualMatrix(np.zeros_like(self.Sigma2d), self.Sigma2d)

        def d(a):
            return DualMatrix.of(a)

        first = DualMatrix.block([[S1 @ d(self.K1), S1 @ d(self.L1)], [S2 @ d(self.M1), S2 @ d(self.N1)]])
        second = DualMatrix.block([[S1 @ d(self.K2), S1 @ d(self.L2)], [S2 @ d(self.M2), S2 @ d(self.N2)]])
        core = first + DualMatrix(np.zeros_like(second.S), second.S)
        return self.U @ core @ self.U.H

    def reconstruct_split(self) -> DualMatrix:
        """Second line: standard and infinitesimal parts written out explicitly."""
        s1s, s1d, s2d = self.Sigma1s, self.Sigma1d, self.Sigma2d
        k = self.N1.shape[0]
        std = np.block([[s1s @ self.K1, s1s @ self.L1],
                        [np.zeros((k, self.r)), np.zeros((k, k))]])
        inf = np.block([[s1d @ self.K1 + s1s @ self.K2, s1d @ self.L1 + s1s @ self.L2],
                        [s2d @ self.M1, s2d @ self.N1]])
        return self.U @ DualMatrix(std, inf) @ self.U.H

    def constraint_residuals(self) -> dict[str, float]:
        def H(a):
            return a.conj().T

        def dev(a, b):
            return float(np.abs(a - b).max()) if a.size else 0.0

        r, k = self.r, self.N1.shape[0]
        K1, K2, L1, L2, M1, N1 = self.K1, self.K2, self.L1, self.L2, self.M1, self.N1
        return {
            "K1K1*+L1L1*=I": dev(K1 @ H(K1) + L1 @ H(L1), np.eye(r)),
            "K1K2*+K2K1*+L1L2*+L2L1*=0": dev(K1 @ H(K2) + K2 @ H(K1) + L1 @ H(L2) + L2 @ H(L1), np.zeros((r, r))),
            "M1M1*+N1N1*=I": dev(M1 @ H(M1) + N1 @ H(N1), np.eye(k)),
            "K1M1*+L1N1*=0": dev(K1 @ H(M1) + L1 @ H(N1), np.zeros((r, k))),
        }


def _square(A) -> DualMatrix:
    A = as_dual(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"the H-S decomposition needs a square matrix, got {A.shape}")
    return A


def _svd(A, tol, svd):
    return dual_svd(A, tol) if svd is None else svd


def hs_basic(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> HSBasic:
    A = _square(A)
    svd = _svd(A, tol, svd)
    G = svd.V.H @ svd.U
    t = svd.t
    return HSBasic(U=svd.U, Sigma0=svd.sigma[:t], K0=G[:t, :t], L0=G[:t, t:])


def hs_partitioned(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> HSPartitioned:
    A = _square(A)
    svd = _svd(A, tol, svd)
    n, r = A.shape[0], svd.r
    G = svd.V.H @ svd.U
    pad = tuple(svd.sigma[r : svd.t]) + (DualReal(0.0, 0.0),) * (n - svd.t)
    return HSPartitioned(
        U=svd.U, Sigma1=svd.sigma[:r], Sigma2=pad,
        K=G[:r, :r], L=G[:r, r:], M=G[r:, :r], N=G[r:, r:],
    )


def hs_refined(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> HSRefined:
    p = hs_partitioned(A, tol, svd)
    s2d = np.diag([mu.d for mu in p.Sigma2]).reshape(len(p.Sigma2), len(p.Sigma2)).astype(complex)
    return HSRefined(
        U=p.U,
        Sigma1s=p.Sigma1_matrix.S.copy(), Sigma1d=p.Sigma1_matrix.D.copy(), Sigma2d=s2d,
        K1=p.K.S.copy(), K2=p.K.D.copy(), L1=p.L.S.copy(), L2=p.L.D.copy(),
        M1=p.M.S.copy(), M2=p.M.D.copy(), N1=p.N.S.copy(), N2=p.N.D.copy(),
    )


def essential_in_hs(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> DualMatrix:
    """``U [Sigma1 K, Sigma1 L; 0 0] U^*``, which drops the infinitesimal singular values."""
    p = hs_partitioned(A, tol, svd)
    n, r = p.U.shape[0], p.r
    S1 = p.Sigma1_matrix
    core = DualMatrix.block([[S1 @ p.K, S1 @ p.L], [DualMatrix.zeros(n - r, r), DualMatrix.zeros(n - r, n - r)]])
    return p.U @ core @ p.U.H
