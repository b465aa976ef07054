"""Dual singular value decomposition, dual ranks and the essential part.

The construction is a first-order perturbation of a complex SVD of the
standard part.  With ``A_s = U_s S V_s^*`` and ``B = U_s^* A_d V_s`` we look
for ``U = U_s (I + eps X)``, ``V = V_s (I + eps Y)`` with skew-Hermitian
``X, Y``; then ``U Sigma V^*`` reproduces ``A`` exactly when

    X S + Sigma_d - S Y = B.

The appreciable block is solved entrywise (2x2 systems with determinant
``s_j^2 - s_i^2``), repeated singular values are handled by diagonalizing the
Hermitian part of their block of ``B``, the coupling blocks are solved
directly, and the null block of ``B`` is diagonalized by its own SVD, which
yields the infinitesimal singular values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cmatrix
from .config import Tolerance, resolve
from .dmatrix import DualMatrix, as_dual
from .dualnum import DualReal


@dataclass(frozen=True, eq=False)
class DualSVD:
    """``A = U diag(sigma) V^*`` with dual unitary ``U`` (m x m) and ``V`` (n x n).

    ``sigma`` holds the ``t`` nonzero dual singular values: ``r`` appreciable
    ones first, then ``t - r`` infinitesimal ones, each group descending.
    ``null_spectrum`` keeps every singular value of the transformed null block,
    including those cut off as zero, so callers can judge how close the
    cutoff was.
    """

    U: DualMatrix
    V: DualMatrix
    sigma: tuple[DualReal, ...]
    r: int
    t: int
    null_spectrum: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    @property
    def Sigma1s(self) -> np.ndarray:
        return np.diag([mu.s for mu in self.sigma[: self.r]]).reshape(self.r, self.r)

    @property
    def Sigma1d(self) -> np.ndarray:
        return np.diag([mu.d for mu in self.sigma[: self.r]]).reshape(self.r, self.r)

    @property
    def Sigma2d(self) -> np.ndarray:
        """The infinitesimal singular values as a vector of length ``t - r``."""
        return np.array([mu.d for mu in self.sigma[self.r : self.t]], dtype=float)

    @property
    def Sigma1(self) -> DualMatrix:
        return DualMatrix(self.Sigma1s, self.Sigma1d)

    def sigma_matrix(self, count: int | None = None) -> DualMatrix:
        """The m x n diagonal embedding of the first ``count`` singular values (default ``t``)."""
        count = self.t if count is None else count
        m, n = self.shape
        S = np.zeros((m, n), dtype=complex)
        D = np.zeros((m, n), dtype=complex)
        for i, mu in enumerate(self.sigma[:count]):
            S[i, i], D[i, i] = mu.s, mu.d
        return DualMatrix(S, D)

    def reconstruct(self) -> DualMatrix:
        return self.U @ self.sigma_matrix() @ self.V.H

    def essential(self) -> DualMatrix:
        return self.U @ self.sigma_matrix(self.r) @ self.V.H


def _phase(v: np.ndarray) -> complex:
    a = np.abs(v)
    if a.size == 0 or a.max() == 0.0:
        return 1.0
    k = int(np.argmax(a))
    return v[k] / a[k]


def _groups(s: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split descending ``s`` into runs whose consecutive relative gap is below ``gap``."""
    if s.size == 0:
        return []
    out, start = [], 0
    for i in range(1, s.size):
        if s[i - 1] - s[i] >= gap * s[i - 1]:
            out.append(np.arange(start, i))
            start = i
    out.append(np.arange(start, s.size))
    return out


def _canonicalize(Us, Vs, paired: int):
    m, n = Us.shape[0], Vs.shape[0]
    for i in range(paired):
        c = np.conj(_phase(Us[:, i]))
        Us[:, i] *= c
        Vs[:, i] *= c
    for i in range(paired, m):
        Us[:, i] *= np.conj(_phase(Us[:, i]))
    for i in range(paired, n):
        Vs[:, i] *= np.conj(_phase(Vs[:, i]))


def dual_svd(A, tol: Tolerance | None = None) -> DualSVD:
    tol = resolve(tol)
    A = as_dual(A)
    m, n = A.shape
    Ad = np.asarray(A.D)

    Us, s, Vs = cmatrix.svd_complex(A.S, tol.max_sweeps)
    Us, Vs = Us.copy(), Vs.copy()
    r = int(np.sum(s > cmatrix.rank_cutoff(A.S, s, tol.rank_rtol))) if s.size and s[0] > 0 else 0
    s = s[:r]

    groups = _groups(s, tol.group_gap)
    for g in groups:
        if g.size < 2:
            continue
        Bg = cmatrix.adjoint(Us[:, g]) @ Ad @ Vs[:, g]
        w, W = np.linalg.eigh(0.5 * (Bg + cmatrix.adjoint(Bg)))
        W = W[:, ::-1]
        Us[:, g] = Us[:, g] @ W
        Vs[:, g] = Vs[:, g] @ W

    s2 = np.zeros(0)
    if m > r and n > r:
        B22 = cmatrix.adjoint(Us[:, r:]) @ Ad @ Vs[:, r:]
        P, s2, Q = cmatrix.svd_complex(B22, tol.max_sweeps)
        Us[:, r:] = Us[:, r:] @ P
        Vs[:, r:] = Vs[:, r:] @ Q

    _canonicalize(Us, Vs, min(m, n))

    B = cmatrix.adjoint(Us) @ Ad @ Vs
    X = np.zeros((m, m), dtype=complex)
    Y = np.zeros((n, n), dtype=complex)
    if r:
        B11 = B[:r, :r]
        C = -cmatrix.adjoint(B11)
        si, sj = s[:, None], s[None, :]
        label = np.empty(r, dtype=int)
        gmean = np.empty(r)
        for k, g in enumerate(groups):
            label[g] = k
            gmean[g] = s[g].mean()
        same = label[:, None] == label[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            den = np.where(same, 1.0, sj**2 - si**2)
            X11 = np.where(same, (B11 + C) / (2.0 * gmean[:, None]), (sj * B11 - si * C) / den)
            Y11 = np.where(same, 0.0, (si * B11 - sj * C) / den)
        np.fill_diagonal(X11, 1j * np.diag(B11).imag / s)
        np.fill_diagonal(Y11, 0.0)
        X[:r, :r], Y[:r, :r] = X11, Y11

        X21 = B[r:, :r] / s[None, :]
        X[r:, :r], X[:r, r:] = X21, -cmatrix.adjoint(X21)
        Y12 = -B[:r, r:] / s[:, None]
        Y[:r, r:], Y[r:, :r] = Y12, -cmatrix.adjoint(Y12)
    d = np.diag(B)[:r].real

    cutoff = tol.zero * A.scale()
    t = r + int(np.sum(s2 > cutoff))
    sigma = tuple(DualReal(a, b) for a, b in zip(s, d)) + tuple(DualReal(0.0, v) for v in s2[: t - r])
    U = DualMatrix(Us, Us @ X)
    V = DualMatrix(Vs, Vs @ Y)
    return DualSVD(U=U, V=V, sigma=sigma, r=r, t=t, null_spectrum=s2)


def appreciable_rank(A, tol: Tolerance | None = None) -> int:
    tol = resolve(tol)
    return cmatrix.rank_tol(as_dual(A).S, tol.rank_rtol)


def dual_rank(A, tol: Tolerance | None = None) -> int:
    return dual_svd(A, tol).t


def essential_part(A, tol: Tolerance | None = None) -> DualMatrix:
    """``U [Sigma_1 0; 0 0] V^*``: drop the infinitesimal singular directions."""
    return dual_svd(A, tol).essential()
