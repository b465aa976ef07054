"""Complex matrix backbone: SVD, numerical rank, Moore-Penrose, group and core inverses.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .config import DEFAULT
from .errors import ConvergenceFailure, NotIndexOne, ShapeMismatch

_EPS = np.finfo(float).eps


def as_complex(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


@lru_cache(maxsize=None)
def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Circle-method schedule: n-1 rounds of disjoint column pairs covering all pairs."""
    players = list(range(n + (n % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[k], players[size - 1 - k]) for k in range(size // 2)]
        pairs = [(min(p), max(p)) for p in pairs if max(p) < n]
        if pairs:
            i, j = zip(*pairs)
            rounds.append((np.array(i), np.array(j)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_tall(A: np.ndarray, max_sweeps: int):
    m, n = A.shape
    # rotate W = A V and V together: rows [:m] hold W, rows [m:] hold V
    WV = np.vstack([A, np.eye(n, dtype=complex)])
    thresh = max(m, 1) * _EPS
    schedule = _round_robin(n)
    for _ in range(max_sweeps):
        rotated = False
        for I, J in schedule:
            W = WV[:m]
            gram = W.conj().T @ W
            d = gram.diagonal().real
            alpha, beta, gamma = d[I], d[J], gram[I, J]
            g = np.abs(gamma)
            act = g > thresh * np.sqrt(alpha * beta)
            if not act.any():
                continue
            rotated = True
            I, J, alpha, beta, gamma, g = I[act], J[act], alpha[act], beta[act], gamma[act], g[act]
            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            ci, cj = WV[:, I], WV[:, J] * np.conj(gamma / g)
            WV[:, I] = c * ci - s * cj
            WV[:, J] = s * ci + c * cj
        if not rotated:
            return WV[:m], WV[m:]
    raise ConvergenceFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


def _complete_basis(Q: np.ndarray, m: int) -> np.ndarray:
    k = Q.shape[1]
    if k == 0:
        return np.eye(m, dtype=complex)
    if k == m:
        return Q
    full, _ = np.linalg.qr(Q, mode="complete")
    return np.hstack([Q, full[:, k:]])


def svd_complex(A, max_sweeps: int | None = None):
    """Full SVD ``A = U @ diag(sigma) @ V^*`` by one-sided Jacobi.

    Returns ``(U, sigma, V)`` with ``U`` m x m, ``V`` n x n unitary and
    ``sigma`` of length ``min(m, n)``, sorted descending.  The arrays are
    read-only: results are memoized on the exact bytes of ``A``.
    """
    A = np.ascontiguousarray(as_complex(A))
    sweeps = DEFAULT.max_sweeps if max_sweeps is None else max_sweeps
    return _svd_memo(A.tobytes(), A.shape, sweeps)


@lru_cache(maxsize=4096)
def _svd_memo(buf: bytes, shape: tuple[int, int], sweeps: int):
    A = np.frombuffer(buf, dtype=complex).reshape(shape)
    out = _svd_uncached(A, sweeps)
    for a in out:
        a.setflags(write=False)
    return out


def _svd_uncached(A: np.ndarray, sweeps: int):
    m, n = A.shape
    if m < n:
        U, sigma, V = _svd_uncached(adjoint(A), sweeps)
        return V, sigma, U
    if n == 0:
        return np.eye(m, dtype=complex), np.zeros(0), np.eye(0, dtype=complex)
    W, V = _jacobi_tall(A, sweeps)
    norms = np.linalg.norm(W, axis=0)
    order = np.argsort(-norms, kind="stable")
    norms, W, V = norms[order], W[:, order], V[:, order]
    smax = norms[0]
    keep = norms > max(smax * _EPS**2, np.finfo(float).tiny)
    k = int(keep.sum())
    U = _complete_basis(W[:, :k] / norms[:k], m)
    sigma = norms.copy()
    sigma[k:] = 0.0
    return U, sigma, V


def singular_values(A) -> np.ndarray:
    return svd_complex(A)[1]


def rank_cutoff(A, sigma: np.ndarray | None = None, rtol: float | None = None) -> float:
    A = np.asarray(A)
    if sigma is None:
        sigma = singular_values(A)
    if sigma.size == 0:
        return 0.0
    rtol = max(A.shape) * _EPS if rtol is None else rtol
    return rtol * sigma[0]


def rank_tol(A, rtol: float | None = None) -> int:
    """Number of singular values above ``rtol * sigma_max`` (default ``rtol = max(m, n) * eps``)."""
    A = as_complex(A)
    if A.size == 0:
        return 0
    sigma = singular_values(A)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > rank_cutoff(A, sigma, rtol)))


def pinv(A, rtol: float | None = None) -> np.ndarray:
    A = as_complex(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m), dtype=complex)
    U, sigma, V = svd_complex(A)
    r = int(np.sum(sigma > rank_cutoff(A, sigma, rtol))) if sigma[0] > 0 else 0
    return (V[:, :r] / sigma[:r]) @ adjoint(U[:, :r])


def _full_rank_factors(A, rtol):
    U, sigma, V = svd_complex(A)
    r = int(np.sum(sigma > rank_cutoff(A, sigma, rtol))) if sigma.size and sigma[0] > 0 else 0
    return U[:, :r] * sigma[:r], adjoint(V[:, :r]), r


def _require_square(A):
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"square matrix required, got {A.shape}")


def index_one_margin(A, rtol: float | None = None) -> float:
    """``sigma_min(V_r^* U_r)`` for the compact SVD ``A = U_r S V_r^*``; 1 when ``A = 0``.

    ``A`` has index one exactly when ``V_r^* U_r`` is invertible (range and
    co-range meet only in 0).  The smallest singular value is the cosine of
    the largest principal angle between them, a dimensionless quantity that
    sits at rounding level, not at zero, for index-two input.  Ranking
    ``A^2`` directly is unreliable: its noise is of order ``eps sigma_max(A)^2``
    while the rank cutoff scales with ``sigma_max(A^2)``.
    """
    A = as_complex(A)
    _require_square(A)
    F, G, r = _full_rank_factors(A, rtol)
    if r == 0:
        return 1.0
    sigma = singular_values(A)[:r]
    return float(singular_values((G @ F) / sigma)[-1])


def index_is_one(A, rtol: float | None = None, ctol: float | None = None) -> bool:
    """Whether :func:`index_one_margin` exceeds ``ctol`` (default ``DEFAULT.zero``)."""
    return index_one_margin(A, rtol) > (DEFAULT.zero if ctol is None else ctol)


def group_inv(A, rtol: float | None = None, ctol: float | None = None) -> np.ndarray:
    """Group inverse ``F (G F)^{-2} G`` from a full-rank factorization ``A = F G``.

    Raises :class:`NotIndexOne` unless :func:`index_is_one` holds.
    """
    A = as_complex(A)
    if not index_is_one(A, rtol, ctol):
        raise NotIndexOne("rank(A^2) < rank(A); the group inverse does not exist")
    F, G, r = _full_rank_factors(A, rtol)
    if r == 0:
        return np.zeros_like(A)
    GF_inv = np.linalg.inv(G @ F)
    return F @ GF_inv @ GF_inv @ G


def core_inv(A, rtol: float | None = None, ctol: float | None = None) -> np.ndarray:
    """Core inverse ``A^# A A^+``."""
    A = as_complex(A)
    return group_inv(A, rtol, ctol) @ A @ pinv(A, rtol)
