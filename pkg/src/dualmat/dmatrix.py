"""Dual complex matrices ``A_s + eps*A_d`` and their algebra.

:class:`DualMatrix` is immutable: both parts are stored as read-only arrays
and every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cmatrix
from .config import DEFAULT
from .dualnum import DualComplex
from .errors import ShapeMismatch, SingularStandardPart


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D array, got shape {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DualMatrix:
    S: np.ndarray
    D: np.ndarray

    # make numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __post_init__(self):
        S, D = _frozen(self.S), _frozen(self.D)
        if S.shape != D.shape:
            raise ShapeMismatch(f"standard part {S.shape} and infinitesimal part {D.shape} differ")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "D", D)

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, S, D=None) -> "DualMatrix":
        S = np.asarray(S, dtype=complex)
        if S.ndim == 1:
            S = S.reshape(1, -1) if S.size else S.reshape(0, 0)
        return cls(S, np.zeros_like(S) if D is None else D)

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "DualMatrix":
        n = m if n is None else n
        z = np.zeros((m, n), dtype=complex)
        return cls(z, z)

    @classmethod
    def identity(cls, n: int) -> "DualMatrix":
        return cls(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))

    @classmethod
    def diag(cls, values) -> "DualMatrix":
        vals = [DualComplex.coerce(v) for v in values]
        return cls(np.diag([v.s for v in vals]).astype(complex).reshape(len(vals), len(vals)),
                   np.diag([v.d for v in vals]).astype(complex).reshape(len(vals), len(vals)))

    @classmethod
    def block(cls, rows) -> "DualMatrix":
        """Assemble from a nested list of blocks (like ``numpy.block``)."""
        return cls(np.block([[b.S for b in row] for row in rows]),
                   np.block([[b.D for b in row] for row in rows]))

    # basic properties ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.S.shape

    @property
    def H(self) -> "DualMatrix":
        return dm_adjoint(self)

    def scale(self) -> float:
        return max(_maxabs(self.S), _maxabs(self.D), 1.0)

    def is_appreciable(self) -> bool:
        return _maxabs(self.S) > DEFAULT.appreciable * self.scale()

    def __getitem__(self, key) -> "DualMatrix":
        S, D = self.S[key], self.D[key]
        if S.ndim != 2:
            raise IndexError("DualMatrix indexing must keep two dimensions; use slices")
        return DualMatrix(S, D)

    def entry(self, i: int, j: int) -> DualComplex:
        return DualComplex(self.S[i, j], self.D[i, j])

    # algebra ------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other, self.shape)
        _same_shape(self, other)
        return DualMatrix(self.S + other.S, self.D + other.D)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        other = _coerce(other, self.shape)
        _same_shape(self, other)
        return DualMatrix(self.S - other.S, self.D - other.D)

    def __rsub__(self, other):
        return _coerce(other, self.shape) - self

    def __neg__(self):
        return DualMatrix(-self.S, -self.D)

    def __mul__(self, c):
        c = DualComplex.coerce(c)
        return DualMatrix(c.s * self.S, c.s * self.D + c.d * self.S)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return dm_mul(self, other)

    def __pow__(self, k: int):
        if k < 0:
            return dm_inv(self) ** (-k)
        out = DualMatrix.identity(self.shape[0])
        for _ in range(k):
            out = out @ self
        return out

    def inv(self) -> "DualMatrix":
        return dm_inv(self)

    def conj(self) -> "DualMatrix":
        return DualMatrix(self.S.conj(), self.D.conj())

    def __repr__(self):
        return f"DualMatrix(shape={self.shape},\n S=\n{self.S},\n D=\n{self.D})"


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def _coerce(x, shape) -> DualMatrix:
    if isinstance(x, DualMatrix):
        return x
    if np.isscalar(x) or isinstance(x, DualComplex):
        c = DualComplex.coerce(x)
        if shape[0] != shape[1]:
            raise ShapeMismatch("scalar shift needs a square matrix")
        return c * DualMatrix.identity(shape[0])
    raise TypeError(f"cannot combine DualMatrix with {type(x).__name__}")


def _same_shape(X: DualMatrix, Y: DualMatrix):
    if X.shape != Y.shape:
        raise ShapeMismatch(f"shapes {X.shape} and {Y.shape} differ")


def dm_mul(X: DualMatrix, Y: DualMatrix) -> DualMatrix:
    """``(X_s Y_s, X_s Y_d + X_d Y_s)``."""
    if not isinstance(Y, DualMatrix):
        return NotImplemented
    if X.shape[1] != Y.shape[0]:
        raise ShapeMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    return DualMatrix(X.S @ Y.S, X.S @ Y.D + X.D @ Y.S)


def dm_adjoint(X: DualMatrix) -> DualMatrix:
    return DualMatrix(X.S.conj().T, X.D.conj().T)


def dm_inv(X: DualMatrix, rtol: float | None = None) -> DualMatrix:
    """``A_s^{-1} - eps A_s^{-1} A_d A_s^{-1}`` for square ``X`` with invertible standard part."""
    m, n = X.shape
    if m != n:
        raise ShapeMismatch(f"inverse needs a square matrix, got {X.shape}")
    if n == 0:
        return X
    if cmatrix.rank_tol(X.S, rtol) < n:
        raise SingularStandardPart("standard part is singular")
    Si = np.linalg.inv(X.S)
    return DualMatrix(Si, -Si @ X.D @ Si)


def max_deviation(X: DualMatrix, Y: DualMatrix) -> float:
    """Entrywise max deviation over both parts, unnormalized."""
    _same_shape(X, Y)
    return max(_maxabs(X.S - Y.S), _maxabs(X.D - Y.D))


def relative_deviation(X: DualMatrix, Y: DualMatrix) -> float:
    """Max deviation divided by the common scale ``max(|S|, |D|, 1)`` of both arguments."""
    return max_deviation(X, Y) / max(X.scale(), Y.scale())


def dm_approx_eq(X: DualMatrix, Y: DualMatrix, tol: float = 1e-12) -> bool:
    return relative_deviation(X, Y) < tol


def is_dual_unitary(X: DualMatrix, tol: float = 1e-10) -> bool:
    m, n = X.shape
    if m != n:
        raise ShapeMismatch(f"dual unitarity needs a square matrix, got {X.shape}")
    return max_deviation(X @ X.H, DualMatrix.identity(n)) < tol


def frobenius(X: DualMatrix) -> tuple[float, float]:
    return float(np.linalg.norm(X.S)), float(np.linalg.norm(X.D))


def as_dual(X) -> DualMatrix:
    if isinstance(X, DualMatrix):
        return X
    return DualMatrix.of(X)
