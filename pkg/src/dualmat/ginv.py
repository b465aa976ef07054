"""Dual generalized inverses: DMPGI, NDMPI, DGGI and DCGI.

Each inverse has two independent routes:

``formula``
    closed expressions in the standard-part inverses ``A_s^+``, ``A_s^#`` and
    ``A_s^(core)``, of the form ``X_s - eps R``;
``decomposition``
    block expressions in the dual Hartwig-Spindelboeck form (square inputs)
    or the dual SVD (rectangular inputs).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cmatrix
from .cmatrix import adjoint
from .config import Tolerance, resolve
from .dmatrix import DualMatrix, as_dual, dm_inv, max_deviation
from .dsvd import DualSVD, dual_svd
from .errors import InverseNotExists, NotIndexOne, ShapeMismatch, SingularStandardPart, ToleranceBreach
from .hsd import hs_partitioned

KINDS = ("dmpgi", "ndmpi", "dggi", "dcgi")
METHODS = ("formula", "decomposition")

EQUATIONS = {
    "dmpgi": ("AXA=A", "XAX=X", "(AX)*=AX", "(XA)*=XA"),
    "ndmpi": ("AXA=Ae", "XAX=X", "(AX)*=AX", "(XA)*=XA"),
    "dggi": ("AXA=A", "XAX=X", "AX=XA"),
    "dcgi": ("AXA=A", "AX^2=X", "(AX)*=AX"),
}


@dataclass(frozen=True, eq=False)
class GinvResult:
    kind: str
    value: DualMatrix
    method: str
    R: np.ndarray
    residuals: dict[str, float]
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())


@dataclass(frozen=True)
class Predicate:
    """One existence condition with the raw numbers it was decided from.

    ``margins`` lists ``(value, threshold)`` pairs for the decisions taken
    against a configured tolerance; the predicate is borderline when any
    value lies within ``factor`` of its threshold.  Ranks taken at the
    machine-precision cutoff are not listed: rounding noise sits next to
    that cutoff by construction, so it carries no borderline signal.
    """

    name: str
    holds: bool
    margins: tuple[tuple[float, float], ...] = ()

    def borderline(self, factor: float = 10.0) -> bool:
        return any(thr / factor <= v <= thr * factor for v, thr in self.margins if thr > 0)


@dataclass(frozen=True)
class ExistenceReport:
    kind: str
    predicates: tuple[Predicate, ...] = field(default_factory=tuple)

    @property
    def values(self) -> dict[str, bool]:
        return {p.name: p.holds for p in self.predicates}

    @property
    def agree(self) -> bool:
        return len(set(self.values.values())) <= 1

    @property
    def exists(self) -> bool:
        """The common verdict; only meaningful when :attr:`agree` holds."""
        return all(self.values.values())

    def borderline(self, factor: float = 10.0) -> bool:
        return any(p.borderline(factor) for p in self.predicates)

    def require(self, error: type[Exception]) -> None:
        if not self.agree:
            raise ToleranceBreach(f"{self.kind}: equivalent predicates disagree: {self.values}")
        if not self.exists:
            raise error(f"{self.kind}: existence conditions fail: {self.values}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "predicates": self.values,
            "agree": self.agree,
            "exists": self.exists if self.agree else None,
            "borderline": self.borderline(),
        }


# ---------------------------------------------------------------- helpers


def _sv(A: np.ndarray) -> np.ndarray:
    return cmatrix.singular_values(A) if A.size else np.zeros(0)


def _spectrum_margins(sigma: np.ndarray, thr: float) -> tuple[tuple[float, float], ...]:
    return tuple((float(v), thr) for v in sigma)


def _rank(A: np.ndarray, rtol) -> int:
    return cmatrix.rank_tol(A, rtol) if A.size else 0


def _require_square(A: DualMatrix):
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"square matrix required, got {A.shape}")


def _mp_projected_block(A: DualMatrix, rtol) -> np.ndarray:
    """``(I - A_s A_s^+) A_d (I - A_s^+ A_s)``."""
    m, n = A.shape
    P = cmatrix.pinv(A.S, rtol)
    return (np.eye(m) - A.S @ P) @ A.D @ (np.eye(n) - P @ A.S)


# ------------------------------------------------------------- existence


def dmpgi_exists(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> ExistenceReport:
    """Three equivalent conditions for the DMPGI to exist.

    ``projector``  (I - A_s A_s^+) A_d (I - A_s^+ A_s) = 0
    ``bordered_rank``  rank [A_d A_s; A_s 0] = 2 rank A_s
    ``rank_equality``  ARank = Rank (no infinitesimal singular values)
    """
    tol = resolve(tol)
    A = as_dual(A)
    m, n = A.shape
    zthr = tol.zero * A.scale()

    proj = _mp_projected_block(A, tol.rank_rtol)
    proj_sv = _sv(proj)
    p_b = Predicate("projector", bool(proj_sv.size == 0 or proj_sv[0] <= zthr),
                    _spectrum_margins(proj_sv[:1], zthr))

    r = _rank(A.S, tol.rank_rtol)
    bordered = np.block([[A.D, A.S], [A.S, np.zeros((m, n))]])
    b_sv = _sv(bordered)
    b_rank = int(np.sum(b_sv > zthr))
    p_c = Predicate("bordered_rank", b_rank == 2 * r, _spectrum_margins(b_sv, zthr))

    svd = dual_svd(A, tol) if svd is None else svd
    p_e = Predicate("rank_equality", svd.r == svd.t, _spectrum_margins(svd.null_spectrum, zthr))
    return ExistenceReport("dmpgi", (p_b, p_c, p_e))


def dual_index_is_one(A, tol: Tolerance | None = None, svd: DualSVD | None = None) -> ExistenceReport:
    """Equivalent characterizations of dual index one.

    ``aind1_dmpgi``  Ind(A_s) = 1 and the DMPGI exists (projector test)
    ``aind1_group_projector``  Ind(A_s) = 1 and (I - A_s A_s^#) A_d (I - A_s A_s^#) = 0
    ``K1_invertible_sigma2_zero``  K1 invertible in the refined H-S form and no infinitesimal singular values
    ``K_invertible_sigma2_zero``  the dual block K inverts (checked by its inverse) and no infinitesimal singular values
    """
    tol = resolve(tol)
    A = as_dual(A)
    _require_square(A)
    n = A.shape[0]
    zthr = tol.zero * A.scale()

    # the index of A_s is judged on the same cosine, at the same level, as K1 below
    cos = cmatrix.index_one_margin(A.S, tol.rank_rtol) if n else 1.0
    aind1 = cos > tol.zero
    cos_margin = ((cos, tol.zero),)

    proj_sv = _sv(_mp_projected_block(A, tol.rank_rtol))
    mp_ok = bool(proj_sv.size == 0 or proj_sv[0] <= zthr)
    p_b = Predicate("aind1_dmpgi", aind1 and mp_ok, cos_margin + _spectrum_margins(proj_sv[:1], zthr))

    if aind1:
        G = cmatrix.group_inv(A.S, tol.rank_rtol, tol.zero)
        E = np.eye(n) - A.S @ G
        g_sv = _sv(E @ A.D @ E)
        g_ok = bool(g_sv.size == 0 or g_sv[0] <= zthr)
        p_c = Predicate("aind1_group_projector", g_ok, cos_margin + _spectrum_margins(g_sv[:1], zthr))
    else:
        p_c = Predicate("aind1_group_projector", False, cos_margin)

    svd = dual_svd(A, tol) if svd is None else svd
    hs = hs_partitioned(A, tol, svd)
    sig2_zero = svd.t == svd.r
    sig2_margins = _spectrum_margins(svd.null_spectrum, zthr)
    k1_sv = _sv(hs.K.S)
    k1_ok = bool(k1_sv.size == 0 or k1_sv[-1] > tol.zero)
    p_e = Predicate("K1_invertible_sigma2_zero", k1_ok and sig2_zero,
                    _spectrum_margins(k1_sv[-1:], tol.zero) + sig2_margins)

    # K is a block of a dual unitary, so its scale is 1: judge rank at the absolute level tol.zero
    k_rtol = tol.zero / k1_sv[0] if k1_sv.size and k1_sv[0] > 0 else 1.0
    try:
        Kinv = dm_inv(hs.K, k_rtol)
        k_ok = max_deviation(hs.K @ Kinv, DualMatrix.identity(svd.r)) < tol.residual * max(1.0, Kinv.scale())
    except SingularStandardPart:
        k_ok = False
    p_f = Predicate("K_invertible_sigma2_zero", k_ok and sig2_zero,
                    _spectrum_margins(k1_sv[-1:], tol.zero) + sig2_margins)
    return ExistenceReport("index1", (p_b, p_c, p_e, p_f))


# --------------------------------------------------------- formula route


def _mp_formula(As: np.ndarray, Ad: np.ndarray, rtol):
    m, n = As.shape
    P = cmatrix.pinv(As, rtol)
    R = (P @ Ad @ P
         - cmatrix.pinv(adjoint(As) @ As, rtol) @ adjoint(Ad) @ (np.eye(m) - As @ P)
         - (np.eye(n) - P @ As) @ adjoint(Ad) @ cmatrix.pinv(As @ adjoint(As), rtol))
    return P, R


def essential_by_projection(A, tol: Tolerance | None = None) -> DualMatrix:
    """``A - eps (I - A_s A_s^+) A_d (I - A_s^+ A_s)``, the essential part without a dual SVD."""
    tol = resolve(tol)
    A = as_dual(A)
    return DualMatrix(A.S, A.D - _mp_projected_block(A, tol.rank_rtol))


def _formula(kind: str, A: DualMatrix, tol: Tolerance):
    As, Ad = np.asarray(A.S), np.asarray(A.D)
    rtol = tol.rank_rtol
    if kind == "dmpgi":
        return _mp_formula(As, Ad, rtol)
    if kind == "ndmpi":
        Ae = essential_by_projection(A, tol)
        return _mp_formula(np.asarray(Ae.S), np.asarray(Ae.D), rtol)
    n = As.shape[0]
    I = np.eye(n)
    G = cmatrix.group_inv(As, rtol, tol.zero)
    if kind == "dggi":
        G2 = G @ G
        R = G @ Ad @ G - G2 @ Ad @ (I - As @ G) - (I - As @ G) @ Ad @ G2
        return G, R
    P = cmatrix.pinv(As, rtol)
    C = G @ As @ P
    R = (C @ Ad @ P - G @ Ad @ P + G @ Ad @ C
         - C @ adjoint(Ad @ P) @ (I - As @ P)
         - (I - As @ G) @ Ad @ G @ C)
    return C, R


# --------------------------------------------------- decomposition route


def _decomposition(kind: str, A: DualMatrix, tol: Tolerance, svd: DualSVD | None) -> DualMatrix:
    svd = dual_svd(A, tol) if svd is None else svd
    r = svd.r
    S1inv = dm_inv(svd.Sigma1) if r else DualMatrix.zeros(0)
    m, n = A.shape
    if m != n:
        # rectangular: V [Sigma1^{-1} 0; 0 0] U^*
        core = DualMatrix.block([[S1inv, DualMatrix.zeros(r, m - r)],
                                 [DualMatrix.zeros(n - r, r), DualMatrix.zeros(n - r, m - r)]])
        return svd.V @ core @ svd.U.H
    hs = hs_partitioned(A, tol, svd)
    K, L, U = hs.K, hs.L, hs.U
    Z_rk = DualMatrix.zeros(r, n - r)
    Z_kr = DualMatrix.zeros(n - r, r)
    Z_kk = DualMatrix.zeros(n - r, n - r)
    if kind in ("dmpgi", "ndmpi"):
        core = DualMatrix.block([[K.H @ S1inv, Z_rk], [L.H @ S1inv, Z_kk]])
    else:
        Kinv = dm_inv(K, tol.rank_rtol)
        top_left = Kinv @ S1inv
        if kind == "dggi":
            core = DualMatrix.block([[top_left, top_left @ Kinv @ L], [Z_kr, Z_kk]])
        else:
            core = DualMatrix.block([[top_left, Z_rk], [Z_kr, Z_kk]])
    return U @ core @ U.H


# ------------------------------------------------------------- public API


def verify_defining_equations(kind: str, A, X, tol: Tolerance | None = None,
                              essential: DualMatrix | None = None) -> dict[str, float]:
    """Per-equation residuals, max-entry over both parts divided by ``max(scale(A), scale(X))``."""
    if kind not in KINDS:
        raise ValueError(f"unknown inverse kind {kind!r}")
    A, X = as_dual(A), as_dual(X)
    m, n = A.shape
    if X.shape != (n, m):
        raise ShapeMismatch(f"{kind} of a {A.shape} matrix must be {(n, m)}, got {X.shape}")
    if kind in ("dggi", "dcgi") and m != n:
        raise ShapeMismatch(f"{kind} needs a square matrix, got {A.shape}")
    scale = max(A.scale(), X.scale())
    AX, XA = A @ X, X @ A
    if kind == "ndmpi":
        target = essential_by_projection(A, tol) if essential is None else essential
    else:
        target = A
    # lazy, since AX^2 and AX=XA only make sense for square A
    checks = {
        "AXA=A": lambda: (AX @ A, A),
        "AXA=Ae": lambda: (AX @ A, target),
        "XAX=X": lambda: (XA @ X, X),
        "(AX)*=AX": lambda: (AX.H, AX),
        "(XA)*=XA": lambda: (XA.H, XA),
        "AX=XA": lambda: (AX, XA),
        "AX^2=X": lambda: (AX @ X, X),
    }
    return {name: max_deviation(*checks[name]()) / scale for name in EQUATIONS[kind]}


def _compute(kind: str, A, method: str, tol: Tolerance | None, svd: DualSVD | None) -> GinvResult:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    tol = resolve(tol)
    A = as_dual(A)
    if kind in ("dggi", "dcgi"):
        _require_square(A)
    if kind == "dmpgi":
        svd = dual_svd(A, tol) if svd is None else svd
        dmpgi_exists(A, tol, svd).require(InverseNotExists)
    elif kind in ("dggi", "dcgi"):
        svd = dual_svd(A, tol) if svd is None else svd
        dual_index_is_one(A, tol, svd).require(NotIndexOne)

    if method == "formula":
        Xs, R = _formula(kind, A, tol)
        value = DualMatrix(Xs, -R)
    else:
        value = _decomposition(kind, A, tol, svd)
        R = -np.asarray(value.D)
    residuals = verify_defining_equations(kind, A, value, tol)
    return GinvResult(kind=kind, value=value, method=method, R=np.array(R), residuals=residuals, tol=tol.residual)


def dmpgi(A, method: str = "formula", tol: Tolerance | None = None, svd: DualSVD | None = None) -> GinvResult:
    """Dual Moore-Penrose generalized inverse; raises :class:`InverseNotExists` when it does not exist."""
    return _compute("dmpgi", A, method, tol, svd)


def ndmpi(A, method: str = "formula", tol: Tolerance | None = None, svd: DualSVD | None = None) -> GinvResult:
    """New dual Moore-Penrose inverse (always exists)."""
    return _compute("ndmpi", A, method, tol, svd)


def dggi(A, method: str = "formula", tol: Tolerance | None = None, svd: DualSVD | None = None) -> GinvResult:
    """Dual group inverse; raises :class:`NotIndexOne` unless A has dual index one."""
    return _compute("dggi", A, method, tol, svd)


def dcgi(A, method: str = "formula", tol: Tolerance | None = None, svd: DualSVD | None = None) -> GinvResult:
    """Dual core inverse; raises :class:`NotIndexOne` unless A has dual index one."""
    return _compute("dcgi", A, method, tol, svd)


def compute(kind: str, A, method: str = "formula", tol: Tolerance | None = None) -> GinvResult:
    if kind not in KINDS:
        raise ValueError(f"unknown inverse kind {kind!r}; expected one of {KINDS}")
    return _compute(kind, A, method, tol, None)
