"""Coincidence and self-inverse characterizations, composite identities, and dual partial orders.

Every identity side is recomputed from ``A`` with its own inverse calls, so a
defect in one expression cannot confirm itself through a shared
intermediate.  Inverses of derived matrices (``A^3``, ``A^#``, ``A^*`` ...)
use the closed formula route; the existence of these inverses follows from
``A`` having dual index one, which is checked once up front.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import cmatrix
from .config import Tolerance, resolve
from .dmatrix import DualMatrix, as_dual, max_deviation, relative_deviation
from .errors import NotIndexOne, ShapeMismatch, ToleranceBreach
from .ginv import _formula, dmpgi_exists, dual_index_is_one
from .hsd import hs_partitioned


@dataclass(frozen=True, eq=False)
class IdentityCheck:
    name: str
    lhs: DualMatrix
    rhs: DualMatrix
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


@dataclass(frozen=True, eq=False)
class IdentityReport:
    """Named checks plus, optionally, equivalences between groups of them.

    An equivalence is ``(name, sides)`` where each side is a tuple of check
    names read as a conjunction; the equivalence is consistent when all
    sides evaluate to the same boolean.
    """

    kind: str
    checks: tuple[IdentityCheck, ...]
    equivalences: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...] = field(default_factory=tuple)

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def side_values(self) -> dict[str, tuple[bool, ...]]:
        return {
            name: tuple(all(self[c].passed for c in side) for side in sides)
            for name, sides in self.equivalences
        }

    @property
    def consistent(self) -> bool:
        return all(len(set(v)) == 1 for v in self.side_values().values())

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "checks": {c.name: {"residual": c.residual, "tol": c.tol, "passed": c.passed} for c in self.checks},
            "passed": self.passed,
        }
        if self.equivalences:
            out["equivalences"] = {k: list(v) for k, v in self.side_values().items()}
            out["consistent"] = self.consistent
        return out


@dataclass(frozen=True)
class OrderVerdict:
    kind: str
    evidence: dict[str, bool]
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.evidence.values())

    def to_dict(self) -> dict:
        return {"kind": self.kind, "holds": self.holds, "evidence": self.evidence, "residuals": self.residuals}


# ---------------------------------------------------------------- helpers


def _inv(kind: str, X: DualMatrix, tol: Tolerance) -> DualMatrix:
    Xs, R = _formula(kind, X, tol)
    return DualMatrix(Xs, -R)


def _mp(X, tol):
    return _inv("dmpgi", X, tol)


def _grp(X, tol):
    return _inv("dggi", X, tol)


def _core(X, tol):
    return _inv("dcgi", X, tol)


def _require_index_one(A: DualMatrix, tol: Tolerance):
    dual_index_is_one(A, tol).require(NotIndexOne)


def _check(name: str, lhs: DualMatrix, rhs: DualMatrix, tol: float) -> IdentityCheck:
    return IdentityCheck(name, lhs, rhs, relative_deviation(lhs, rhs), tol)


def _zero_check(name: str, X: DualMatrix, tol: float) -> IdentityCheck:
    return _check(name, X, DualMatrix.zeros(*X.shape), tol)


def _prep(A, tol):
    tol = resolve(tol)
    A = as_dual(A)
    _require_index_one(A, tol)
    return A, tol


# ------------------------------------------------- characterization results


def coincidence(A, tol: Tolerance | None = None) -> IdentityReport:
    """``A^N = A^#``, ``A^N = A^core``, ``A^# = A^core`` and ``L = 0`` are equivalent."""
    A, tol = _prep(A, tol)
    e = tol.identity
    N = _inv("ndmpi", A, tol)
    G = _grp(A, tol)
    C = _core(A, tol)
    L = hs_partitioned(A, tol).L
    checks = (
        _check("N=#", N, G, e),
        _check("N=core", N, C, e),
        _check("#=core", G, C, e),
        _zero_check("L=0", L, e),
    )
    return IdentityReport("coincidence", checks, (("coincidence", (("N=#",), ("N=core",), ("#=core",), ("L=0",))),))


def self_inverse_checks(A, tol: Tolerance | None = None) -> IdentityReport:
    """Four equivalences between self-inverse properties and block conditions."""
    A, tol = _prep(A, tol)
    e = tol.identity
    hs = hs_partitioned(A, tol)
    r = hs.r
    S1K = hs.Sigma1_matrix @ hs.K
    checks = (
        _check("A=A#", A, _grp(A, tol), e),
        _check("A=Acore", A, _core(A, tol), e),
        _check("A*=A#", A.H, _grp(A, tol), e),
        _check("A*=Acore", A.H, _core(A, tol), e),
        _check("(S1K)^2=I", S1K @ S1K, DualMatrix.identity(r), e),
        _zero_check("L=0", hs.L, e),
        _check("S1=I", hs.Sigma1_matrix, DualMatrix.identity(r), e),
    )
    eqs = (
        ("A=A#", (("A=A#",), ("(S1K)^2=I",))),
        ("A=Acore", (("A=Acore",), ("L=0", "(S1K)^2=I"))),
        ("A*=A#", (("A*=A#",), ("L=0", "S1=I"))),
        ("A*=Acore", (("A*=Acore",), ("L=0", "S1=I"))),
    )
    return IdentityReport("self_inverse", checks, eqs)


# ------------------------------------------------------- identity suites


def identity_suite_group(A, tol: Tolerance | None = None) -> IdentityReport:
    A, tol = _prep(A, tol)
    e = tol.identity
    H = lambda X: X.H  # noqa: E731
    A3 = A @ A @ A
    checks = (
        _check("(a) A#=A(A^3)+A", _grp(A, tol), A @ _mp(A3, tol) @ A, e),
        _check("(b) (A#)#=A", _grp(_grp(A, tol), tol), A, e),
        _check("(c) (A#)+=A+A^3A+", _mp(_grp(A, tol), tol), _mp(A, tol) @ A3 @ _mp(A, tol), e),
        _check("(d) (A*)#=(A#)*", _grp(H(A), tol), H(_grp(A, tol)), e),
        _check("(e) AA#(A#)+=A^2A+", A @ _grp(A, tol) @ _mp(_grp(A, tol), tol), A @ A @ _mp(A, tol), e),
        _check("(f) (A#)+A#A=A", _mp(_grp(A, tol), tol) @ _grp(A, tol) @ A, A, e),
        _check("(g) (A*)#=(A+)#", _grp(H(A), tol), _grp(_mp(A, tol), tol), e),
        _check("(h) (A+)#=(A*)#A*AA*(A*)#", _grp(_mp(A, tol), tol),
               _grp(H(A), tol) @ H(A) @ A @ H(A) @ _grp(H(A), tol), e),
    )
    return IdentityReport("group", checks)


def identity_suite_core(A, tol: Tolerance | None = None) -> IdentityReport:
    A, tol = _prep(A, tol)
    e = tol.identity
    checks = (
        _check("(a) Acore=A#AA+", _core(A, tol), _grp(A, tol) @ A @ _mp(A, tol), e),
        _check("(b) (Acore)+=A^2A+", _mp(_core(A, tol), tol), A @ A @ _mp(A, tol), e),
        _check("(c) (Acore)+=(Acore)#", _mp(_core(A, tol), tol), _grp(_core(A, tol), tol), e),
        _check("(d) (Acore)core=A^2A+", _core(_core(A, tol), tol), A @ A @ _mp(A, tol), e),
        _check("(e) AcoreA=A#A", _core(A, tol) @ A, _grp(A, tol) @ A, e),
        _check("(f) (Acore)^2A=A#", _core(A, tol) @ _core(A, tol) @ A, _grp(A, tol), e),
        _check("(g) Acore(Acore)+=(Acore)+Acore", _core(A, tol) @ _mp(_core(A, tol), tol),
               _mp(_core(A, tol), tol) @ _core(A, tol), e),
    )
    return IdentityReport("core", checks)


# --------------------------------------------------------- partial orders


def _same_square(A: DualMatrix, B: DualMatrix):
    if A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise ShapeMismatch(f"need two square matrices of one size, got {A.shape} and {B.shape}")


def _index_one(A: DualMatrix, tol: Tolerance) -> bool:
    rep = dual_index_is_one(A, tol)
    if not rep.agree:
        raise ToleranceBreach(f"dual index predicates disagree: {rep.values}")
    return rep.exists


def dcore_leq(A, B, tol: Tolerance | None = None) -> OrderVerdict:
    """``A^core A = A^core B`` and ``A A^core = B A^core``, both matrices of dual index one."""
    tol = resolve(tol)
    A, B = as_dual(A), as_dual(B)
    _same_square(A, B)
    evidence = {"A_index1": _index_one(A, tol), "B_index1": _index_one(B, tol)}
    residuals: dict[str, float] = {}
    if evidence["A_index1"]:
        C = _core(A, tol)
        scale = max(A.scale(), B.scale(), C.scale())
        residuals["AcoreA=AcoreB"] = max_deviation(C @ A, C @ B) / scale
        residuals["AAcore=BAcore"] = max_deviation(A @ C, B @ C) / scale
        for k, v in residuals.items():
            evidence[k] = v < tol.identity
    else:
        evidence["AcoreA=AcoreB"] = evidence["AAcore=BAcore"] = False
    return OrderVerdict("dcore", evidence, residuals)


def _rank_abs(X: np.ndarray, cut: float) -> int:
    return int(np.sum(cmatrix.singular_values(X) > cut)) if X.size else 0


def _tol_for(X: DualMatrix, cut: float, tol: Tolerance) -> Tolerance:
    """Rank cutoff pinned to the absolute level ``cut``, for matrices formed by subtraction."""
    smax = cmatrix.singular_values(X.S)[0] if X.S.size else 0.0
    return replace(tol, rank_rtol=cut / smax) if smax > cut else replace(tol, rank_rtol=1.0)


def dminus_leq(A, B, tol: Tolerance | None = None) -> OrderVerdict:
    """Minus order of the standard parts plus existence of the DMPGIs of ``A``, ``B`` and ``B - A``.

    Ranks here use one absolute cutoff ``zero * max(scale(A), scale(B))``:
    ``B - A`` is formed by subtraction, so its rounding noise is set by the
    size of the operands rather than of the difference.
    """
    tol = resolve(tol)
    A, B = as_dual(A), as_dual(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes {A.shape} and {B.shape} differ")
    cut = tol.zero * max(A.scale(), B.scale())
    Dif = B - A
    rA, rB, rD = (_rank_abs(X.S, cut) for X in (A, B, Dif))
    evidence = {"minus_rank": rD == rB - rA}
    for name, X in (("A_dmpgi", A), ("B_dmpgi", B), ("B-A_dmpgi", Dif)):
        rep = dmpgi_exists(X, _tol_for(X, cut, tol))
        evidence[name] = rep.agree and rep.exists
    return OrderVerdict("dminus", evidence, {"rank_A": rA, "rank_B": rB, "rank_B-A": rD})


def dcore_dominator(A, P, tol: Tolerance | None = None) -> DualMatrix:
    """``U [Sigma1 K, Sigma1 L; 0 P] U^*`` from the H-S form of ``A``; above ``A`` in the D-core order."""
    A, tol = _prep(A, tol)
    P = as_dual(P)
    hs = hs_partitioned(A, tol)
    n, r = A.shape[0], hs.r
    if P.shape != (n - r, n - r):
        raise ShapeMismatch(f"P must be {(n - r, n - r)}, got {P.shape}")
    if n > r:
        _require_index_one(P, tol)
    S1 = hs.Sigma1_matrix
    core = DualMatrix.block([[S1 @ hs.K, S1 @ hs.L], [DualMatrix.zeros(n - r, r), P]])
    return hs.U @ core @ hs.U.H
