"""Tolerance configuration.

All numerical cutoffs in the package flow from a single :class:`Tolerance`
record so that reports can embed the exact settings they were produced with.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

ENV_VAR = "DUALMAT_TOL"


@dataclass(frozen=True)
class Tolerance:
    """Numerical cutoffs.

    Attributes
    ----------
    appreciable : float
        A dual scalar with ``|s| <= appreciable * max(1, scale)`` counts as
        infinitesimal.
    zero : float
        Absolute cutoff, multiplied by the matrix scale
        ``max(|S|_max, |D|_max, 1)``, below which infinitesimal singular
        values and projector residuals are treated as zero.
    rank_rtol : float or None
        Relative singular-value cutoff for complex ranks. ``None`` means
        ``max(rows, cols) * machine_eps``.
    group_gap : float
        Standard singular values whose relative gap is below this are
        handled as one repeated value in the dual SVD.
    residual : float
        Pass/fail threshold for defining-equation residuals.
    identity : float
        Pass/fail threshold for composite identities and order equalities,
        which chain several inverses and so lose more digits.
    max_sweeps : int
        Iteration cap of the Jacobi SVD.
    """

    appreciable: float = 1e-12
    zero: float = 1e-10
    rank_rtol: float | None = None
    group_gap: float = 1e-8
    residual: float = 1e-9
    identity: float = 1e-8
    max_sweeps: int = 60

    def with_residual(self, value: float) -> "Tolerance":
        return replace(self, residual=float(value))

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerance()


def default_tolerance() -> Tolerance:
    """The default record, with ``residual`` overridden by ``$DUALMAT_TOL``."""
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT
    return DEFAULT.with_residual(float(raw))


def resolve(tol: Tolerance | None) -> Tolerance:
    return DEFAULT if tol is None else tol
