"""Dual real and dual complex scalars ``s + eps*d`` with ``eps**2 = 0``."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

from .config import DEFAULT
from .errors import NotAppreciable


def _threshold(scale: float, rel: float | None) -> float:
    rel = DEFAULT.appreciable if rel is None else rel
    return rel * max(1.0, abs(scale))


@dataclass(frozen=True)
class DualComplex:
    """A dual complex number.

    Dual complex numbers carry no order; only :class:`DualReal` does.
    """

    s: complex = 0j
    d: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "d", complex(self.d))

    @classmethod
    def coerce(cls, x) -> "DualComplex":
        if isinstance(x, (DualComplex, DualReal)):
            return cls(x.s, x.d)
        if isinstance(x, Number):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {x!r} as a dual number")

    def __add__(self, other):
        if not isinstance(other, (DualComplex, DualReal, Number)):
            return NotImplemented
        o = DualComplex.coerce(other)
        return DualComplex(self.s + o.s, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return DualComplex(-self.s, -self.d)

    def __sub__(self, other):
        return self + (-DualComplex.coerce(other))

    def __rsub__(self, other):
        return DualComplex.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (DualComplex, DualReal, Number)):
            return NotImplemented
        return dc_mul(self, DualComplex.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return dc_mul(self, dc_inv(DualComplex.coerce(other)))

    def __rtruediv__(self, other):
        return dc_mul(DualComplex.coerce(other), dc_inv(self))

    def conjugate(self) -> "DualComplex":
        return DualComplex(self.s.conjugate(), self.d.conjugate())

    def inverse(self) -> "DualComplex":
        return dc_inv(self)

    def is_appreciable(self, scale: float = 1.0) -> bool:
        return is_appreciable(self, scale=scale)

    def to_list(self) -> list[float]:
        return [self.s.real, self.s.imag, self.d.real, self.d.imag]

    @classmethod
    def from_list(cls, v) -> "DualComplex":
        re_s, im_s, re_d, im_d = v
        return cls(complex(re_s, im_s), complex(re_d, im_d))

    def __repr__(self):
        return f"DualComplex({self.s!r} + eps*{self.d!r})"


@dataclass(frozen=True, order=False)
class DualReal:
    """A dual real number, totally ordered lexicographically."""

    s: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "d", float(self.d))

    def __add__(self, other):
        o = _as_dreal(other)
        return DualReal(self.s + o.s, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return DualReal(-self.s, -self.d)

    def __sub__(self, other):
        return self + (-_as_dreal(other))

    def __mul__(self, other):
        o = _as_dreal(other)
        return DualReal(self.s * o.s, self.s * o.d + self.d * o.s)

    __rmul__ = __mul__

    def inverse(self) -> "DualReal":
        if not self.is_appreciable():
            raise NotAppreciable(f"{self!r} has zero standard part")
        return DualReal(1.0 / self.s, -self.d / self.s**2)

    def __le__(self, other):
        return dreal_leq(self, _as_dreal(other))

    def __lt__(self, other):
        o = _as_dreal(other)
        return dreal_leq(self, o) and not dreal_leq(o, self)

    def __ge__(self, other):
        return dreal_leq(_as_dreal(other), self)

    def __gt__(self, other):
        return _as_dreal(other) < self

    def is_positive(self) -> bool:
        return self.s > 0 or (self.s == 0 and self.d > 0)

    def is_appreciable(self, scale: float = 1.0) -> bool:
        return is_appreciable(DualComplex(self.s, self.d), scale=scale)

    def to_list(self) -> list[float]:
        return [self.s, 0.0, self.d, 0.0]

    def __repr__(self):
        return f"DualReal({self.s!r} + eps*{self.d!r})"


def _as_dreal(x) -> DualReal:
    if isinstance(x, DualReal):
        return x
    if isinstance(x, (int, float)):
        return DualReal(x, 0.0)
    raise TypeError(f"dual reals only compare with dual reals, got {type(x).__name__}")


EPS = DualComplex(0, 1)


def dc_mul(x: DualComplex, y: DualComplex) -> DualComplex:
    """Product with the eps**2 term discarded."""
    return DualComplex(x.s * y.s, x.s * y.d + x.d * y.s)


def dc_inv(x: DualComplex, scale: float = 1.0, rel: float | None = None) -> DualComplex:
    """Inverse ``1/s - eps * d/s**2``; raises :class:`NotAppreciable` otherwise."""
    if not is_appreciable(x, scale=scale, rel=rel):
        raise NotAppreciable(f"{x!r} is not appreciable")
    inv_s = 1.0 / x.s
    return DualComplex(inv_s, -x.d * inv_s * inv_s)


def dreal_leq(a: DualReal, b: DualReal) -> bool:
    """``a <= b`` in the lexicographic order: standard parts first."""
    if not isinstance(a, DualReal) or not isinstance(b, DualReal):
        raise TypeError("dreal_leq is only defined for DualReal operands")
    if a.s < b.s:
        return True
    return a.s == b.s and a.d <= b.d


def is_appreciable(x, scale: float = 1.0, rel: float | None = None) -> bool:
    """True iff ``|x.s|`` exceeds ``rel * max(1, scale)`` (default ``rel`` 1e-12)."""
    return abs(x.s) > _threshold(scale, rel)
