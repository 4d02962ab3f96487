"""Arithmetic in the two finite *-algebras used by the flow solvers.

Elements are thin immutable wrappers around numpy arrays:

* ``ZnElement`` -- a complex function on the cyclic group Z_n, stored as n
  samples.  The product is pointwise, star is complex conjugation, the
  integral is the sum over the group, and ``shift`` is the group
  translation ``(R_a f)(i) = f(i + a mod n)``.
* ``Mat2Element`` -- a 2x2 complex matrix.  The product is the matrix
  product, star is the conjugate transpose and the integral is the trace.

``*`` is the algebra product in both cases (or scalar multiplication when
one operand is a plain number).  ``inner_product(a, c)`` pairs elements as
``integral(a * star(c))``, which is positive definite for both algebras.

All constructors reject non-finite entries; mixing algebras (or different
group orders) raises :class:`AlgebraMismatchError`.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "AlgebraError",
    "AlgebraMismatchError",
    "ZnElement",
    "Mat2Element",
    "AlgebraElement",
    "inner_product",
    "commutator",
    "E11",
    "E12",
    "E21",
    "E22",
    "I2",
]

_SCALAR = (int, float, complex, np.integer, np.floating, np.complexfloating)


class AlgebraError(ValueError):
    """Invalid element data (wrong shape or non-finite entries)."""


class AlgebraMismatchError(AlgebraError):
    """Operands belong to different algebras or different group orders."""


def _locked(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _shift_indices(n: int, steps: int) -> np.ndarray:
    """Index array realising R_a: ``f[_shift_indices(n, a)][i] == f[(i + a) % n]``.

    Much cheaper than np.roll for the small arrays in the integrator hot path.
    """
    return _locked((np.arange(n) + steps) % n)


class ZnElement:
    """A complex-valued function on Z_n; ``samples[i]`` is the value at i."""

    __slots__ = ("samples",)

    def __init__(self, samples):
        arr = np.array(samples, dtype=np.complex128)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise AlgebraError("ZnElement needs a 1-d array with at least 2 samples")
        if not np.isfinite(arr).all():
            raise AlgebraError("non-finite entries in ZnElement")
        self.samples = _locked(arr)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "ZnElement":
        return cls(np.zeros(n, dtype=np.complex128))

    @classmethod
    def ones(cls, n: int) -> "ZnElement":
        """The algebra unit (constant function 1)."""
        return cls(np.ones(n, dtype=np.complex128))

    @classmethod
    def delta(cls, n: int, i: int) -> "ZnElement":
        """The basis projector supported at group element ``i`` (mod n)."""
        arr = np.zeros(n, dtype=np.complex128)
        arr[i % n] = 1.0
        return cls(arr)

    def shift(self, steps: int) -> "ZnElement":
        """Group translation: ``(R_a f)(i) = f(i + a mod n)`` with a = steps."""
        return ZnElement(self.samples[_shift_indices(self.n, int(steps))])

    def star(self) -> "ZnElement":
        return ZnElement(np.conj(self.samples))

    def integral(self) -> complex:
        """Sum over the group; linear and star-compatible."""
        return complex(self.samples.sum())

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Mat2Element):
            raise AlgebraMismatchError("cannot combine ZnElement with Mat2Element")
        if not isinstance(other, ZnElement):
            raise TypeError(f"expected ZnElement, got {type(other).__name__}")
        if other.n != self.n:
            raise AlgebraMismatchError(f"group orders differ: {self.n} vs {other.n}")
        return other.samples

    def __add__(self, other):
        return ZnElement(self.samples + self._coerce(other))

    def __sub__(self, other):
        return ZnElement(self.samples - self._coerce(other))

    def __neg__(self):
        return ZnElement(-self.samples)

    def __mul__(self, other):
        if isinstance(other, _SCALAR):
            return ZnElement(self.samples * other)
        return ZnElement(self.samples * self._coerce(other))

    def __rmul__(self, other):
        if isinstance(other, _SCALAR):
            return ZnElement(other * self.samples)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _SCALAR):
            return ZnElement(self.samples / other)
        return NotImplemented

    def __repr__(self):
        return f"ZnElement({self.samples.tolist()!r})"


class Mat2Element:
    """A 2x2 complex matrix with the matrix product and trace integral."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.complex128)
        if arr.shape != (2, 2):
            raise AlgebraError("Mat2Element needs a 2x2 array")
        if not np.isfinite(arr).all():
            raise AlgebraError("non-finite entries in Mat2Element")
        self.entries = _locked(arr)

    @classmethod
    def zeros(cls) -> "Mat2Element":
        return cls(np.zeros((2, 2), dtype=np.complex128))

    @classmethod
    def identity(cls) -> "Mat2Element":
        return cls(np.eye(2, dtype=np.complex128))

    @classmethod
    def unit(cls, i: int, j: int) -> "Mat2Element":
        """Matrix unit E_ij (1-based indices, as in E12, E21)."""
        arr = np.zeros((2, 2), dtype=np.complex128)
        arr[i - 1, j - 1] = 1.0
        return cls(arr)

    @classmethod
    def diag(cls, a, d) -> "Mat2Element":
        return cls(np.diag([complex(a), complex(d)]))

    def star(self) -> "Mat2Element":
        return Mat2Element(self.entries.conj().T)

    def integral(self) -> complex:
        """Trace functional."""
        return complex(self.entries[0, 0] + self.entries[1, 1])

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, ZnElement):
            raise AlgebraMismatchError("cannot combine Mat2Element with ZnElement")
        if not isinstance(other, Mat2Element):
            raise TypeError(f"expected Mat2Element, got {type(other).__name__}")
        return other.entries

    def __add__(self, other):
        return Mat2Element(self.entries + self._coerce(other))

    def __sub__(self, other):
        return Mat2Element(self.entries - self._coerce(other))

    def __neg__(self):
        return Mat2Element(-self.entries)

    def __mul__(self, other):
        if isinstance(other, _SCALAR):
            return Mat2Element(self.entries * other)
        return Mat2Element(self.entries @ self._coerce(other))

    def __rmul__(self, other):
        if isinstance(other, _SCALAR):
            return Mat2Element(other * self.entries)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _SCALAR):
            return Mat2Element(self.entries / other)
        return NotImplemented

    def __repr__(self):
        return f"Mat2Element({self.entries.tolist()!r})"


AlgebraElement = ZnElement | Mat2Element


def inner_product(a: AlgebraElement, c: AlgebraElement) -> complex:
    """Positive-definite pairing integral(a * star(c))."""
    return (a * c.star()).integral()


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


E11 = Mat2Element.unit(1, 1)
E12 = Mat2Element.unit(1, 2)
E21 = Mat2Element.unit(2, 1)
E22 = Mat2Element.unit(2, 2)
I2 = Mat2Element.identity()
