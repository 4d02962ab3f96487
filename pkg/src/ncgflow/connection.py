"""Connection data (b, K) for the transport bimodule, and its residuals.

For a vector field K the inner product is preserved when two conditions
hold: the divergence condition, which pins the Hermitian part of b, and
the reality condition on K.  We always take the anti-Hermitian (gauge)
part of b to be zero, so b is fully determined by K:

* Z_n:   ``b = (R_{+1}K_+ - K_+ + R_{-1}K_- - K_-) / 2``
* M2(C): ``b = ([E12, K1] + [E21, K2]) / 2``

``reality_residual`` and ``braiding_residual`` quantify how far K is from
satisfying the reality condition and from the braided compatibility
constraint that the flow preserves.  Both vanish on admissible initial
data and are monitored, not enforced, along trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    E12,
    E21,
    Mat2Element,
    ZnElement,
    _shift_indices,
    commutator,
)
from .calculus import VectorField, apply_vf, d

__all__ = [
    "solve_b",
    "reality_residual",
    "braiding_residual",
    "divergence_pairing",
    "ConnectionData",
]


# Array kernels shared with the integrator hot path (flow / transport).

def _b_zn(kp: np.ndarray, km: np.ndarray) -> np.ndarray:
    n = kp.shape[0]
    return 0.5 * (kp[_shift_indices(n, 1)] - kp + km[_shift_indices(n, -1)] - km)


_E12A = E12.entries
_E21A = E21.entries


def _b_m2(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    return 0.5 * (_E12A @ k1 - k1 @ _E12A + _E21A @ k2 - k2 @ _E21A)


def solve_b(field: VectorField) -> AlgebraElement:
    """The b with zero gauge part satisfying the divergence condition."""
    if isinstance(field.k1, ZnElement):
        return ZnElement(_b_zn(field.k1.samples, field.k2.samples))
    return Mat2Element(_b_m2(field.k1.entries, field.k2.entries))


def reality_residual(field: VectorField) -> AlgebraElement:
    """Deviation of K from the reality condition; zero iff K is real.

    Z_n: ``rho(i) = K_-(i) + K_+(i+1)^*``; M2: ``rho = K1^* + K2``.
    """
    if isinstance(field.k1, ZnElement):
        return field.k2 + field.k1.star().shift(+1)
    return field.k1.star() + field.k2


def braiding_residual(field: VectorField) -> AlgebraElement:
    """Defect of the braided compatibility constraint.

    Z_n: ``G(i) = K_-(i) K_+(i+1) - K_-(i-1) K_+(i)``; M2: ``[K1, K2]``.
    """
    if isinstance(field.k1, ZnElement):
        return field.k2 * field.k1.shift(+1) - field.k2.shift(-1) * field.k1
    return commutator(field.k1, field.k2)


def divergence_pairing(field: VectorField, b: AlgebraElement, a: AlgebraElement) -> complex:
    """integral(b*a + K(da) + a*b^*); zero for every a iff (b, K) satisfies the divergence condition."""
    return (b * a + apply_vf(field, d(a)) + a * b.star()).integral()


@dataclass(frozen=True)
class ConnectionData:
    """A vector field together with its divergence-fixing b."""

    field: VectorField
    b: AlgebraElement

    @classmethod
    def from_vector_field(cls, field: VectorField) -> "ConnectionData":
        return cls(field, solve_b(field))
