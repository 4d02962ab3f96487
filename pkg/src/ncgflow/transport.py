"""State transport along a geodesic-velocity flow.

The transported element m obeys the parallel equation

* Z_n:   ``dm/dt = -m b - K_+ (m - R_{-1} m) - K_- (m - R_{+1} m)``
* M2(C): ``dm/dt = -b m - K1 [E12, m] - K2 [E21, m]``

with b recomputed from K at every stage.  The induced positive map is
``phi(a) = inner_product(m*a, m)`` and, for M2, its Bloch coordinates are
``(s, x, y) = (phi(diag(-1,1)), phi(X), phi(Y)) / 2``.

K and m are integrated as one coupled system (``run_zn`` / ``run_m2``)
rather than sequentially, so no interpolation error enters through K(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    AlgebraElement,
    I2,
    Mat2Element,
    ZnElement,
    _shift_indices,
    inner_product,
)
from .calculus import OneForm, VectorField, apply_vf, left_multiply_form
from .connection import (
    _b_m2,
    _b_zn,
    _E12A,
    _E21A,
    braiding_residual,
    reality_residual,
)
from .flow import Trajectory, _rhs_m2, _rhs_zn, _zn_beta, integrate, pack_complex, split_complex

__all__ = [
    "zn_transport_rhs",
    "m2_transport_rhs",
    "state_eval",
    "BlochPoint",
    "bloch",
    "velocity_functional",
    "zn_coupled_rhs",
    "m2_coupled_rhs",
    "pack_zn_state",
    "unpack_zn_state",
    "pack_m2_state",
    "unpack_m2_state",
    "ZnRun",
    "M2Run",
    "run_zn",
    "run_m2",
]


def _transport_zn(m: np.ndarray, kp: np.ndarray, km: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    n = m.shape[0]
    if b is None:
        b = _b_zn(kp, km)
    return -m * b - kp * (m - m[_shift_indices(n, -1)]) - km * (m - m[_shift_indices(n, 1)])


def _transport_m2(m: np.ndarray, k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    b = _b_m2(k1, k2)
    return -(b @ m) - k1 @ (_E12A @ m - m @ _E12A) - k2 @ (_E21A @ m - m @ _E21A)


def zn_transport_rhs(m: ZnElement, field: VectorField) -> ZnElement:
    """dm/dt for Z_n transport."""
    if not isinstance(m, ZnElement):
        raise TypeError("zn_transport_rhs expects a ZnElement")
    return ZnElement(_transport_zn(m.samples, field.k1.samples, field.k2.samples))


def m2_transport_rhs(m: Mat2Element, field: VectorField) -> Mat2Element:
    """dm/dt for M2 transport."""
    if not isinstance(m, Mat2Element):
        raise TypeError("m2_transport_rhs expects a Mat2Element")
    return Mat2Element(_transport_m2(m.entries, field.k1.entries, field.k2.entries))


def state_eval(m: AlgebraElement, a: AlgebraElement) -> complex:
    """The positive map ``phi(a) = <m a, conj m> = integral(m a m^*)``."""
    return (m * a * m.star()).integral()


@dataclass(frozen=True)
class BlochPoint:
    """State coordinates on M2; states fill the closed ball of radius 1/2."""

    s: float
    x: float
    y: float

    @property
    def radius_sq(self) -> float:
        return self.s * self.s + self.x * self.x + self.y * self.y


_OBS_S = Mat2Element([[-1.0, 0.0], [0.0, 1.0]])
_OBS_X = Mat2Element([[0.0, 1.0], [1.0, 0.0]])
_OBS_Y = Mat2Element([[0.0, -1.0j], [1.0j, 0.0]])

_HERMITIAN_IMAG_TOL = 1e-10


def _real_state_value(m: Mat2Element, obs: Mat2Element) -> float:
    value = state_eval(m, obs)
    if abs(value.imag) > _HERMITIAN_IMAG_TOL:
        raise ValueError(f"state value of Hermitian observable has imaginary part {value.imag:g}")
    return value.real


def bloch(m: Mat2Element) -> BlochPoint:
    """Bloch coordinates of the state induced by m (m is assumed normalised)."""
    return BlochPoint(
        0.5 * _real_state_value(m, _OBS_S),
        0.5 * _real_state_value(m, _OBS_X),
        0.5 * _real_state_value(m, _OBS_Y),
    )


def velocity_functional(m: AlgebraElement, field: VectorField, xi: OneForm) -> complex:
    """V(xi) = <K(m . xi), conj m>, the velocity of the state path.

    Satisfies d/dt phi(a) = V(da) along coupled trajectories whose K meets
    the reality condition.
    """
    return inner_product(apply_vf(field, left_multiply_form(m, xi)), m)


# Coupled flat systems -----------------------------------------------------

def zn_coupled_rhs(n: int) -> Callable[[float, np.ndarray], np.ndarray]:
    """Flat RHS for the coupled (K_+, K_-, m) Z_n system; b is computed once per call."""

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        z = y.view(np.complex128)
        kp, km, m = z[:n], z[n : 2 * n], z[2 * n :]
        beta = _zn_beta(kp, km)
        dkp, dkm = _rhs_zn(kp, km, beta)
        dm = _transport_zn(m, kp, km, beta - kp - km)
        out = np.empty(3 * n, dtype=np.complex128)
        out[:n] = dkp
        out[n : 2 * n] = dkm
        out[2 * n :] = dm
        return out.view(np.float64)

    return rhs


def m2_coupled_rhs() -> Callable[[float, np.ndarray], np.ndarray]:
    """Flat RHS for the coupled (K1, K2, m) M2 system."""

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        z = y.view(np.complex128)
        k1 = z[0:4].reshape(2, 2)
        k2 = z[4:8].reshape(2, 2)
        m = z[8:12].reshape(2, 2)
        dk1, dk2 = _rhs_m2(k1, k2)
        dm = _transport_m2(m, k1, k2)
        out = np.empty(12, dtype=np.complex128)
        out[0:4] = dk1.reshape(-1)
        out[4:8] = dk2.reshape(-1)
        out[8:12] = dm.reshape(-1)
        return out.view(np.float64)

    return rhs


def _as_complex(value, shape) -> np.ndarray:
    arr = np.asarray(getattr(value, "samples", getattr(value, "entries", value)), dtype=np.complex128)
    return arr.reshape(shape)


def pack_zn_state(k_plus, k_minus, m) -> np.ndarray:
    return pack_complex(k_plus, k_minus, m)


def unpack_zn_state(y: np.ndarray, n: int):
    kp, km, m = split_complex(np.ascontiguousarray(y), (n, n, n))
    return kp.copy(), km.copy(), m.copy()


def pack_m2_state(k1, k2, m) -> np.ndarray:
    return pack_complex(k1, k2, m)


def unpack_m2_state(y: np.ndarray):
    k1, k2, m = split_complex(np.ascontiguousarray(y), (4, 4, 4))
    return k1.reshape(2, 2).copy(), k2.reshape(2, 2).copy(), m.reshape(2, 2).copy()


# Decoded runs -------------------------------------------------------------

@dataclass(frozen=True)
class ZnRun:
    """Sampled coupled Z_n trajectory; rows are time samples."""

    times: np.ndarray
    k_plus: np.ndarray   # (T, n) complex
    k_minus: np.ndarray  # (T, n) complex
    m: np.ndarray        # (T, n) complex
    trajectory: Trajectory

    @property
    def n(self) -> int:
        return self.k_plus.shape[1]

    def _fields(self):
        for kp, km in zip(self.k_plus, self.k_minus):
            yield VectorField(ZnElement(kp), ZnElement(km))

    def reality_abs(self) -> np.ndarray:
        return np.array([np.abs(reality_residual(f).samples) for f in self._fields()])

    def braiding_abs(self) -> np.ndarray:
        return np.array([np.abs(braiding_residual(f).samples) for f in self._fields()])

    def k_plus_moduli(self) -> np.ndarray:
        return np.abs(self.k_plus)

    def k_minus_moduli(self) -> np.ndarray:
        return np.abs(self.k_minus)

    def phi_sites(self) -> np.ndarray:
        """phi(delta_i) = |m(i)|^2 per site."""
        return np.abs(self.m) ** 2

    def phi_cumulative(self) -> np.ndarray:
        return np.cumsum(self.phi_sites(), axis=1)

    def phi_one(self) -> np.ndarray:
        return self.phi_sites().sum(axis=1)


@dataclass(frozen=True)
class M2Run:
    """Sampled coupled M2 trajectory; matrices are (T, 2, 2)."""

    times: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    m: np.ndarray
    trajectory: Trajectory

    def _fields(self):
        for k1, k2 in zip(self.k1, self.k2):
            yield VectorField(Mat2Element(k1), Mat2Element(k2))

    def reality_fro(self) -> np.ndarray:
        return np.array([np.linalg.norm(reality_residual(f).entries) for f in self._fields()])

    def braiding_fro(self) -> np.ndarray:
        return np.array([np.linalg.norm(braiding_residual(f).entries) for f in self._fields()])

    def phi_one(self) -> np.ndarray:
        return np.array([state_eval(Mat2Element(m), I2).real for m in self.m])

    def bloch_series(self) -> np.ndarray:
        pts = [bloch(Mat2Element(m)) for m in self.m]
        return np.array([[p.s, p.x, p.y] for p in pts])


def run_zn(
    k_plus,
    k_minus,
    m,
    *,
    t_end: float = 10.0,
    h: float = 1e-3,
    stride: int = 10,
    method: str = "rk4",
) -> ZnRun:
    """Integrate the coupled Z_n system from the given initial data."""
    kp0 = _as_complex(k_plus, (-1,))
    km0 = _as_complex(k_minus, (-1,))
    m0 = _as_complex(m, (-1,))
    n = kp0.shape[0]
    if km0.shape[0] != n or m0.shape[0] != n:
        raise ValueError("k_plus, k_minus and m must have the same length")
    traj = integrate(zn_coupled_rhs(n), pack_zn_state(kp0, km0, m0), t_end, h=h, stride=stride, method=method)
    blocks = traj.states.view(np.complex128)
    return ZnRun(traj.times, blocks[:, :n], blocks[:, n : 2 * n], blocks[:, 2 * n :], traj)


def run_m2(
    k1,
    k2,
    m,
    *,
    t_end: float = 10.0,
    h: float = 1e-3,
    stride: int = 10,
    method: str = "rk4",
) -> M2Run:
    """Integrate the coupled M2 system from the given initial data."""
    k10 = _as_complex(k1, (2, 2))
    k20 = _as_complex(k2, (2, 2))
    m0 = _as_complex(m, (2, 2))
    traj = integrate(m2_coupled_rhs(), pack_m2_state(k10, k20, m0), t_end, h=h, stride=stride, method=method)
    blocks = traj.states.view(np.complex128)
    T = blocks.shape[0]
    return M2Run(
        traj.times,
        blocks[:, 0:4].reshape(T, 2, 2),
        blocks[:, 4:8].reshape(T, 2, 2),
        blocks[:, 8:12].reshape(T, 2, 2),
        traj,
    )
