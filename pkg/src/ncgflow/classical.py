"""Classical cross-checks: geodesics with Christoffel symbols and the
velocity-field equation on a periodic 1-d grid.

``geodesic_rhs`` is the standard second-order system

    ``dx/dt = v,   dv^i/dt = -Gamma^i_jk(x) v^j v^k``

and ``pullback_geodesic_check`` measures, by second-order finite
differences, how far a sampled curve is from solving it.

On the line the velocity-field equation reduces to an inviscid transport
equation, ``dK/dt = -K K' - Gamma K^2`` on a periodic grid over [0, 2pi);
it is integrated only in the smooth pre-shock regime and checked against
the method of characteristics in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .flow import Trajectory, integrate

__all__ = [
    "ChristoffelProvider",
    "flat_space",
    "round_sphere",
    "geodesic_rhs",
    "speed_squared",
    "GeodesicRun",
    "integrate_geodesic",
    "GridField",
    "sine_field",
    "spatial_derivative",
    "burgers_rhs",
    "BurgersRun",
    "integrate_burgers",
    "pullback_geodesic_check",
]

GRID_SPAN = 2.0 * math.pi


@dataclass(frozen=True)
class ChristoffelProvider:
    """Christoffel symbols Gamma(point, i, j, k), plus an optional metric for speed checks."""

    dim: int
    gamma: Callable[[np.ndarray, int, int, int], float]
    metric: Optional[Callable[[np.ndarray], np.ndarray]] = None


def flat_space(dim: int = 2) -> ChristoffelProvider:
    return ChristoffelProvider(dim, lambda x, i, j, k: 0.0, lambda x: np.eye(dim))


def round_sphere() -> ChristoffelProvider:
    """Unit 2-sphere in (theta, phi) coordinates."""

    def gamma(x, i, j, k):
        theta = x[0]
        if i == 0 and j == 1 and k == 1:
            return -math.sin(theta) * math.cos(theta)
        if i == 1 and ((j, k) == (0, 1) or (j, k) == (1, 0)):
            return math.cos(theta) / math.sin(theta)
        return 0.0

    def metric(x):
        return np.diag([1.0, math.sin(x[0]) ** 2])

    return ChristoffelProvider(2, gamma, metric)


def geodesic_rhs(x: np.ndarray, v: np.ndarray, provider: ChristoffelProvider):
    """(dx/dt, dv/dt) of the geodesic equation at (x, v)."""
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    dim = provider.dim
    dv = np.zeros(dim)
    for i in range(dim):
        acc = 0.0
        for j in range(dim):
            for k in range(dim):
                g = provider.gamma(x, i, j, k)
                if g != 0.0:
                    acc += g * v[j] * v[k]
        dv[i] = -acc
    return v.copy(), dv


def speed_squared(x, v, provider: ChristoffelProvider) -> float:
    v = np.asarray(v, dtype=np.float64)
    if provider.metric is None:
        return float(v @ v)
    g = provider.metric(np.asarray(x, dtype=np.float64))
    return float(v @ g @ v)


@dataclass(frozen=True)
class GeodesicRun:
    times: np.ndarray
    xs: np.ndarray  # (T, dim)
    vs: np.ndarray  # (T, dim)
    provider: ChristoffelProvider

    def speeds_squared(self) -> np.ndarray:
        return np.array([speed_squared(x, v, self.provider) for x, v in zip(self.xs, self.vs)])


def integrate_geodesic(
    x0,
    v0,
    provider: ChristoffelProvider,
    *,
    t_end: float = 10.0,
    h: float = 1e-3,
    stride: int = 10,
    method: str = "rk4",
) -> GeodesicRun:
    x0 = np.asarray(x0, dtype=np.float64)
    v0 = np.asarray(v0, dtype=np.float64)
    dim = provider.dim
    if x0.shape != (dim,) or v0.shape != (dim,):
        raise ValueError(f"x0 and v0 must have shape ({dim},)")

    def rhs(t, y):
        dx, dv = geodesic_rhs(y[:dim], y[dim:], provider)
        return np.concatenate([dx, dv])

    traj = integrate(rhs, np.concatenate([x0, v0]), t_end, h=h, stride=stride, method=method)
    return GeodesicRun(traj.times, traj.states[:, :dim], traj.states[:, dim:], provider)


@dataclass(frozen=True)
class GridField:
    """Velocity samples on a periodic grid over [0, 2pi)."""

    values: np.ndarray
    stencil: int = 4

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 16:
            raise ValueError("GridField needs at least 16 samples")
        if self.stencil not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return GRID_SPAN / self.n

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * self.dx


def sine_field(n: int = 256, amplitude: float = 0.1, stencil: int = 4) -> GridField:
    x = np.arange(n) * (GRID_SPAN / n)
    return GridField(amplitude * np.sin(x), stencil)


def spatial_derivative(values: np.ndarray, dx: float, stencil: int = 4) -> np.ndarray:
    """Centred periodic derivative, 2nd or 4th order."""
    if stencil == 2:
        return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * dx)
    return (
        -np.roll(values, -2) + 8.0 * np.roll(values, -1) - 8.0 * np.roll(values, 1) + np.roll(values, 2)
    ) / (12.0 * dx)


def burgers_rhs(field: GridField, gamma: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> np.ndarray:
    """dK/dt = -K K' - Gamma(x) K^2 on the grid (pre-shock regime assumed)."""
    v = field.values
    out = -v * spatial_derivative(v, field.dx, field.stencil)
    if gamma is not None:
        out = out - np.asarray(gamma(field.x), dtype=np.float64) * v * v
    return out


@dataclass(frozen=True)
class BurgersRun:
    times: np.ndarray
    values: np.ndarray  # (T, n)
    stencil: int

    @property
    def x(self) -> np.ndarray:
        n = self.values.shape[1]
        return np.arange(n) * (GRID_SPAN / n)


def integrate_burgers(
    field: GridField,
    gamma: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    *,
    t_end: float = 1.0,
    h: float = 1e-3,
    stride: int = 10,
    method: str = "rk4",
) -> BurgersRun:
    stencil = field.stencil
    gamma_values = None if gamma is None else np.asarray(gamma(field.x), dtype=np.float64)
    dx = field.dx

    def rhs(t, y):
        out = -y * spatial_derivative(y, dx, stencil)
        if gamma_values is not None:
            out = out - gamma_values * y * y
        return out

    traj = integrate(rhs, field.values, t_end, h=h, stride=stride, method=method)
    return BurgersRun(traj.times, traj.states, stencil)


def pullback_geodesic_check(times, samples, provider: ChristoffelProvider) -> float:
    """Max finite-difference geodesic residual of a uniformly sampled curve.

    Residual at each interior sample is ``max_i |gdd^i + Gamma^i_jk gd^j gd^k|``
    with second-order centred differences; it vanishes (to O(dt^2)) iff
    the curve is a geodesic.
    """
    times = np.asarray(times, dtype=np.float64)
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape[0] != times.shape[0]:
        raise ValueError("times and samples disagree in length")
    if times.shape[0] < 3:
        raise ValueError("need at least 3 samples")
    steps = np.diff(times)
    dt = steps[0]
    if dt <= 0 or np.any(np.abs(steps - dt) > 1e-9 * max(1.0, abs(dt))):
        raise ValueError("samples must be uniformly spaced in time")

    vel = (samples[2:] - samples[:-2]) / (2.0 * dt)
    acc = (samples[2:] - 2.0 * samples[1:-1] + samples[:-2]) / (dt * dt)
    dim = provider.dim
    worst = 0.0
    for p in range(vel.shape[0]):
        x = samples[p + 1]
        v = vel[p]
        for i in range(dim):
            r = acc[p, i]
            for j in range(dim):
                for k in range(dim):
                    g = provider.gamma(x, i, j, k)
                    if g != 0.0:
                        r += g * v[j] * v[k]
            worst = max(worst, abs(r))
    return worst
