"""Smooth reference surfaces and the benchmark problems posed on them.

A surface is described through its signed distance function, outward
normal and closest-point map.  The closest-point map a(p) satisfies the
decomposition p = a(p) + d(p) * normal(a(p)) for every p in the tubular
neighbourhood where the map is single valued.

All point-valued functions accept either a single 3-vector or an array
of shape (n, 3) and operate on the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegeneratePoint, InvalidParameter

_EPS = 1e-12


@dataclass(frozen=True)
class Sphere:
    """Sphere of given radius centred at the origin."""

    radius: float = 1.0
    kind: str = field(default="sphere", init=False)
    has_boundary = False

    def signed_distance(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return np.linalg.norm(p, axis=-1) - self.radius

    def closest_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        r = np.linalg.norm(p, axis=-1)
        if np.any(r < _EPS * self.radius):
            raise DegeneratePoint("closest point undefined at the sphere center")
        return self.radius * p / r[..., None]

    def normal(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        r = np.linalg.norm(p, axis=-1)
        if np.any(r < _EPS * self.radius):
            raise DegeneratePoint("normal undefined at the sphere center")
        return p / r[..., None]


@dataclass(frozen=True)
class Cylinder:
    """Lateral surface x^2 + y^2 = radius^2, z_min <= z <= z_max.

    Distance and normal refer to the infinite cylinder; closest_point
    clamps z to the axial extent, which only matters for diagnostic
    queries outside the strip.
    """

    radius: float = 1.0
    z_min: float = 0.0
    z_max: float = 2.0
    kind: str = field(default="cylinder", init=False)
    has_boundary = True

    def signed_distance(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return np.hypot(p[..., 0], p[..., 1]) - self.radius

    def closest_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        r = np.hypot(p[..., 0], p[..., 1])
        if np.any(r < _EPS * self.radius):
            raise DegeneratePoint("closest point undefined on the cylinder axis")
        s = self.radius / r
        out = np.empty(np.broadcast(p[..., 0], r).shape + (3,))
        out[..., 0] = p[..., 0] * s
        out[..., 1] = p[..., 1] * s
        out[..., 2] = np.clip(p[..., 2], self.z_min, self.z_max)
        return out

    def normal(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        r = np.hypot(p[..., 0], p[..., 1])
        if np.any(r < _EPS * self.radius):
            raise DegeneratePoint("normal undefined on the cylinder axis")
        out = np.zeros(np.broadcast(p[..., 0], r).shape + (3,))
        out[..., 0] = p[..., 0] / r
        out[..., 1] = p[..., 1] / r
        return out


@dataclass(frozen=True)
class BenchmarkProblem:
    """A Laplace-Beltrami problem -lap_G u = f with known exact solution.

    boundary_data is None for closed surfaces, where the solution is
    pinned by the zero-mean constraint instead of boundary values.
    """

    name: str
    surface: object
    exact_u: Callable[[np.ndarray], np.ndarray]
    load_f: Callable[[np.ndarray], np.ndarray]
    boundary_data: Callable[[np.ndarray], np.ndarray] | None
    zero_mean_constrained: bool


def _sphere_u(p):
    p = np.asarray(p, dtype=float)
    return p[..., 0] * p[..., 1]


def _sphere_f(p):
    # u = xy restricted to the unit sphere is an eigenfunction of the
    # Laplace-Beltrami operator with eigenvalue 6.
    p = np.asarray(p, dtype=float)
    return 6.0 * p[..., 0] * p[..., 1]


def _cyl_u(p):
    p = np.asarray(p, dtype=float)
    return np.exp(p[..., 1]) + p[..., 2]


def _cyl_f(p):
    p = np.asarray(p, dtype=float)
    return (p[..., 1] - p[..., 0] ** 2) * np.exp(p[..., 1])


def benchmark(name: str) -> BenchmarkProblem:
    """Return one of the built-in benchmark problems.

    sphere-xy:     unit sphere, u = x y, f = 6 x y, zero-mean constrained.
    cylinder-exp:  unit cylinder 0 <= z <= 2, u = e^y + z,
                   f = (y - x^2) e^y, Dirichlet data from u.
    """
    key = name.replace("_", "-").lower()
    if key == "sphere-xy":
        return BenchmarkProblem(
            name="sphere-xy",
            surface=Sphere(1.0),
            exact_u=_sphere_u,
            load_f=_sphere_f,
            boundary_data=None,
            zero_mean_constrained=True,
        )
    if key == "cylinder-exp":
        return BenchmarkProblem(
            name="cylinder-exp",
            surface=Cylinder(1.0, 0.0, 2.0),
            exact_u=_cyl_u,
            load_f=_cyl_f,
            boundary_data=_cyl_u,
            zero_mean_constrained=False,
        )
    raise InvalidParameter(f"unknown benchmark problem {name!r}")
