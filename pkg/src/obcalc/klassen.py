"""Numerics for Klassen's open book of P^2 x S^1.

The total space is the unit disk times the circle, with each boundary circle
glued by the antipodal map.  The fibration

    p(z, t) = (z^2 - 1/4) / |z^2 - 1/4| * exp(2 pi i t)

has binding ``{+-1/2} x S^1``; the page ``F_s`` is ``p^{-1}(exp(2 pi i s))``.
The level-``t`` slice of ``F_0`` is where the level function

    F(x, y, t) = (x^2 - y^2 - 1/4) sin(2 pi t) + 2xy cos(2 pi t)

vanishes and the real part of ``p`` is positive.

Slices are sampled on a polar grid: along each ray the level function is
``r^2 sin(2 theta + 2 pi t) - sin(2 pi t) / 4``, which is monotone in ``r``,
so bisection finds the single root.  Levels ``t`` in ``{0, 1/2, 1}`` make every
ray degenerate and use the explicit solution sets instead.

Component counts are a numeric proxy at a fixed resolution.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

__all__ = [
    "SlicePoint",
    "SliceReport",
    "PunctureError",
    "fibration_value",
    "level_function",
    "cross_section",
    "component_count",
    "translation_check",
    "grid_step",
    "grid_tolerance",
    "report_to_csv",
    "report_to_json",
]

MIN_SAMPLES = 16
MIN_RESOLUTION = 64
DEFAULT_RESOLUTION = 256
RESIDUAL_TOL = 1e-9
# points closer than this to a binding puncture are dropped
PUNCTURE_RADIUS = 1e-4
_BISECT_STEPS = 64
_MIN_DTHETA = 1e-9
_TANGENT_COS = 0.7


class PunctureError(ValueError):
    pass


@dataclass(frozen=True)
class SlicePoint:
    x: float
    y: float
    t: float
    residual: float


@dataclass(frozen=True)
class SliceReport:
    t: float
    xy: np.ndarray
    residuals: np.ndarray
    component_count: int | None
    max_residual: float

    @property
    def points(self) -> list[SlicePoint]:
        return [SlicePoint(float(x), float(y), self.t, float(r)) for (x, y), r in zip(self.xy, self.residuals)]

    def __len__(self) -> int:
        return len(self.xy)


def grid_step(n: int) -> float:
    """Sampling scale of a slice with ``n`` angles: the disk diameter over ``n``."""
    return 2.0 / n


def grid_tolerance(n: int) -> float:
    return 2.0 * grid_step(n)


def fibration_value(x, y, t):
    """``p(x + iy, t)``; works elementwise on arrays."""
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    w = z * z - 0.25
    mod = np.abs(w)
    if np.any(mod == 0.0):
        raise PunctureError("binding puncture (+-1/2, 0) has no fibration value")
    out = w / mod * np.exp(2j * np.pi * np.asarray(t, dtype=float))
    return out.item() if out.ndim == 0 else out


def level_function(x, y, t):
    s, c = math.sin(2 * math.pi * t), math.cos(2 * math.pi * t)
    return (x * x - y * y - 0.25) * s + 2 * x * y * c


def _check_level(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0 or math.isnan(t):
        raise ValueError(f"level t={t} outside [0, 1]")
    return t


# -- sampling ----------------------------------------------------------------

# A "phase" problem: find z with Im q(z) = 0, Re q(z) > 0, where q(z) = p(z, t) exp(-2 pi i s).
# ``q`` maps (x, y) arrays to complex arrays; ``psi = t - s`` fixes the degenerate cases.


def _polynomial_q(t: float) -> Callable:
    c = np.exp(2j * np.pi * t)

    def q(x, y):
        z = x + 1j * y
        return (z * z - 0.25) * c

    return q


def _fibration_q(t: float, s: float) -> Callable:
    c = np.exp(-2j * np.pi * s)
    return lambda x, y: fibration_value(x, y, t) * c


def _bisect_rays(theta: np.ndarray, q: Callable) -> np.ndarray:
    """Radius of the zero of ``Im q`` on each ray, or nan when it has none in (0, 1)."""
    ct, st = np.cos(theta), np.sin(theta)

    def g(r):
        return np.imag(q(r * ct, r * st))

    lo = np.full(theta.shape, 1e-12)
    hi = np.ones_like(theta)
    glo, ghi = g(lo), g(hi)
    ok = np.sign(glo) * np.sign(ghi) < 0
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
    return np.where(ok, 0.5 * (lo + hi), np.nan)


class _RaySampler:
    def __init__(self, q: Callable, step: float):
        self.q = q
        self.step = step
        self.pts: dict[float, complex] = {}

    def accept(self, theta: np.ndarray) -> np.ndarray:
        r = _bisect_rays(theta, self.q)
        z = r * np.exp(1j * theta)
        good = np.isfinite(r)
        zs = np.where(good, z, 0.0)
        good &= np.real(self.q(zs.real, zs.imag)) > 0
        good &= np.abs(zs - 0.5) > PUNCTURE_RADIUS
        good &= np.abs(zs + 0.5) > PUNCTURE_RADIUS
        return np.where(good, z, np.nan)

    def fill(self, ta: np.ndarray, za: np.ndarray, tb: np.ndarray, zb: np.ndarray) -> None:
        """Subdivide the intervals ``[ta, tb]`` until consecutive points are ``step`` apart
        or a branch end is pinned down; all intervals are handled in one batch per round."""
        while len(ta):
            ina, inb = ~np.isnan(za), ~np.isnan(zb)
            split = (ina | inb) & (tb - ta >= _MIN_DTHETA)
            split &= ~(ina & inb & (np.abs(za - zb) <= self.step))
            ta, za, tb, zb = ta[split], za[split], tb[split], zb[split]
            tm = 0.5 * (ta + tb)
            zm = self.accept(tm)
            keep = ~np.isnan(zm)
            self.pts.update(zip(tm[keep].tolist(), zm[keep].tolist()))
            ta, za, tb, zb = np.concatenate([ta, tm]), np.concatenate([za, zm]), np.concatenate([tm, tb]), np.concatenate([zm, zb])


def _bisect_circles(radii: np.ndarray, q: Callable, m: int) -> np.ndarray:
    """Zeros of ``Im q`` on circles of the given radii, bracketed on ``m`` angles each."""
    theta = 2 * np.pi * (np.arange(m) + 0.5) / m
    r = radii[:, None]
    g = np.imag(q(r * np.cos(theta), r * np.sin(theta)))
    k, j = np.nonzero(np.sign(g) * np.sign(np.roll(g, -1, axis=1)) < 0)
    rr = radii[k]
    lo = theta[j]
    hi = lo + 2 * np.pi / m
    glo = g[k, j]
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        gm = np.imag(q(rr * np.cos(mid), rr * np.sin(mid)))
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
    return rr * np.exp(0.5j * (lo + hi))


def _circle_points(q: Callable, n: int) -> np.ndarray:
    """Crossings with circles half a grid step apart.

    Rays miss branches that stay within one angular cell, such as the arcs
    hugging the real axis at levels close to 0 or 1; circles catch those.
    """
    step = grid_step(n)
    radii = 0.5 * step * (np.arange(1, n) + 0.5)
    radii = radii[(radii < 1.0) & (np.abs(radii - 0.5) > PUNCTURE_RADIUS)]
    z = _bisect_circles(radii, q, math.ceil(4 * np.pi / step))
    v = q(z.real, z.imag)
    good = (np.real(v) > 0) & (np.abs(z - 0.5) > PUNCTURE_RADIUS) & (np.abs(z + 0.5) > PUNCTURE_RADIUS)
    return np.stack([z.real[good], z.imag[good]], axis=1)


def _sample_generic(q: Callable, n: int, offset: float) -> np.ndarray:
    step = grid_step(n)
    theta = 2 * np.pi * (np.arange(n) + offset) / n
    z = _RaySampler(q, step)
    base = z.accept(theta)
    keep = ~np.isnan(base)
    z.pts.update(zip(theta[keep].tolist(), base[keep].tolist()))
    nxt = np.roll(np.arange(n), -1)
    tb = theta[nxt] + np.where(nxt == 0, 2 * np.pi, 0.0)
    z.fill(theta, base, tb, base[nxt])
    keys = sorted(z.pts)
    rays = np.array([[z.pts[k].real, z.pts[k].imag] for k in keys]).reshape(-1, 2)
    return np.vstack([rays, _circle_points(q, n)])


def _segment(a: complex, b: complex, h: float) -> list[complex]:
    m = max(2, math.ceil(abs(b - a) / h))
    return [a + (b - a) * (k + 0.5) / m for k in range(m)]


def _sample_explicit(half: bool, n: int) -> np.ndarray:
    h = grid_step(n) / 2
    if not half:
        # (-1, -1/2) and (1/2, 1) on the real line
        pts = _segment(0.5, 1.0, h) + _segment(-1.0, -0.5, h)
    else:
        # (-1/2, 1/2) on the real line and (-i, i) on the imaginary axis; the origin is critical
        pts = _segment(-0.5, 0.5, h) + _segment(-1j, 1j, h)
        pts = [z for z in pts if abs(z) > 1e-9]
    return np.array([[z.real, z.imag] for z in pts])


def _degenerate(psi: float) -> bool | None:
    """None for a generic phase, else whether it is the half-turn case."""
    frac = psi % 1.0
    if min(frac, 1.0 - frac) < 1e-12:
        return False
    if abs(frac - 0.5) < 1e-12:
        return True
    return None


def _slice_points(t: float, s: float, n: int, use_fibration: bool, offset: float = 0.0) -> np.ndarray:
    deg = _degenerate(t - s)
    if deg is not None:
        return _sample_explicit(deg, n)
    q = _fibration_q(t, s) if use_fibration else _polynomial_q(t - s)
    return _sample_generic(q, n, offset)


def _residuals(xy: np.ndarray, t: float, s: float = 0.0) -> np.ndarray:
    if len(xy) == 0:
        return np.zeros(0)
    v = fibration_value(xy[:, 0], xy[:, 1], t) * np.exp(-2j * np.pi * s)
    return np.abs(np.atleast_1d(v) - 1.0)


# -- components --------------------------------------------------------------


def _tangents(xy: np.ndarray, psi: float) -> np.ndarray:
    s, c = math.sin(2 * math.pi * psi), math.cos(2 * math.pi * psi)
    x, y = xy[:, 0], xy[:, 1]
    gx = 2 * x * s + 2 * y * c
    gy = -2 * y * s + 2 * x * c
    tan = np.stack([-gy, gx], axis=1)
    return tan / np.linalg.norm(tan, axis=1, keepdims=True)


def _count(xy: np.ndarray, psi: float, step: float) -> int:
    """Single linkage at 1.5 grid steps, restricted to pairs with agreeing tangents.

    The tangent condition keeps two branches that cross transversally (at the
    critical point of the half-turn slice) from merging.  Points within one
    step of the boundary circle also get an antipodal copy, which carries the
    gluing.
    """
    if len(xy) == 0:
        return 0
    tan = _tangents(xy, psi)
    near = np.nonzero(np.hypot(xy[:, 0], xy[:, 1]) > 1.0 - step)[0]
    cloud = np.vstack([xy, -xy[near]])
    ctan = np.vstack([tan, tan[near]])
    owner = np.concatenate([np.arange(len(xy)), near])
    pairs = cKDTree(cloud).query_pairs(1.5 * step, output_type="ndarray")
    if len(pairs):
        agree = np.abs(np.einsum("ij,ij->i", ctan[pairs[:, 0]], ctan[pairs[:, 1]])) >= _TANGENT_COS
        pairs = pairs[agree]
    i, j = owner[pairs[:, 0]], owner[pairs[:, 1]]
    graph = coo_matrix((np.ones(len(i)), (i, j)), shape=(len(xy), len(xy)))
    k, _ = connected_components(graph, directed=False)
    return int(k)


# -- public operations -------------------------------------------------------


def cross_section(t: float, n_samples: int = DEFAULT_RESOLUTION) -> SliceReport:
    """Sample the level-``t`` slice of the page ``F_0`` with ``n_samples`` polar angles.

    Consecutive points on a branch are at most one grid step apart and branch
    ends are refined toward the boundary circle or the puncture.  The
    component count is filled in only when ``n_samples >= 64``.
    """
    t = _check_level(t)
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    xy = _slice_points(t, 0.0, n_samples, use_fibration=False)
    res = _residuals(xy, t)
    count = _count(xy, t, grid_step(n_samples)) if n_samples >= MIN_RESOLUTION else None
    return SliceReport(t, xy, res, count, float(res.max(initial=0.0)))


def component_count(t: float, resolution: int = DEFAULT_RESOLUTION) -> int:
    """Components of the level-``t`` slice of ``F_0`` after the antipodal boundary gluing."""
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution {resolution} too coarse (minimum {MIN_RESOLUTION})")
    return cross_section(t, resolution).component_count


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return math.inf
    da, _ = cKDTree(b).query(a)
    db, _ = cKDTree(a).query(b)
    return float(max(da.max(), db.max()))


def translation_check(s: float, t: float, n_samples: int = DEFAULT_RESOLUTION) -> float:
    """Hausdorff distance between the slice of ``F_s`` at level ``t`` and that of ``F_0`` at ``t - s``.

    The ``F_s`` slice solves ``p(z, t) = exp(2 pi i s)`` directly on a grid
    shifted by half an angle, so the two samplings share no rays.
    """
    s, t = _check_level(s), _check_level(t)
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    fs = _slice_points(t, s, n_samples, use_fibration=True, offset=0.5)
    if len(fs) and _residuals(fs, t, s).max() >= RESIDUAL_TOL:
        raise ArithmeticError("F_s slice failed the residual check")
    f0 = _slice_points((t - s) % 1.0, 0.0, n_samples, use_fibration=False)
    return _hausdorff(fs, f0)


# -- output ------------------------------------------------------------------


def report_to_csv(report: SliceReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "t", "residual"])
    for (x, y), r in zip(report.xy, report.residuals):
        w.writerow([repr(float(x)), repr(float(y)), repr(report.t), f"{r:.3e}"])
    return buf.getvalue()


def report_to_json(report: SliceReport) -> str:
    return json.dumps(
        {
            "t": report.t,
            "component_count": report.component_count,
            "max_residual": report.max_residual,
            "points": [[float(x), float(y), float(r)] for (x, y), r in zip(report.xy, report.residuals)],
        }
    )
