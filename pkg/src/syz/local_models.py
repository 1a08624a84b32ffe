"""Explicit special-Lagrangian fibrations of C^3 and numerical checks on them.

Two models are covered: the Harvey-Lawson map ``f: C^3 -> R^3`` and Joyce's
piecewise-smooth maps ``F+/-: C^3 -> R x C``. Points of C^3 are complex
arrays of shape ``(3,)`` or ``(N, 3)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from syz.parallel import map_ordered

MEMBER_TOL = 1e-9
FD_STEP = 1e-5
RANK_TOL = 1e-6
CHUNK = 256


class DiscriminantPoint(ValueError):
    """Target lies on the discriminant, where fibers are singular."""


# ---------------------------------------------------------------------------
# Harvey-Lawson


def hl_map(z) -> np.ndarray:
    """``(Im(z1 z2 z3), |z1|^2 - |z2|^2, |z1|^2 - |z3|^2)``, batched over leading axes."""
    z = np.asarray(z, dtype=complex)
    a1, a2, a3 = np.abs(z[..., 0]) ** 2, np.abs(z[..., 1]) ** 2, np.abs(z[..., 2]) ** 2
    return np.stack([np.imag(z[..., 0] * z[..., 1] * z[..., 2]), a1 - a2, a1 - a3], axis=-1)


class HLRay(str, enum.Enum):
    RAY_I = "RayI"
    RAY_II = "RayII"
    RAY_III = "RayIII"
    ORIGIN = "Origin"
    OFF = "Off"


def hl_discriminant_classify(x: Sequence[float], tol: float = MEMBER_TOL) -> HLRay:
    """Which discriminant ray of the Harvey-Lawson map ``x`` lies on, if any.

    The rays sit in the plane ``x1 = 0``: (I) ``x2 = 0, x3 <= 0``;
    (II) ``x2 <= 0, x3 = 0``; (III) ``x2 = x3 >= 0``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x1, x2, x3 = (float(v) for v in x)
    if np.sqrt(x1 * x1 + x2 * x2 + x3 * x3) < tol:
        return HLRay.ORIGIN
    if abs(x1) > tol:
        return HLRay.OFF
    if abs(x2) <= tol and x3 <= tol:
        return HLRay.RAY_I
    if abs(x3) <= tol and x2 <= tol:
        return HLRay.RAY_II
    if abs(x2 - x3) <= tol and x2 >= -tol:
        return HLRay.RAY_III
    return HLRay.OFF


def hl_rays_2d() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """The three rays in the ``(x2, x3)`` plane as ``(origin, primitive direction)``."""
    return [((0, 0), (0, -1)), ((0, 0), (-1, 0)), ((0, 0), (1, 1))]


def torus_act(z, theta1: float, theta2: float) -> np.ndarray:
    """Action of ``diag(e^{i t1}, e^{i t2}, e^{-i (t1 + t2)})``."""
    z = np.asarray(z, dtype=complex)
    phase = np.array([np.exp(1j * theta1), np.exp(1j * theta2), np.exp(-1j * (theta1 + theta2))])
    return z * phase


@dataclass
class FiberSample:
    points: np.ndarray
    failures: int
    target: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "target": list(self.target),
            "count": int(len(self.points)),
            "failures": self.failures,
            "points": [[[float(c.real), float(c.imag)] for c in p] for p in self.points],
        }


def _newton_polish(F: Callable[[np.ndarray], np.ndarray], z: np.ndarray, target: np.ndarray,
                   max_iter: int = 100, tol: float = 1e-13) -> tuple[np.ndarray, bool]:
    """Minimum-norm Gauss-Newton steps on the real constraints ``F(z) = target``."""
    for _ in range(max_iter):
        r = F(z) - target
        if np.max(np.abs(r)) < tol:
            return z, True
        J = _real_jacobian(F, z, 1e-7, "central")
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        z = z + step[0::2] + 1j * step[1::2]
    return z, bool(np.max(np.abs(F(z) - target)) < MEMBER_TOL)


def sample_hl_fiber(x: Sequence[float], count: int, seed: int = 0) -> FiberSample:
    """Points on the Harvey-Lawson fiber over ``x``.

    Seeds solve the fiber equations in polar form with random radii and
    phases; each seed is then polished by Newton iteration and moved along its
    torus orbit by a random angle pair.

    Raises:
        DiscriminantPoint: ``x`` lies on one of the discriminant rays.
    """
    x = np.asarray(x, dtype=float)
    kind = hl_discriminant_classify(x)
    if kind != HLRay.OFF:
        raise DiscriminantPoint(f"target {x.tolist()} is on the discriminant ({kind.value})")
    rng = np.random.default_rng(seed)
    floor = max(0.0, x[1], x[2])
    points = []
    failures = 0
    for _ in range(count):
        for _attempt in range(100):
            t = floor + rng.uniform(0.05, 2.0)
            r = np.sqrt([t, t - x[1], t - x[2]])
            if np.prod(r) > abs(x[0]):
                break
        else:
            failures += 1
            continue
        phi = np.arcsin(x[0] / np.prod(r))
        if rng.random() < 0.5:
            phi = np.pi - phi
        th1, th2 = rng.uniform(0, 2 * np.pi, size=2)
        z = r * np.exp(1j * np.array([th1, th2, phi - th1 - th2]))
        z, ok = _newton_polish(hl_map, z, x)
        a, b = rng.uniform(0, 2 * np.pi, size=2)
        z = torus_act(z, a, b)
        if ok and np.max(np.abs(hl_map(z) - x)) < MEMBER_TOL:
            points.append(z)
        else:
            failures += 1
    pts = np.array(points, dtype=complex).reshape(-1, 3)
    return FiberSample(pts, failures, tuple(float(v) for v in x))


# ---------------------------------------------------------------------------
# Joyce's local models


def _sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be + or -, got {sign!r}")


def joyce_F(sign, z) -> tuple[float, complex]:
    """Joyce's map ``F+/-`` evaluated at a single point."""
    s = _sign(sign)
    z1, z2, z3 = (complex(v) for v in z)
    m1, m2 = abs(z1), abs(z2)
    a = 0.5 * (m1 * m1 - m2 * m2)
    if z1 == 0 and z2 == 0:
        return a, z3
    denom = m1 if m2 * m2 <= m1 * m1 else m2
    return a, z3 - s * (z1.conjugate() * z2.conjugate()) / denom


def joyce_F_branches(sign, z) -> tuple[tuple[float, complex], tuple[float, complex]]:
    """Values of the two generic branches at ``z`` (for seam-continuity checks)."""
    s = _sign(sign)
    z1, z2, z3 = (complex(v) for v in z)
    a = 0.5 * (abs(z1) ** 2 - abs(z2) ** 2)
    num = z1.conjugate() * z2.conjugate()
    return (a, z3 - s * num / abs(z1)), (a, z3 - s * num / abs(z2))


def joyce_residuals(sign, a: float, c: complex, z) -> np.ndarray:
    """``[q1 - q2, q2 - q3, Im p, -sign*Re p]`` with ``q`` the chained moduli and ``p = z1 z2 (z3 - c)``."""
    s = _sign(sign)
    z = np.asarray(z, dtype=complex)
    w = z[..., 2] - c
    q1 = np.abs(z[..., 0]) ** 2 - a
    q2 = np.abs(z[..., 1]) ** 2 + a
    q3 = np.abs(w) ** 2 + abs(a)
    p = z[..., 0] * z[..., 1] * w
    return np.stack([q1 - q2, q2 - q3, np.imag(p), -s * np.real(p)], axis=-1)


def joyce_N_member(sign, a: float, c: complex, z, tol: float = MEMBER_TOL) -> bool:
    """Membership of ``z`` in ``N+/-_{a,c}`` within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = np.asarray(z, dtype=complex)
    w = z[2] - c
    q = [abs(z[0]) ** 2 - a, abs(z[1]) ** 2 + a, abs(w) ** 2 + abs(a)]
    if max(q) - min(q) > tol:
        return False
    r = joyce_residuals(sign, a, c, z)
    return bool(abs(r[2]) < tol and r[3] <= tol)


def joyce_roundtrip(sign, z, tol: float = MEMBER_TOL) -> bool:
    a, c = joyce_F(sign, z)
    return joyce_N_member(sign, a, c, z, tol)


def sample_joyce_fiber(sign, a: float, c: complex, count: int, seed: int = 0) -> np.ndarray:
    """Generic points of ``N+/-_{a,c}``.

    With ``s >= |a|`` free, the moduli are ``|z1|^2 = s + a``,
    ``|z2|^2 = s - a``, ``|z3 - c|^2 = s - |a|``; the phases sum to 0 for the
    plus sign and to pi for the minus sign.
    """
    sg = _sign(sign)
    rng = np.random.default_rng(seed)
    s = abs(a) + rng.uniform(0.1, 3.0, size=count)
    r = np.sqrt(np.stack([s + a, s - a, s - abs(a)], axis=1))
    th = rng.uniform(0, 2 * np.pi, size=(count, 2))
    total = 0.0 if sg > 0 else np.pi
    phases = np.column_stack([th[:, 0], th[:, 1], total - th[:, 0] - th[:, 1]])
    z = r * np.exp(1j * phases)
    z[:, 2] += c
    return z


def disk_boundary(a: float, c: complex = 0.0, samples: int = 256) -> np.ndarray:
    """The circle ``{|z1|^2 = 2a, z2 = 0, z3 = c}`` for ``a > 0``, or ``{|z2|^2 = -2a, z1 = 0}`` for ``a < 0``."""
    t = 2 * np.pi * np.arange(samples) / samples
    r = np.sqrt(2 * abs(a))
    z = np.zeros((samples, 3), dtype=complex)
    z[:, 0 if a >= 0 else 1] = r * np.exp(1j * t)
    z[:, 2] = c
    return z


def disk_area(a: float) -> float:
    """Area ``2 pi |a|`` of the holomorphic disk bounded by the vanishing circle."""
    return 2 * np.pi * abs(float(a))


def loop_area(loop: np.ndarray) -> float:
    """Euclidean symplectic area enclosed by a closed polygon in C^3.

    Integrates the Liouville form ``1/2 sum Im(conj(z) dz)`` along the loop
    using the exact polygon (shoelace) rule.
    """
    nxt = np.roll(loop, -1, axis=0)
    return float(0.5 * np.sum(np.imag(np.conj(loop) * nxt)))


# ---------------------------------------------------------------------------
# Special-Lagrangian residuals


def omega(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``i sum dz_j ^ dzbar_j`` evaluated on complex tangent vectors."""
    return -2.0 * np.sum(np.imag(u * np.conj(v)), axis=-1)


def holomorphic_volume(u, v, w) -> np.ndarray:
    """``dz1 ^ dz2 ^ dz3`` on three tangent vectors (a complex determinant)."""
    return np.linalg.det(np.stack([u, v, w], axis=-1))


def _to_real(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def _to_complex(x: np.ndarray) -> np.ndarray:
    return x[..., 0::2] + 1j * x[..., 1::2]


def _real_jacobian(F, z: np.ndarray, h: float, scheme: str) -> np.ndarray:
    """Finite-difference Jacobian of ``F`` w.r.t. ``(Re z1, Im z1, ...)``; batched."""
    x = _to_real(np.asarray(z, dtype=complex))
    base = F(z) if scheme == "forward" else None
    cols = []
    for k in range(x.shape[-1]):
        e = np.zeros(x.shape[-1])
        e[k] = h
        up = F(_to_complex(x + e))
        if scheme == "central":
            cols.append((up - F(_to_complex(x - e))) / (2 * h))
        elif scheme == "forward":
            cols.append((up - base) / h)
        else:
            raise ValueError(f"unknown difference scheme {scheme!r}")
    return np.stack(cols, axis=-1)


@dataclass
class SlagReport:
    omega_residual: float
    im_omega_residual: float | None
    samples: int
    flagged: int
    tolerance: float
    h: float
    phase: float = 0.0
    flagged_indices: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        im = self.im_omega_residual
        if self.flagged == self.samples or im is None:
            return False
        return self.omega_residual < self.tolerance and im < self.tolerance

    def to_json(self) -> dict:
        return {
            "omega_residual": self.omega_residual,
            "im_omega_residual": self.im_omega_residual,
            "samples": self.samples,
            "flagged": self.flagged,
            "flagged_indices": self.flagged_indices,
            "tolerance": self.tolerance,
            "h": self.h,
            "phase": self.phase,
            "passed": self.passed,
        }


def hl_model(x: Sequence[float]) -> Callable[[np.ndarray], np.ndarray]:
    x = np.asarray(x, dtype=float)
    return lambda z: hl_map(z) - x


def joyce_model(sign, a: float, c: complex) -> Callable[[np.ndarray], np.ndarray]:
    """The three smooth constraints cutting out ``N+/-_{a,c}`` near a generic point."""
    return lambda z: joyce_residuals(sign, a, c, z)[..., :3]


def slag_check(points, constraints: Callable[[np.ndarray], np.ndarray], h: float = FD_STEP,
               tolerance: float = 1e-5, scheme: str = "central", optimize_phase: bool = False,
               workers: int | None = None) -> SlagReport:
    """Numerical special-Lagrangian residuals of the submanifold cut out by ``constraints``.

    At each point the tangent frame is an orthonormal basis of the null space
    of the finite-difference constraint Jacobian. ``omega`` is evaluated on all
    frame pairs; when the frame has three vectors ``|Im Omega| / |Omega|`` is
    reported as well (otherwise ``None``). Points whose Jacobian has a
    singular value below ``RANK_TOL`` (relative to ``max(1, s_max)``) are
    flagged and left out of the maxima.

    With ``optimize_phase`` the phase ``theta`` minimising the worst
    ``|Im(e^{i theta} Omega)| / |Omega|`` over a 360-point grid is reported.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    chunks = [pts[i : i + CHUNK] for i in range(0, len(pts), CHUNK)]

    def work(chunk):
        J = _real_jacobian(constraints, chunk, h, scheme)
        J = J.reshape(len(chunk), -1, 6)
        m = J.shape[1]
        _, s, vt = np.linalg.svd(J)
        bad = s[:, -1] < RANK_TOL * np.maximum(1.0, s[:, 0])
        frame = _to_complex(vt[:, m:, :])
        k = frame.shape[1]
        om = np.zeros(len(chunk))
        for i in range(k):
            for j in range(i + 1, k):
                om = np.maximum(om, np.abs(omega(frame[:, i], frame[:, j])))
        vol = holomorphic_volume(frame[:, 0], frame[:, 1], frame[:, 2]) if k == 3 else None
        return om, vol, bad

    parts = map_ordered(work, chunks, workers)
    om = np.concatenate([p[0] for p in parts])
    bad = np.concatenate([p[2] for p in parts])
    good = ~bad
    om_res = float(np.max(om[good])) if good.any() else 0.0
    im_res = None
    phase = 0.0
    if parts and parts[0][1] is not None:
        vol = np.concatenate([p[1] for p in parts])[good]
        unit = vol / np.abs(vol) if len(vol) else vol
        if optimize_phase and len(unit):
            grid = 2 * np.pi * np.arange(360) / 360
            worst = np.max(np.abs(np.imag(np.exp(1j * grid)[:, None] * unit[None, :])), axis=1)
            best = int(np.argmin(worst))
            phase = float(grid[best])
        im_res = float(np.max(np.abs(np.imag(np.exp(1j * phase) * unit)))) if len(unit) else 0.0
    return SlagReport(
        omega_residual=om_res,
        im_omega_residual=im_res,
        samples=int(len(pts)),
        flagged=int(bad.sum()),
        tolerance=tolerance,
        h=h,
        phase=phase,
        flagged_indices=[int(i) for i in np.nonzero(bad)[0]],
    )


# ---------------------------------------------------------------------------
# Ribbon vocabulary


class RibbonRegion(str, enum.Enum):
    INTERIOR = "interior"
    EDGE = "edge"
    DISKS = "disks"
    NONE = "none"


def ribbon_classify(x: Sequence[float], width: float = 1.0, tol: float = MEMBER_TOL) -> RibbonRegion:
    """Position of ``x`` relative to the ribbon ``{x1 = 0, 0 <= x2 <= width}``.

    ``INTERIOR`` and ``EDGE`` are on the ribbon (two and one singular points
    in the fiber); ``DISKS`` is off the plane but over the open strip, where
    small holomorphic disks bound the fiber; ``NONE`` is everything else.
    """
    x1, x2 = float(x[0]), float(x[1])
    inside = -tol <= x2 <= width + tol
    if not inside:
        return RibbonRegion.NONE
    on_edge = abs(x2) <= tol or abs(x2 - width) <= tol
    if abs(x1) <= tol:
        return RibbonRegion.EDGE if on_edge else RibbonRegion.INTERIOR
    return RibbonRegion.NONE if on_edge else RibbonRegion.DISKS


def ribbon_singular_points(region: RibbonRegion) -> int:
    return {RibbonRegion.INTERIOR: 2, RibbonRegion.EDGE: 1}.get(region, 0)
