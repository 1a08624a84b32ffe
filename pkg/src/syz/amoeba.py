"""Amoebas of bivariate Laurent polynomials on a pixel raster.

The raster is built by slicing: for every pixel column ``x`` and sampled
angle ``theta`` the polynomial ``f(e^{x + i theta}, w)`` is solved for ``w``
and the pixel containing ``(x, log|w|)`` is marked. A second pass slices
along rows with the roles of the variables exchanged.

Pixel ``(i, j)`` covers ``[xmin + i dx, xmin + (i+1) dx) x [ymin + j dy, ...)``;
arrays are indexed ``[i, j]`` (x first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from syz.laurent import (
    DomainError,
    LaurentPolynomial,
    NewtonPolytope,
    lattice_points,
    newton_polytope,
)
from syz.parallel import map_ordered
from syz.roots import solve_batch, univariate_roots
from syz.ronkin import (
    DEFAULT_GRID,
    ConsistencyError,
    TooCloseToAmoeba,
    ronkin_order,
    ronkin_value,
)

_END_TOL = 1e-13


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    resolution: int

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("window bounds must satisfy min < max")
        if int(self.resolution) < 16:
            raise ValueError("resolution must be at least 16")

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.resolution

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.resolution

    def x_centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.resolution) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.ymin + (np.arange(self.resolution) + 0.5) * self.dy

    def center(self, i: int, j: int) -> tuple[float, float]:
        return (self.xmin + (i + 0.5) * self.dx, self.ymin + (j + 0.5) * self.dy)

    def pixel(self, x: float, y: float) -> tuple[int, int] | None:
        i = int(np.floor((x - self.xmin) / self.dx))
        j = int(np.floor((y - self.ymin) / self.dy))
        if 0 <= i < self.resolution and 0 <= j < self.resolution:
            return i, j
        return None

    def doubled(self) -> "Window":
        return Window(self.xmin, self.xmax, self.ymin, self.ymax, 2 * self.resolution)


@dataclass(frozen=True)
class AmoebaRaster:
    window: Window
    membership: np.ndarray
    hits: np.ndarray

    @property
    def marked(self) -> int:
        return int(self.membership.sum())

    def contains_point(self, x: float, y: float) -> bool:
        p = self.window.pixel(x, y)
        return p is not None and bool(self.membership[p])

    def to_csv(self) -> str:
        """CSV text with header ``x,y,member,hits`` (pixel centers, x-major)."""
        w = self.window
        xs, ys = w.x_centers(), w.y_centers()
        lines = ["x,y,member,hits"]
        for i in range(w.resolution):
            for j in range(w.resolution):
                lines.append(f"{xs[i]:.9g},{ys[j]:.9g},{int(self.membership[i, j])},{int(self.hits[i, j])}")
        return "\n".join(lines) + "\n"


def log_map(z: Sequence[complex]) -> np.ndarray:
    """Componentwise ``log|z_j|`` on the complex torus."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("Log is undefined at a zero coordinate")
    return np.log(np.abs(z))


def _slice_layout(f: LaurentPolynomial):
    """Exponent layout for solving in the second variable."""
    exps = f.exponents
    lo = int(exps[:, 1].min())
    deg = int(exps[:, 1].max()) - lo
    return exps[:, 0].astype(float), (exps[:, 1] - lo).astype(np.int64), deg


def _is_univariate(f: LaurentPolynomial) -> bool:
    e = f.exponents
    return len(f) > 1 and (np.all(e[:, 0] == e[0, 0]) or np.all(e[:, 1] == e[0, 1]))


def _slice_log_matrix(f: LaurentPolynomial, x: float, thetas: np.ndarray) -> np.ndarray:
    """Sorted ``log|w|`` of the roots of ``f(e^{x+i theta}, w)``, one row per angle.

    Shape (len(thetas), deg). A root lost to a vanishing end coefficient is
    reported as ``-inf`` (root at 0) or ``+inf`` (root at infinity).
    """
    m1, k, deg = _slice_layout(f)
    A = thetas.size
    if deg == 0:
        return np.empty((A, 0))
    coefs = f.coefficients
    z_pow = np.exp(np.outer(x + 1j * thetas, m1))  # (A, T)
    C = np.zeros((A, deg + 1), dtype=np.complex128)
    for t in range(len(coefs)):
        C[:, k[t]] += coefs[t] * z_pow[:, t]
    mag = np.max(np.abs(C), axis=1)
    clean = (np.abs(C[:, 0]) > _END_TOL * mag) & (np.abs(C[:, -1]) > _END_TOL * mag)
    out = np.empty((A, deg))
    if np.any(clean):
        with np.errstate(divide="ignore"):
            out[clean] = np.log(np.abs(solve_batch(C[clean])))
    for a in np.nonzero(~clean)[0]:
        c = C[a].copy()
        c[np.abs(c) <= _END_TOL * mag[a]] = 0
        nz = np.nonzero(c)[0]
        row = np.full(deg, np.inf)
        if nz.size:
            row[: nz[0]] = -np.inf
            if nz.size > 1:
                r = univariate_roots(c[nz[0] : nz[-1] + 1])
                row[nz[0] : nz[-1]] = np.log(np.abs(r))
        out[a] = row
    out.sort(axis=1)
    return out


def _slice_samples(f: LaurentPolynomial, x: float, base: int, lo: float, hi: float, step: float,
                   max_depth: int = 24) -> np.ndarray:
    """All finite ``log|w|`` witnesses over an adaptively refined angle set.

    The k-th smallest root modulus is a continuous function of the angle, so
    bisecting every angle interval across which some sorted value (clipped to
    ``[lo, hi]``) moves by more than ``step`` covers each slice of the amoeba
    at pixel resolution.
    """
    thetas = 2 * np.pi * (np.arange(base) + 0.5) / base
    vals = _slice_log_matrix(f, x, thetas)
    if vals.shape[1] == 0:
        return np.empty(0)
    collected = [vals]
    width = 2 * np.pi / base
    for _ in range(max_depth):
        clipped = np.clip(vals, lo, hi)
        nxt = np.roll(clipped, -1, axis=0)
        jump = np.max(np.abs(nxt - clipped), axis=1)
        need = jump > step
        if not np.any(need):
            break
        mids = thetas[need] + width / 2
        mvals = _slice_log_matrix(f, x, mids)
        collected.append(mvals)
        thetas = np.concatenate([thetas, mids])
        vals = np.concatenate([vals, mvals])
        order = np.argsort(thetas, kind="stable")
        thetas, vals = thetas[order], vals[order]
        # only intervals adjacent to a new midpoint can still be too coarse
        width /= 2
    logs = np.concatenate([c.ravel() for c in collected])
    return logs[np.isfinite(logs)]


def rasterize_amoeba(f: LaurentPolynomial, window: Window, angular_samples: int = 64,
                     subsamples: int = 2, workers: int | None = None) -> AmoebaRaster:
    """Mark every pixel that contains a sampled point of ``Log(V_f)``.

    Each pixel column (and row, in the second pass) is sliced along
    ``subsamples`` equally spaced lines. Every slice starts from
    ``angular_samples`` equispaced angles and is bisected wherever a sorted
    root modulus jumps by more than half a pixel.
    """
    if f.num_vars != 2:
        raise ValueError("rasterize_amoeba requires a bivariate polynomial")
    if _is_univariate(f):
        raise ValueError("polynomial depends on a single variable (up to a monomial)")
    if subsamples < 1:
        raise ValueError("subsamples must be positive")
    res = window.resolution
    hits = np.zeros((res, res), dtype=np.int64)
    if len(f) == 1:
        return AmoebaRaster(window, hits > 0, hits)
    g = f.swap_variables()
    dx, dy = window.dx, window.dy
    offsets = (np.arange(subsamples) + 0.5) / subsamples

    def column(i):
        found = []
        for off in offsets:
            logs = _slice_samples(f, float(window.xmin + (i + off) * dx), angular_samples,
                                  window.ymin - dy, window.ymax + dy, 0.5 * dy)
            found.append(np.floor((logs - window.ymin) / dy).astype(np.int64))
        j = np.concatenate(found)
        return j[(j >= 0) & (j < res)]

    def row(j):
        found = []
        for off in offsets:
            logs = _slice_samples(g, float(window.ymin + (j + off) * dy), angular_samples,
                                  window.xmin - dx, window.xmax + dx, 0.5 * dx)
            found.append(np.floor((logs - window.xmin) / dx).astype(np.int64))
        i = np.concatenate(found)
        return i[(i >= 0) & (i < res)]

    for i, js in enumerate(map_ordered(column, range(res), workers)):
        np.add.at(hits[i], js, 1)
    for j, is_ in enumerate(map_ordered(row, range(res), workers)):
        np.add.at(hits[:, j], is_, 1)
    return AmoebaRaster(window, hits > 0, hits)


# ---------------------------------------------------------------------------
# Complement components


@dataclass(frozen=True)
class ComplementComponent:
    pixels: np.ndarray = field(repr=False)  # (k, 2) pixel indices
    bounded: bool
    order: tuple[int, ...] | None  # None means undetermined
    ronkin_constant: float | None
    deep_pixel: tuple[int, int]
    depth: float

    @property
    def size(self) -> int:
        return int(self.pixels.shape[0])

    def to_json(self) -> dict:
        return {
            "pixels": self.size,
            "bounded": self.bounded,
            "order": list(self.order) if self.order is not None else "undetermined",
            "ronkin_constant": self.ronkin_constant,
            "deep_pixel": list(self.deep_pixel),
            "depth": self.depth,
        }


class ResolutionTooLow(RuntimeError):
    """Two complement components received the same order."""


def label_complement(raster: AmoebaRaster) -> tuple[np.ndarray, int]:
    """4-connected labelling of unmarked pixels (labels start at 1)."""
    structure = ndimage.generate_binary_structure(2, 1)
    return ndimage.label(~raster.membership, structure=structure)


def complement_components(raster: AmoebaRaster, f: LaurentPolynomial, grid: int = DEFAULT_GRID,
                          workers: int | None = None) -> list[ComplementComponent]:
    """Flood-fill the complement and attach order and Ronkin constant to each region.

    Components are returned in label order (first pixel in x-major scan).

    Raises:
        ResolutionTooLow: two components share an order.
    """
    w = raster.window
    labels, count = label_complement(raster)
    if raster.marked:
        depth = ndimage.distance_transform_edt(~raster.membership)
    else:
        depth = np.full(labels.shape, np.inf)
    P = newton_polytope(f)
    frame = np.zeros_like(raster.membership)
    frame[0, :] = frame[-1, :] = frame[:, 0] = frame[:, -1] = True
    comps = []
    for lab in range(1, count + 1):
        mask = labels == lab
        pix = np.argwhere(mask)
        flat = np.where(mask, depth, -1.0)
        best = int(np.argmax(flat))  # first maximal pixel in x-major order
        bi, bj = np.unravel_index(best, mask.shape)
        d = float(flat[bi, bj])
        order = const = None
        if d >= 2.0:
            x = np.array(w.center(int(bi), int(bj)))
            try:
                order = ronkin_order(f, x, grid, polytope=P, workers=workers)
            except TooCloseToAmoeba:
                order = None
            if order is not None:
                nval = ronkin_value(f, x, grid, estimate_error=False, workers=workers).value
                const = float(nval - np.dot(order, x))
        comps.append(ComplementComponent(
            pixels=pix,
            bounded=not bool(np.any(mask & frame)),
            order=order,
            ronkin_constant=const,
            deep_pixel=(int(bi), int(bj)),
            depth=d,
        ))
    seen: dict[tuple, int] = {}
    for idx, c in enumerate(comps):
        if c.order is None:
            continue
        if c.order in seen:
            raise ResolutionTooLow(
                f"components {seen[c.order]} and {idx} both have order {c.order}"
            )
        seen[c.order] = idx
    return comps


def bounded_count(raster: AmoebaRaster) -> int:
    """Number of bounded complement components (holes) of the raster."""
    labels, count = label_complement(raster)
    border = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])))
    return sum(1 for lab in range(1, count + 1) if lab not in border)


# ---------------------------------------------------------------------------
# Coefficient families and windows


def viro_polynomial(points: Sequence[Sequence[int]], lam: float = 4.0) -> LaurentPolynomial:
    """Patchworking coefficients ``(-1)^{m1+m2} exp(-lam |m - b|^2)``.

    ``b`` is the barycenter of the vertices of the hull of ``points``. With a
    strictly convex potential every lattice point gets its own complement
    component, so the amoeba has the maximal number of holes.
    """
    pts = [tuple(int(v) for v in p) for p in points]
    P = NewtonPolytope.from_points(pts)
    b = np.mean(np.array(P.vertices, dtype=float), axis=0)
    terms = []
    for m in pts:
        sign = -1.0 if sum(m) % 2 else 1.0
        terms.append((m, sign * np.exp(-lam * float(np.sum((np.array(m) - b) ** 2)))))
    return LaurentPolynomial(len(pts[0]), terms)


def full_support(P: NewtonPolytope) -> list[tuple[int, ...]]:
    return [p for p, _ in lattice_points(P)]


def tropical_window(f: LaurentPolynomial, resolution: int, margin: float = 6.0) -> Window:
    """Square window around the vertices of the tropical curve of ``|a_m|``.

    Falls back to ``[-margin, margin]^2`` when the tropical curve has no vertex.
    """
    from syz.spine import corner_locus

    funcs = [(e, float(np.log(abs(c)))) for e, c in f.terms]
    spine = corner_locus(funcs)
    if spine.vertices:
        v = np.array([[float(a), float(b)] for a, b in spine.vertices])
        lo, hi = v.min(axis=0) - margin, v.max(axis=0) + margin
    else:
        lo, hi = np.array([-margin, -margin]), np.array([margin, margin])
    c = (lo + hi) / 2
    half = float(np.max(hi - lo)) / 2
    return Window(c[0] - half, c[0] + half, c[1] - half, c[1] + half, resolution)


# ---------------------------------------------------------------------------
# Moment map and compactified amoeba


def moment_map(support: Sequence[Sequence[int]], z: Sequence[complex]) -> np.ndarray:
    """Algebraic moment map ``sum |z^m| m / sum |z^m|`` over lattice points ``m``."""
    m = np.asarray(support, dtype=float)
    if m.size == 0:
        raise ValueError("support must be nonempty")
    logs = log_map(z)
    a = m @ logs
    wts = np.exp(a - a.max())
    return (wts[:, None] * m).sum(axis=0) / wts.sum()


@dataclass(frozen=True)
class CompactifiedAmoeba:
    polytope: NewtonPolytope
    window: Window
    membership: np.ndarray
    points: np.ndarray = field(repr=False)  # moment-map images of all witnesses


def compactified_amoeba(f: LaurentPolynomial, resolution: int = 200, angular_samples: int = 256,
                        columns: int | None = None, workers: int | None = None) -> CompactifiedAmoeba:
    """Raster of the moment-map image of ``V_f`` inside the Newton polygon."""
    if f.num_vars != 2:
        raise ValueError("compactified_amoeba requires a bivariate polynomial")
    P = newton_polytope(f)
    support = full_support(P)
    verts = np.array(P.vertices, dtype=float)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    span = np.maximum(hi - lo, 1.0)
    win = Window(lo[0], lo[0] + span[0], lo[1], lo[1] + span[1], resolution)
    member = np.zeros((resolution, resolution), dtype=bool)
    if len(f) == 1:
        return CompactifiedAmoeba(P, win, member, np.empty((0, 2)))
    # log-coordinates far enough out that boundary weights fall below a pixel
    reach = np.log(resolution) + 12.0
    ncol = columns or 2 * resolution
    xs = np.linspace(-reach, reach, ncol)
    thetas = 2 * np.pi * (np.arange(angular_samples) + 0.5) / angular_samples
    sup = np.asarray(support, dtype=float)
    g = f.swap_variables()

    def images(args):
        poly, x, swap = args
        logs = _slice_log_matrix(poly, x, thetas).ravel()
        logs = logs[np.isfinite(logs)]
        other = np.full(logs.shape, x)
        pts = np.stack([logs, other] if swap else [other, logs], axis=1)
        a = pts @ sup.T  # (k, support)
        wts = np.exp(a - a.max(axis=1, keepdims=True))
        return (wts @ sup) / wts.sum(axis=1, keepdims=True)

    jobs = [(f, float(x), False) for x in xs] + [(g, float(x), True) for x in xs]
    pts = np.concatenate(map_ordered(images, jobs, workers))
    i = np.clip(np.floor((pts[:, 0] - win.xmin) / win.dx).astype(int), 0, resolution - 1)
    j = np.clip(np.floor((pts[:, 1] - win.ymin) / win.dy).astype(int), 0, resolution - 1)
    member[i, j] = True
    return CompactifiedAmoeba(P, win, member, pts)
