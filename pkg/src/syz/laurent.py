"""Laurent polynomials, Newton polytopes and their lattice points.

Exponents are exact integers throughout; coefficients are complex doubles.
Convex hulls are certified with integer orientation predicates, so vertex
sets and lattice-point counts are exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from syz import intlinalg

MAX_POLYTOPE_DIM = 4


class DomainError(ValueError):
    """A torus point with a zero coordinate where (C*)^n is required."""


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finitely supported polynomial ``sum a_I z^I`` with integer exponents.

    Terms are stored sorted by exponent; zero coefficients are dropped at
    construction. At least one nonzero term is required.
    """

    num_vars: int
    terms: tuple[tuple[tuple[int, ...], complex], ...]

    def __init__(self, num_vars: int, terms: Iterable[tuple[Sequence[int], complex]]):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        merged: dict[tuple[int, ...], complex] = {}
        for exp, coef in terms:
            key = tuple(int(e) for e in exp)
            if len(key) != num_vars:
                raise ValueError(f"exponent {key} has wrong length for {num_vars} variables")
            if key in merged:
                raise ValueError(f"duplicate exponent {key}")
            merged[key] = complex(coef)
        cleaned = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
        if not cleaned:
            raise ValueError("polynomial has no nonzero terms")
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_dict(cls, num_vars: int, coeffs: Mapping[Sequence[int], complex]) -> "LaurentPolynomial":
        return cls(num_vars, coeffs.items())

    @property
    def exponents(self) -> np.ndarray:
        return np.array([e for e, _ in self.terms], dtype=np.int64)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=np.complex128)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def __call__(self, *z: complex) -> complex:
        return evaluate(self, z)

    def swap_variables(self, i: int = 0, j: int = 1) -> "LaurentPolynomial":
        def sw(e):
            e = list(e)
            e[i], e[j] = e[j], e[i]
            return e
        return LaurentPolynomial(self.num_vars, [(sw(e), c) for e, c in self.terms])

    # -- JSON document ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": self.num_vars,
            "terms": [
                {"exp": list(e), "re": c.real, "im": c.imag} for e, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "LaurentPolynomial":
        try:
            n = int(doc["vars"])
            terms = [
                (t["exp"], complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))))
                for t in doc["terms"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial document: {exc}") from exc
        for exp, _ in terms:
            if any(not isinstance(e, int) or isinstance(e, bool) for e in exp):
                raise ValueError("exponents must be integers")
        return cls(n, terms)

    @classmethod
    def load(cls, path) -> "LaurentPolynomial":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def evaluate(f: LaurentPolynomial, z: Sequence[complex]) -> complex:
    """Evaluate ``f`` at ``z``, summing in term order."""
    if len(z) != f.num_vars:
        raise ValueError("point has wrong dimension")
    z = [complex(v) for v in z]
    total = 0j
    for exp, coef in f.terms:
        term = coef
        for zi, e in zip(z, exp):
            if e < 0 and zi == 0:
                raise DomainError("zero coordinate with a negative exponent")
            if e:
                term *= zi ** e
        total += term
    return total


# ---------------------------------------------------------------------------
# Convex hulls


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Andrew's monotone chain; returns extreme points counter-clockwise."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hyperplane(points: Sequence[Sequence[int]]) -> tuple[list[int], int] | None:
    """Integer normal/offset of the hyperplane through k = dim points (dim k)."""
    k = len(points[0])
    base = points[0]
    rows = [[p[i] - base[i] for i in range(k)] for p in points[1:]]
    ker = intlinalg.integer_kernel(rows, ncols=k)
    if len(ker) != 1:
        return None
    normal = ker[0]
    return normal, sum(a * b for a, b in zip(normal, base))


def _facets_full(points: list[tuple[int, ...]]) -> list[tuple[list[int], int]]:
    """Facet inequalities ``<normal, p> <= offset`` of a full-dimensional hull.

    Candidates come from qhull; each facet is then certified exactly.
    """
    k = len(points[0])
    if k == 2:
        hull = _hull_2d(points)
        out = []
        for a, b in zip(hull, hull[1:] + hull[:1]):
            normal = [b[1] - a[1], a[0] - b[0]]
            normal = intlinalg.primitive(normal)
            out.append((normal, normal[0] * a[0] + normal[1] * a[1]))
        return out
    candidates = _candidate_vertices(points)
    facets: dict[tuple, tuple[list[int], int]] = {}
    for combo in itertools.combinations(candidates, k):
        hp = _hyperplane(combo)
        if hp is None:
            continue
        normal, off = hp
        vals = [sum(a * b for a, b in zip(normal, p)) for p in candidates]
        if all(v <= off for v in vals):
            pass
        elif all(v >= off for v in vals):
            normal, off = [-x for x in normal], -off
        else:
            continue
        facets[(tuple(normal), off)] = (normal, off)
    out = list(facets.values())
    # Certificate: the candidate hull contains every input point.
    for p in points:
        for normal, off in out:
            if sum(a * b for a, b in zip(normal, p)) > off:
                return _facets_bruteforce(points)
    return sorted(out)


def _facets_bruteforce(points: list[tuple[int, ...]]) -> list[tuple[list[int], int]]:
    k = len(points[0])
    facets: dict[tuple, tuple[list[int], int]] = {}
    for combo in itertools.combinations(points, k):
        hp = _hyperplane(combo)
        if hp is None:
            continue
        normal, off = hp
        vals = [sum(a * b for a, b in zip(normal, p)) for p in points]
        if all(v <= off for v in vals):
            facets[(tuple(normal), off)] = (normal, off)
        elif all(v >= off for v in vals):
            normal, off = [-x for x in normal], -off
            facets[(tuple(normal), off)] = (normal, off)
    return sorted(facets.values())


def _candidate_vertices(points: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(np.array(points, dtype=float))
        return sorted({points[i] for i in hull.vertices})
    except Exception:  # qhull failure: fall back to everything
        return sorted(set(points))


def _is_vertex(p, facets, k) -> bool:
    tight = [n for n, off in facets if sum(a * b for a, b in zip(n, p)) == off]
    return len(tight) >= k and intlinalg.rank(tight) == k


@dataclass(frozen=True)
class NewtonPolytope:
    """Convex hull of a finite set of lattice points, stored by its vertices."""

    dim: int
    vertices: tuple[tuple[int, ...], ...]
    _facets: tuple = field(default=(), repr=False, compare=False)
    _equations: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "NewtonPolytope":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        n = len(pts[0])
        base = pts[0]
        diffs = [[p[i] - base[i] for i in range(n)] for p in pts[1:]]
        # equations of the affine hull: rows of the kernel of the difference matrix
        if diffs:
            eqs = intlinalg.integer_kernel(diffs, ncols=n)
        else:
            eqs = intlinalg.identity(n)
        equations = tuple(
            (tuple(e), sum(a * b for a, b in zip(e, base))) for e in eqs
        )
        affdim = n - len(eqs)
        if affdim == 0:
            return cls(n, (base,), (), equations)
        # coordinate projection that is injective on the affine hull
        coords = _injective_coords(diffs, affdim, n)
        proj = [tuple(p[i] for i in coords) for p in pts]
        if affdim == 1:
            lo, hi = min(proj), max(proj)
            verts = sorted({pts[proj.index(lo)], pts[proj.index(hi)]})
            pf = ((( 1,), hi[0]), ((-1,), -lo[0]))
        else:
            pf = tuple((tuple(nrm), off) for nrm, off in _facets_full(proj))
            verts = sorted(p for p, q in zip(pts, proj) if _is_vertex(q, pf, affdim))
        # lift projected facets to ambient coordinates
        facets = []
        for nrm, off in pf:
            full = [0] * n
            for c, a in zip(coords, nrm):
                full[c] = a
            facets.append((tuple(full), off))
        return cls(n, tuple(verts), tuple(facets), equations)

    @property
    def affine_dim(self) -> int:
        return self.dim - len(self._equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self._equations

    def contains(self, p: Sequence[int | float], strict: bool = False) -> bool:
        """Exact membership for integer ``p`` (closed or open polytope)."""
        for e, off in self._equations:
            if strict or sum(a * b for a, b in zip(e, p)) != off:
                return False
        for nrm, off in self._facets:
            v = sum(a * b for a, b in zip(nrm, p))
            if v > off or (strict and v == off):
                return False
        return True

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}


def _injective_coords(diffs, affdim: int, n: int) -> tuple[int, ...]:
    for coords in itertools.combinations(range(n), affdim):
        sub = [[d[i] for i in coords] for d in diffs]
        if intlinalg.rank(sub) == affdim:
            return coords
    raise AssertionError("no injective coordinate projection")


def newton_polytope(f: LaurentPolynomial) -> NewtonPolytope:
    return NewtonPolytope.from_points(f.support)


def lattice_points(P: NewtonPolytope) -> list[tuple[tuple[int, ...], bool]]:
    """All lattice points of ``P`` with an interior flag, lexicographically.

    Interior means the topological interior in R^n, so lower-dimensional
    polytopes have no interior points.
    """
    if P.dim > MAX_POLYTOPE_DIM:
        raise ValueError(f"dimension {P.dim} > {MAX_POLYTOPE_DIM} is not supported")
    verts = np.array(P.vertices)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    out = []
    for p in itertools.product(*(range(int(a), int(b) + 1) for a, b in zip(lo, hi))):
        if P.contains(p):
            out.append((p, P.is_full_dimensional and P.contains(p, strict=True)))
    return out


def baker_genus(P: NewtonPolytope) -> int:
    """Number of interior lattice points of a plane Newton polygon."""
    if P.dim != 2:
        raise ValueError("baker_genus requires a polytope in Z^2")
    return sum(1 for _, interior in lattice_points(P) if interior)


def dilated_simplex_points(d: int, n: int = 2) -> list[tuple[int, ...]]:
    """Lattice points of ``d * Delta_n`` in the standard coordinates."""
    return [p for p in itertools.product(range(d + 1), repeat=n) if sum(p) <= d]
