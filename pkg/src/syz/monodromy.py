"""Unimodular integer matrices for torus-fibration monodromy.

Matrices act on column vectors and are stored as tuples of tuples of ints.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from syz import intlinalg


@dataclass(frozen=True)
class MonodromyMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        r = tuple(tuple(int(x) for x in row) for row in rows)
        s = len(r)
        if s not in (2, 3) or any(len(row) != s for row in r):
            raise ValueError("monodromy matrices are 2x2 or 3x3")
        if intlinalg.det(r) != 1:
            raise ValueError(f"matrix {r} does not have determinant 1")
        object.__setattr__(self, "rows", r)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "MonodromyMatrix") -> "MonodromyMatrix":
        return MonodromyMatrix(intlinalg.matmul(self.rows, other.rows))

    def inverse(self) -> "MonodromyMatrix":
        return MonodromyMatrix(intlinalg.inverse_unimodular(self.rows))

    def minus_identity(self) -> list[list[int]]:
        return [[x - int(i == j) for j, x in enumerate(row)] for i, row in enumerate(self.rows)]

    def is_identity(self) -> bool:
        return self.rows == tuple(tuple(r) for r in intlinalg.identity(self.size))

    def to_json(self) -> dict:
        return {"size": self.size, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, doc) -> "MonodromyMatrix":
        try:
            rows = doc["rows"]
            size = int(doc.get("size", len(rows)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix document: {exc}") from exc
        if size != len(rows):
            raise ValueError("size does not match rows")
        return cls(rows)

    @classmethod
    def identity(cls, size: int) -> "MonodromyMatrix":
        return cls(intlinalg.identity(size))


class VertexKind(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    INVALID = "Invalid"


# Matrices in the standard basis of H_1 of the torus fiber.
EDGE_MONODROMY = MonodromyMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
POSITIVE_TRIPLE = (
    MonodromyMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
    MonodromyMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
    MonodromyMatrix([[1, 0, -1], [0, 1, -1], [0, 0, 1]]),
)
NEGATIVE_TRIPLE = (
    MonodromyMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
    MonodromyMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    MonodromyMatrix([[1, -1, -1], [0, 1, 0], [0, 0, 1]]),
)
SEMISTABLE_2X2 = MonodromyMatrix([[1, 1], [0, 1]])


def fixed_space(M: MonodromyMatrix) -> tuple[int, list[list[int]]]:
    """Dimension and Hermite-reduced primitive integer basis of ``ker(M - I)``."""
    basis = intlinalg.integer_kernel(M.minus_identity(), ncols=M.size)
    return len(basis), basis


def semistable_k(M: MonodromyMatrix) -> int | None:
    """The invariant ``k`` of a semistable monodromy, or ``None`` if not semistable.

    ``M`` is semistable when ``N = M - I`` satisfies ``N^2 = 0`` and has rank
    at most one; then ``k`` is the gcd of the entries of ``N``.
    """
    N = M.minus_identity()
    if any(any(x for x in row) for row in intlinalg.matmul(N, N)):
        return None
    if intlinalg.rank(N) > 1:
        return None
    g = 0
    for row in N:
        for x in row:
            g = gcd(g, x)
    return g


def common_fixed_dimension(matrices: Sequence[MonodromyMatrix]) -> int:
    stacked = [row for M in matrices for row in M.minus_identity()]
    return matrices[0].size - intlinalg.rank(stacked)


def product(matrices: Sequence[MonodromyMatrix]) -> MonodromyMatrix:
    out = MonodromyMatrix.identity(matrices[0].size)
    for M in matrices:
        out = out @ M
    return out


def classify_vertex(triple: Sequence[MonodromyMatrix]) -> VertexKind:
    """Positive/Negative by the common fixed space of a valid vertex triple."""
    if len(triple) != 3 or any(M.size != 3 for M in triple):
        return VertexKind.INVALID
    if not product(triple).is_identity():
        return VertexKind.INVALID
    if any(semistable_k(M) != 1 for M in triple):
        return VertexKind.INVALID
    dim = common_fixed_dimension(triple)
    if dim == 2:
        return VertexKind.POSITIVE
    if dim == 1:
        return VertexKind.NEGATIVE
    return VertexKind.INVALID


def mirror_dual(M: MonodromyMatrix) -> MonodromyMatrix:
    """Transpose of the inverse (monodromy on the dual torus)."""
    return MonodromyMatrix(intlinalg.transpose(intlinalg.inverse_unimodular(M.rows)))


def random_sl(size: int, rng: random.Random, steps: int = 6) -> MonodromyMatrix:
    """Random element of SL(size, Z) as a product of elementary matrices."""
    rows = intlinalg.identity(size)
    for _ in range(steps):
        i, j = rng.sample(range(size), 2)
        c = rng.choice([-2, -1, 1, 2])
        E = intlinalg.identity(size)
        E[i][j] = c
        rows = intlinalg.matmul(rows, E)
    return MonodromyMatrix(rows)


def conjugate(C: MonodromyMatrix, M: MonodromyMatrix) -> MonodromyMatrix:
    return C @ M @ C.inverse()


# ---------------------------------------------------------------------------
# K3-style 2x2 lists


@dataclass
class K3Report:
    ks: list[int | None]
    all_k_one: bool
    product_identity: bool
    count: int
    warnings: list[str]

    @property
    def passed(self) -> bool:
        return self.all_k_one and self.product_identity

    def to_json(self) -> dict:
        return {
            "ks": self.ks,
            "all_k_one": self.all_k_one,
            "product_identity": self.product_identity,
            "count": self.count,
            "passed": self.passed,
            "warnings": self.warnings,
        }


def validate_k3_list(matrices: Sequence) -> K3Report:
    """Check a list of 2x2 local monodromies around the singular fibers.

    Raises:
        ValueError: empty list, wrong size, or a matrix without determinant 1.
    """
    if not matrices:
        raise ValueError("empty monodromy list")
    mats = [m if isinstance(m, MonodromyMatrix) else MonodromyMatrix(m) for m in matrices]
    if any(m.size != 2 for m in mats):
        raise ValueError("K3 monodromies are 2x2")
    ks = [semistable_k(m) for m in mats]
    warnings = []
    if len(mats) != 24:
        warnings.append(f"expected 24 singular fibers, got {len(mats)}")
    return K3Report(
        ks=ks,
        all_k_one=all(k == 1 for k in ks),
        product_identity=product(mats).is_identity(),
        count=len(mats),
        warnings=warnings,
    )


def relation_search(generators: Sequence[MonodromyMatrix], max_length: int = 12) -> list[int]:
    """Shortest word (as generator indices) whose product is the identity.

    Breadth-first over positive words; ties resolve to the lexicographically
    first word.
    """
    size = generators[0].size
    ident = MonodromyMatrix.identity(size)
    frontier: dict[tuple, list[int]] = {ident.rows: []}
    for length in range(1, max_length + 1):
        nxt: dict[tuple, list[int]] = {}
        for rows, word in frontier.items():
            M = MonodromyMatrix(rows)
            for g_idx, g in enumerate(generators):
                P = M @ g
                w = word + [g_idx]
                if P.is_identity():
                    return w
                if P.rows not in nxt or w < nxt[P.rows]:
                    nxt[P.rows] = w
        frontier = nxt
    raise ValueError(f"no relation of length <= {max_length}")


def k3_monodromy_list() -> list[MonodromyMatrix]:
    """24 conjugates of ``[[1,1],[0,1]]`` whose ordered product is the identity.

    Searches for a shortest positive relation among the two conjugates
    ``T`` and ``S T S^-1`` (S the quarter turn), then repeats it to reach 24.
    """
    S = MonodromyMatrix([[0, -1], [1, 0]])
    gens = [SEMISTABLE_2X2, conjugate(S, SEMISTABLE_2X2)]
    word = relation_search(gens)
    if 24 % len(word):
        raise ValueError(f"relation of length {len(word)} does not tile 24")
    return [gens[i] for i in word] * (24 // len(word))


def load_matrices(doc) -> list[MonodromyMatrix]:
    """Matrices from a triple/list document ``{"matrices": [...]}`` or a bare list."""
    items = doc["matrices"] if isinstance(doc, dict) and "matrices" in doc else doc
    if isinstance(items, dict):
        return [MonodromyMatrix.from_json(items)]
    return [MonodromyMatrix.from_json(m) for m in items]


__all__ = [
    "MonodromyMatrix", "VertexKind", "EDGE_MONODROMY", "POSITIVE_TRIPLE", "NEGATIVE_TRIPLE",
    "fixed_space", "semistable_k", "classify_vertex", "mirror_dual", "validate_k3_list",
    "k3_monodromy_list", "relation_search", "random_sl", "conjugate", "product",
    "common_fixed_dimension", "load_matrices", "K3Report", "SEMISTABLE_2X2",
]

