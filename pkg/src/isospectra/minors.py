"""Exact principal minors and the symmetrized-principal-minors test.

Subsets of ``{0, ..., n-1}`` are passed either as iterables of indices or
as bitmasks (bit ``k`` set <=> index ``k`` in the subset).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import ResourceLimitError
from .polycore import to_rational

DEFAULT_MINOR_CAP = 12


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[mpq, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RationalMatrix:
        return cls(tuple(tuple(to_rational(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[0] * n for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> mpq:
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, idx: Sequence[int]) -> list[list[mpq]]:
        return [[self.entries[i][j] for j in idx] for i in idx]

    def conjugate_by(self, perm: Sequence[int]) -> RationalMatrix:
        """P^T A P for the permutation matrix sending basis vector k to perm[k]."""
        n = self.n
        return RationalMatrix(
            tuple(tuple(self.entries[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        )

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def to_complex(self):
        import numpy as np

        return np.array([[complex(x) for x in row] for row in self.entries], dtype=complex)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def as_matrix(A) -> RationalMatrix:
    return A if isinstance(A, RationalMatrix) else RationalMatrix.from_rows(A)


def _mask(subset) -> int:
    if isinstance(subset, int):
        return subset
    m = 0
    for k in subset:
        m |= 1 << k
    return m


def _indices(mask: int) -> list[int]:
    out, k = [], 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def bareiss_det(M: list[list[mpq]]) -> mpq:
    """Determinant by fraction-free Bareiss elimination with row pivoting."""
    n = len(M)
    if n == 0:
        return mpq(1)
    a = [list(row) for row in M]
    sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return mpq(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
            row_i[k] = mpq(0)
        prev = akk
    return sign * a[n - 1][n - 1]


def principal_minor(A, N) -> mpq:
    A = as_matrix(A)
    idx = _indices(_mask(N))
    if idx and idx[-1] >= A.n:
        raise ValueError("subset index out of range")
    return bareiss_det(A.submatrix(idx))


def all_principal_minors(A, cap: int = DEFAULT_MINOR_CAP) -> dict[int, mpq]:
    """Table bitmask -> det(A_N) over all 2^n subsets."""
    A = as_matrix(A)
    if A.n > cap:
        raise ResourceLimitError(f"n={A.n} exceeds the minor-table cap {cap}")
    return {mask: bareiss_det(A.submatrix(_indices(mask))) for mask in range(1 << A.n)}


@dataclass(frozen=True)
class SymmetrizedVerdict:
    symmetrized: bool
    k: int | None = None
    subsets: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    values: tuple[mpq, mpq] | None = None

    def __bool__(self) -> bool:
        return self.symmetrized


def has_symmetrized_principal_minors(A, minors: dict[int, mpq] | None = None) -> SymmetrizedVerdict:
    """Check whether, for each size k, all k x k principal minors coincide.

    On failure reports the smallest violating k with two witnessing subsets.
    """
    A = as_matrix(A)
    n = A.n
    table = minors if minors is not None else all_principal_minors(A)
    for k in range(1, n + 1):
        first = None
        for combo in itertools.combinations(range(n), k):
            val = table[_mask(combo)]
            if first is None:
                first = (combo, val)
            elif val != first[1]:
                return SymmetrizedVerdict(False, k, (first[0], combo), (first[1], val))
    return SymmetrizedVerdict(True)


def minor_average_defect(A, m: int, N0: Iterable[int]) -> mpq:
    """det(A_{N0}) minus the mean of all m x m principal minors."""
    A = as_matrix(A)
    N0 = tuple(N0)
    if len(set(N0)) != m:
        raise ValueError("|N0| must equal m")
    total = sum(
        (principal_minor(A, c) for c in itertools.combinations(range(A.n), m)), mpq(0)
    )
    return principal_minor(A, N0) - total / comb(A.n, m)


def graph_rigidity_class(A) -> str:
    """Classify a weighted simple graph's adjacency matrix.

    Returns "edgeless", "complete-equal-up-to-sign" or "other"; "other"
    means a nonzero isospectral diagonal shift exists.
    """
    A = as_matrix(A)
    n = A.n
    if not A.is_symmetric() or any(A[i, i] for i in range(n)):
        raise ValueError("expected a symmetric matrix with zero diagonal")
    weights = [A[i, j] for i in range(n) for j in range(i + 1, n)]
    if not any(weights):
        return "edgeless"
    if all(w for w in weights) and len({abs(w) for w in weights}) == 1:
        return "complete-equal-up-to-sign"
    return "other"
