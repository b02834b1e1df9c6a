"""Spectral invariants and ideals of generalized spectral invariants.

An ideal of generalized spectral invariants is ``(e_1 + g_1, ..., e_n + g_n)``
with ``deg g_i < i``.  It is stored through its perturbations ``g_i``.
When every ``g_i`` is square-free the ideal also has a triangular table
representation (:class:`PerturbationTable`), cell ``(i, J)`` holding the
coefficient of ``v^J`` in ``g_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gmpy2 import mpq

from .minors import all_principal_minors, as_matrix, DEFAULT_MINOR_CAP
from .polycore import (
    ExactPoly,
    GroebnerConfig,
    MonomialOrder,
    buchberger,
    elementary_symmetric,
    to_rational,
)


def _mask_to_mono(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> k) & 1 for k in range(n))


def _mono_to_mask(mono) -> int:
    m = 0
    for k, e in enumerate(mono):
        if e > 1:
            raise ValueError("monomial is not square-free")
        if e:
            m |= 1 << k
    return m


@dataclass(frozen=True)
class SquareFreePoly:
    """Polynomial supported on square-free monomials, keyed by bitmask."""

    nvars: int
    terms: Mapping[int, mpq] = field(default_factory=dict)

    @classmethod
    def from_exact(cls, p: ExactPoly) -> SquareFreePoly:
        return cls(p.nvars, {_mono_to_mask(m): c for m, c in p.terms.items()})

    def to_exact(self) -> ExactPoly:
        return ExactPoly._raw(
            self.nvars, {_mask_to_mono(m, self.nvars): c for m, c in self.terms.items() if c}
        )

    def degree(self) -> int:
        return max((bin(m).count("1") for m, c in self.terms.items() if c), default=-1)


@dataclass(frozen=True)
class PerturbationTable:
    """Coefficients a_J^(i): column i in 1..n, J a 0-based subset with |J| <= i - 1."""

    n: int
    coeffs: Mapping[tuple[int, frozenset], mpq] = field(default_factory=dict)

    def __post_init__(self):
        for (i, J), _ in self.coeffs.items():
            if not 1 <= i <= self.n:
                raise ValueError(f"column {i} out of range 1..{self.n}")
            if any(not 0 <= j < self.n for j in J):
                raise ValueError(f"subset {sorted(J)} out of range")
            if len(J) >= i:
                raise ValueError(f"cell (i={i}, J={sorted(J)}) has auxiliary degree <= 0")

    @classmethod
    def from_cells(cls, n: int, cells: Iterable[tuple[int, Iterable[int], object]]) -> PerturbationTable:
        coeffs: dict[tuple[int, frozenset], mpq] = {}
        for i, J, a in cells:
            key = (i, frozenset(J))
            coeffs[key] = coeffs.get(key, mpq(0)) + to_rational(a)
        return cls(n, {k: v for k, v in coeffs.items() if v})

    def to_json(self) -> str:
        cells = [
            {"i": i, "J": sorted(j + 1 for j in J), "a": str(a)}
            for (i, J), a in sorted(self.coeffs.items(), key=lambda t: (t[0][0], sorted(t[0][1])))
        ]
        return json.dumps({"n": self.n, "cells": cells})

    @classmethod
    def from_json(cls, text: str) -> PerturbationTable:
        data = json.loads(text)
        return cls.from_cells(
            int(data["n"]), ((c["i"], [j - 1 for j in c["J"]], str(c["a"])) for c in data["cells"])
        )


@dataclass(frozen=True)
class SpectralIdeal:
    """The ideal (e_1 + g_1, ..., e_n + g_n)."""

    n: int
    perturbations: tuple[ExactPoly, ...]

    def __post_init__(self):
        if len(self.perturbations) != self.n:
            raise ValueError("need exactly n perturbations")
        for i, g in enumerate(self.perturbations, start=1):
            if g.nvars != self.n:
                raise ValueError("perturbation lives in the wrong ring")
            if g.total_degree() >= i:
                raise ValueError(f"perturbation g_{i} must have degree < {i}")

    @property
    def generators(self) -> list[ExactPoly]:
        return [elementary_symmetric(self.n, i) + g for i, g in enumerate(self.perturbations, 1)]

    def is_square_free(self) -> bool:
        return all(g.is_square_free() for g in self.perturbations)

    @property
    def table(self) -> PerturbationTable:
        if not self.is_square_free():
            raise ValueError("ideal has non-square-free perturbations; no table form")
        cells = []
        for i, g in enumerate(self.perturbations, 1):
            for m, c in g.terms.items():
                cells.append((i, [k for k, e in enumerate(m) if e], c))
        return PerturbationTable.from_cells(self.n, cells)

    def square_free_generators(self) -> list[SquareFreePoly]:
        return [SquareFreePoly.from_exact(g) for g in self.generators]

    def groebner(self, order: MonomialOrder = MonomialOrder.GREVLEX, config: GroebnerConfig | None = None):
        return buchberger(self.generators, order, config)

    def permuted(self, perm) -> SpectralIdeal:
        """Image under v_k -> v_perm[k]."""
        return SpectralIdeal(self.n, tuple(g.permute(perm) for g in self.perturbations))

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def elementary_ideal(n: int) -> SpectralIdeal:
    return SpectralIdeal(n, tuple(ExactPoly.zero(n) for _ in range(n)))


def ideal_from_table(table: PerturbationTable) -> SpectralIdeal:
    n = table.n
    gs = [dict() for _ in range(n)]
    for (i, J), a in table.coeffs.items():
        mono = tuple(1 if k in J else 0 for k in range(n))
        gs[i - 1][mono] = a
    return SpectralIdeal(n, tuple(ExactPoly(n, g) for g in gs))


def ideal_from_polys(generators: list[ExactPoly]) -> SpectralIdeal:
    """Build from explicit generators f_i whose degree-i part is e_i.

    Accepts non-square-free perturbations.
    """
    n = len(generators)
    gs = []
    for i, f in enumerate(generators, 1):
        g = f - elementary_symmetric(n, i)
        if g.total_degree() >= i:
            raise ValueError(f"generator {i} does not have e_{i} as its top-degree part")
        gs.append(g)
    return SpectralIdeal(n, tuple(gs))


def spectral_invariant_polys(A, cap: int = DEFAULT_MINOR_CAP) -> list[SquareFreePoly]:
    """S_1..S_n: coefficient of v^J in S_i is the sum of det(A_N), N avoiding J, |N| = i - |J|."""
    A = as_matrix(A)
    n = A.n
    minors = all_principal_minors(A, cap)
    full = (1 << n) - 1
    polys: list[dict[int, mpq]] = [dict() for _ in range(n)]
    for J in range(1, full + 1):
        kJ = bin(J).count("1")
        comp = full & ~J
        N = comp
        while True:
            val = minors[N]
            if val:
                i = kJ + bin(N).count("1")
                d = polys[i - 1]
                d[J] = d.get(J, mpq(0)) + val
            if N == 0:
                break
            N = (N - 1) & comp
    return [SquareFreePoly(n, {m: c for m, c in p.items() if c}) for p in polys]


def spectral_invariants(A, cap: int = DEFAULT_MINOR_CAP) -> SpectralIdeal:
    A = as_matrix(A)
    n = A.n
    polys = spectral_invariant_polys(A, cap)
    gs = []
    for i, S in enumerate(polys, 1):
        gs.append(S.to_exact() - elementary_symmetric(n, i))
    return SpectralIdeal(n, tuple(gs))


def equals_elementary_ideal(E: SpectralIdeal, config: GroebnerConfig | None = None) -> bool:
    """Exact ideal equality with (e_1, ..., e_n) via reduced grevlex Groebner bases."""
    n = E.n
    target = buchberger([elementary_symmetric(n, i) for i in range(1, n + 1)], MonomialOrder.GREVLEX, config)
    mine = buchberger(E.generators, MonomialOrder.GREVLEX, config)
    return set(target.generators) == set(mine.generators)


def scale_ideal(E: SpectralIdeal, t) -> SpectralIdeal:
    """Fibre T = t of the homogenized family: degree-k terms of g_i get weight t^(i-k)."""
    t = to_rational(t)
    gs = []
    for i, g in enumerate(E.perturbations, 1):
        gs.append(ExactPoly(E.n, {m: c * t ** (i - sum(m)) for m, c in g.terms.items()}))
    return SpectralIdeal(E.n, tuple(gs))
