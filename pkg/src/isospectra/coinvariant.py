"""Coinvariant algebra engine.

Artin monomials ``v^l`` with ``l_k <= n - 1 - k`` (0-based ``k``) form a
basis of ``P/(e_1..e_n)`` and, for any ideal of generalized spectral
invariants ``E``, of ``P/E``.  Classes are represented as ``ExactPoly``
objects supported on Artin monomials.

Reduction modulo ``(e_1..e_n)`` rewrites with the closed-form Groebner
basis ``G_k = H_{n-k}(v_1..v_{k+1})`` (lex, v1 < ... < vn), whose leading
monomial is ``v_{k+1}^{n-k}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from gmpy2 import mpq

from .invariants import SpectralIdeal, elementary_ideal, spectral_invariants
from .minors import all_principal_minors, as_matrix
from .polycore import ExactPoly, complete_homogeneous, elementary_symmetric

Monomial = tuple[int, ...]


def artin_monomials(n: int) -> list[Monomial]:
    """All n! Artin monomials, sorted by (total degree, exponent tuple)."""
    mons = itertools.product(*(range(n - k) for k in range(n)))
    return sorted(mons, key=lambda m: (sum(m), m))


def is_artin(m: Monomial) -> bool:
    n = len(m)
    return all(e <= n - 1 - k for k, e in enumerate(m))


def _violating_index(m: Monomial) -> int:
    n = len(m)
    for k in range(n - 1, -1, -1):
        if m[k] >= n - k:
            return k
    return -1


def _add_into(acc: dict, src: dict, scale) -> None:
    for mono, c in src.items():
        v = acc.get(mono, 0) + scale * c
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)


class _Coinvariant:
    """Per-n caches for Artin reduction."""

    def __init__(self, n: int):
        self.n = n
        # tails of G_k (everything but the leading power v_k^(n-k))
        self.tails: list[list[tuple[Monomial, mpq]]] = []
        for k in range(n):
            H = complete_homogeneous(n - k, k + 1, n)
            lead = tuple(n - k if i == k else 0 for i in range(n))
            self.tails.append([(m, c) for m, c in H.terms.items() if m != lead])
        self._red: dict[Monomial, dict[Monomial, mpq]] = {}
        self._cof: dict[Monomial, tuple[dict, dict]] = {}

    def reduce_monomial(self, m: Monomial) -> dict[Monomial, mpq]:
        hit = self._red.get(m)
        if hit is not None:
            return hit
        k = _violating_index(m)
        if k < 0:
            out = {m: mpq(1)}
        else:
            # m = q * v_k^(n-k)  and  v_k^(n-k) == -(tail of G_k)  mod (e)
            q = tuple(e - (self.n - k if i == k else 0) for i, e in enumerate(m))
            out = {}
            for t, c in self.tails[k]:
                _add_into(out, self.reduce_monomial(tuple(a + b for a, b in zip(q, t))), -c)
        self._red[m] = out
        return out

    def reduce_monomial_with_cofactors(self, m: Monomial) -> tuple[dict, dict]:
        """(artin part, {k: H-cofactor dict}) with m = artin + sum_k cof_k * G_k."""
        hit = self._cof.get(m)
        if hit is not None:
            return hit
        k = _violating_index(m)
        if k < 0:
            out = ({m: mpq(1)}, {})
        else:
            q = tuple(e - (self.n - k if i == k else 0) for i, e in enumerate(m))
            artin: dict = {}
            cof: dict[int, dict] = {k: {q: mpq(1)}}
            for t, c in self.tails[k]:
                a2, c2 = self.reduce_monomial_with_cofactors(tuple(x + y for x, y in zip(q, t)))
                _add_into(artin, a2, -c)
                for kk, d in c2.items():
                    _add_into(cof.setdefault(kk, {}), d, -c)
            out = (artin, {kk: d for kk, d in cof.items() if d})
        self._cof[m] = out
        return out


@lru_cache(maxsize=None)
def _engine(n: int) -> _Coinvariant:
    return _Coinvariant(n)


@lru_cache(maxsize=None)
def _h_to_e(n: int, k: int) -> tuple[ExactPoly, ...]:
    """Coefficients c_i with G_k = sum_i c_i e_i (from the H/e generating-series identity)."""
    N = n - k
    coeffs = []
    for i in range(1, n + 1):
        if i <= N:
            coeffs.append(complete_homogeneous(N - i, k + 1, n).scale((-1) ** (i + 1)))
        else:
            coeffs.append(ExactPoly.zero(n))
    return tuple(coeffs)


def artin_reduction(p: ExactPoly) -> ExactPoly:
    """Class of p in P/(e_1..e_n) in the Artin basis."""
    eng = _engine(p.nvars)
    out: dict = {}
    for m, c in p.terms.items():
        _add_into(out, eng.reduce_monomial(m), c)
    return ExactPoly._raw(p.nvars, out)


def artin_reduction_with_cofactors(p: ExactPoly) -> tuple[ExactPoly, list[ExactPoly]]:
    """Return (r, [q_1..q_n]) with p = r + sum_i q_i e_i exactly and r Artin-supported."""
    n = p.nvars
    eng = _engine(n)
    artin: dict = {}
    hcof: dict[int, dict] = {}
    for m, c in p.terms.items():
        a, cf = eng.reduce_monomial_with_cofactors(m)
        _add_into(artin, a, c)
        for k, d in cf.items():
            _add_into(hcof.setdefault(k, {}), d, c)
    qs = [ExactPoly.zero(n) for _ in range(n)]
    for k, d in hcof.items():
        qk = ExactPoly._raw(n, d)
        if not qk:
            continue
        for i, ci in enumerate(_h_to_e(n, k)):
            if ci:
                qs[i] = qs[i] + qk * ci
    return ExactPoly._raw(n, artin), qs


class QuotientEngine:
    """Normal forms in P/E using the degree-decreasing substitution e_i -> -g_i."""

    def __init__(self, E: SpectralIdeal):
        self.E = E
        n = self.n = E.n
        self._co = _engine(n)
        # G'_k = sum_i c_{k,i} g_i, the image of G_k after e_i -> g_i
        self._gprime: list[dict[Monomial, mpq]] = []
        for k in range(n):
            acc = ExactPoly.zero(n)
            for ci, g in zip(_h_to_e(n, k), E.perturbations):
                if ci and g:
                    acc = acc + ci * g
            self._gprime.append(acc.terms)
        self._memo: dict[Monomial, dict[Monomial, mpq]] = {}
        self.basis = artin_monomials(n)
        self._index = {b: i for i, b in enumerate(self.basis)}

    def nf_monomial(self, m: Monomial) -> dict[Monomial, mpq]:
        hit = self._memo.get(m)
        if hit is not None:
            return hit
        artin, hcof = self._co.reduce_monomial_with_cofactors(m)
        out = dict(artin)
        # m == artin + sum_k hcof_k * G_k  ==  artin - sum_k hcof_k * G'_k  (mod E)
        rest: dict = {}
        for k, d in hcof.items():
            gp = self._gprime[k]
            if not gp:
                continue
            for qm, qc in d.items():
                for gm, gc in gp.items():
                    mm = tuple(a + b for a, b in zip(qm, gm))
                    v = rest.get(mm, 0) + qc * gc
                    if v:
                        rest[mm] = v
                    else:
                        del rest[mm]
        for mm, c in rest.items():
            _add_into(out, self.nf_monomial(mm), -c)
        self._memo[m] = out
        return out

    def normal_form(self, p: ExactPoly) -> ExactPoly:
        out: dict = {}
        for m, c in p.terms.items():
            _add_into(out, self.nf_monomial(m), c)
        return ExactPoly._raw(self.n, out)

    def column(self, u: ExactPoly, b: Monomial) -> dict[Monomial, mpq]:
        out: dict = {}
        for m, c in u.terms.items():
            _add_into(out, self.nf_monomial(tuple(x + y for x, y in zip(m, b))), c)
        return out

    def trace(self, u: ExactPoly) -> mpq:
        total = mpq(0)
        for b in self.basis:
            total += self.column(u, b).get(b, 0)
        return total


def normal_form_mod_E(p: ExactPoly, E: SpectralIdeal) -> ExactPoly:
    """Class of p in P/E written in the Artin basis."""
    return QuotientEngine(E).normal_form(p)


@dataclass(frozen=True)
class MultMatrix:
    """Matrix of multiplication by ``u`` on P/E; column b holds NF(u * b)."""

    u: ExactPoly
    ideal: SpectralIdeal
    basis: tuple[Monomial, ...]
    entries: tuple[tuple[mpq, ...], ...]

    def trace(self) -> mpq:
        return sum((self.entries[i][i] for i in range(len(self.basis))), mpq(0))

    def charpoly(self) -> list[mpq]:
        """Coefficients [1, c_1, ..., c_N] of det(x I - M) by Faddeev-LeVerrier."""
        N = len(self.basis)
        M = [list(r) for r in self.entries]
        coeffs = [mpq(1)]
        Mk = [[mpq(0)] * N for _ in range(N)]
        for k in range(1, N + 1):
            # Mk <- M (Mk_prev + c_{k-1} I)
            prev = [row[:] for row in Mk]
            for i in range(N):
                prev[i][i] += coeffs[-1]
            Mk = [[sum((M[i][t] * prev[t][j] for t in range(N) if M[i][t]), mpq(0)) for j in range(N)] for i in range(N)]
            ck = -sum((Mk[i][i] for i in range(N)), mpq(0)) / k
            coeffs.append(ck)
        return coeffs


def mult_matrix(u: ExactPoly, E: SpectralIdeal, engine: QuotientEngine | None = None,
                check_dimension: bool = False) -> MultMatrix:
    if check_dimension:
        from .polycore import quotient_dimension

        if quotient_dimension(E.groebner()) != math.factorial(E.n):
            raise ValueError("ideal is degenerate: quotient dimension differs from n!")
    eng = engine or QuotientEngine(E)
    basis = eng.basis
    idx = {b: i for i, b in enumerate(basis)}
    N = len(basis)
    cols = [eng.column(u, b) for b in basis]
    entries = [[mpq(0)] * N for _ in range(N)]
    for j, col in enumerate(cols):
        for m, c in col.items():
            entries[idx[m]][j] = c
    return MultMatrix(u, E, tuple(basis), tuple(tuple(r) for r in entries))


def hc_obstruction(E: SpectralIdeal, J: Iterable[int], engine: QuotientEngine | None = None) -> mpq:
    """Trace of multiplication by v^J on P/E (the T = 1 value of R^{v^J})."""
    J = set(J)
    if not J:
        raise ValueError("J must be nonempty")
    u = ExactPoly.square_free(E.n, J)
    return (engine or QuotientEngine(E)).trace(u)


@dataclass(frozen=True)
class LambdaKey:
    n: int
    m: int
    k: int
    j: int

    def __post_init__(self):
        n, m, k, j = self.n, self.m, self.k, self.j
        if not (m >= 1 and m <= n and 0 <= k <= n - m and 0 <= j <= min(k, m)):
            raise ValueError(f"invalid lambda indices n={n} m={m} k={k} j={j}")


def lambda_closed_form(n: int, m: int, k: int, j: int) -> mpq:
    LambdaKey(n, m, k, j)
    f = math.factorial
    return mpq(m * (-1) ** (j + 1) * f(m + k - j - 1) * f(n - m - k + j))


def lambda_ideal(n: int, m: int, J: Iterable[int]) -> SpectralIdeal:
    """(e_1, .., e_{m+k} + v^J, .., e_n) with k = |J|."""
    J = set(J)
    k = len(J)
    if m < 1 or m + k > n:
        raise ValueError("need 1 <= m and m + |J| <= n")
    gs = [ExactPoly.zero(n) for _ in range(n)]
    gs[m + k - 1] = ExactPoly.square_free(n, J)
    return SpectralIdeal(n, tuple(gs))


def lambda_via_trace(n: int, m: int, k: int, J: Iterable[int]) -> mpq:
    """Trace of multiplication by v_1..v_m on the single-cell ideal; equals lambda_{k,|J cap [m]|}."""
    J = set(J)
    if len(J) != k or any(not 0 <= x < n for x in J):
        raise ValueError("J must be a k-subset of range(n)")
    E = lambda_ideal(n, m, J)
    return QuotientEngine(E).trace(ExactPoly.square_free(n, range(m)))


def lambda_rows(n: int, with_trace: bool = True):
    """Rows (n, m, k, j, closed_form, trace_value) for every valid index."""
    for m in range(1, n + 1):
        for k in range(0, n - m + 1):
            for j in range(0, min(k, m) + 1):
                if k - j > n - m:
                    continue
                closed = lambda_closed_form(n, m, k, j)
                tr = None
                if with_trace:
                    J = list(range(j)) + list(range(m, m + k - j))
                    tr = lambda_via_trace(n, m, k, J)
                yield n, m, k, j, closed, tr


def top_obstruction_value(A, m: int) -> mpq:
    """m!(n-m)! * sum of all m x m principal minors - n! * det(A_[m])."""
    A = as_matrix(A)
    n = A.n
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    minors = all_principal_minors(A)
    total = sum((v for mask, v in minors.items() if bin(mask).count("1") == m), mpq(0))
    f = math.factorial
    return f(m) * f(n - m) * total - f(n) * minors[(1 << m) - 1]
