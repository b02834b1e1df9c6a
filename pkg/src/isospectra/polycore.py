"""Exact multivariate polynomial arithmetic over Q and a Buchberger engine.

Polynomials are sparse maps from exponent tuples to ``gmpy2.mpq``
coefficients.  Variables are indexed from 0 in code and printed as
``v1 .. vn``.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
import operator
import time
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

from .errors import NotZeroDimensionalError, ResourceLimitError

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]

__all__ = [
    "ExactPoly",
    "GroebnerBasis",
    "GroebnerConfig",
    "MonomialOrder",
    "buchberger",
    "complete_homogeneous",
    "elementary_symmetric",
    "normal_form",
    "quotient_dimension",
    "standard_monomials",
    "to_rational",
    "vanishes_only_at_origin",
]


def to_rational(x) -> mpq:
    """Convert ints, Fractions, mpq and literal strings ("3", "-2/5", "0.25") to mpq."""
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, float):
        # decimal literal semantics, not binary expansion
        return mpq(Fraction(repr(x)))
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    return mpq(x)


def _madd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


def _msub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.sub, a, b))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(map(operator.le, a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


class MonomialOrder(Enum):
    """Monomial orders.  ``key`` is increasing in the order."""

    LEX = "lex"  # lexicographic with v1 < v2 < ... < vn
    GREVLEX = "grevlex"  # graded reverse lex, v1 > v2 > ... > vn
    GRLEX = "grlex"  # graded lex, v1 > v2 > ... > vn

    def key(self, m: Monomial) -> tuple:
        if self is MonomialOrder.LEX:
            return m[::-1]
        if self is MonomialOrder.GREVLEX:
            return (sum(m),) + tuple(-e for e in reversed(m))
        return (sum(m),) + m

    def rkey(self, m: Monomial) -> tuple:
        """Key that is *decreasing* in the order (for min-heaps and ascending sorts)."""
        return tuple(-x for x in self.key(m))


class ExactPoly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients.

    Treated as immutable; arithmetic always returns new objects.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[Monomial, mpq] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = to_rational(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, mpq]) -> ExactPoly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> ExactPoly:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c=1) -> ExactPoly:
        c = to_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> ExactPoly:
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range")
        mono = tuple(1 if k == i else 0 for k in range(nvars))
        return cls._raw(nvars, {mono: mpq(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> ExactPoly:
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def square_free(cls, nvars: int, subset: Iterable[int], coeff=1) -> ExactPoly:
        s = set(subset)
        return cls(nvars, {tuple(1 if k in s else 0 for k in range(nvars)): coeff})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, mpq]]:
        return iter(self.terms.items())

    def coeff(self, mono: Sequence[int]) -> mpq:
        return self.terms.get(tuple(mono), mpq(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def homogeneous_part(self, d: int) -> ExactPoly:
        return ExactPoly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def is_square_free(self) -> bool:
        return all(e <= 1 for m in self.terms for e in m)

    def leading_term(self, order: MonomialOrder) -> tuple[Monomial, mpq]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder) -> ExactPoly:
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term(order)[1])

    # arithmetic
    def _coerce(self, other) -> ExactPoly:
        if isinstance(other, ExactPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return ExactPoly.constant(self.nvars, other)

    def __add__(self, other) -> ExactPoly:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return ExactPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> ExactPoly:
        return ExactPoly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> ExactPoly:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> ExactPoly:
        return (-self) + other

    def scale(self, c) -> ExactPoly:
        c = to_rational(c)
        if not c:
            return ExactPoly.zero(self.nvars)
        return ExactPoly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> ExactPoly:
        if not isinstance(other, ExactPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")
        out: dict[Monomial, mpq] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _madd(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return ExactPoly._raw(self.nvars, out)

    __rmul__ = __mul__

    def mul_monomial(self, mono: Monomial, c=1) -> ExactPoly:
        c = to_rational(c)
        if not c:
            return ExactPoly.zero(self.nvars)
        return ExactPoly._raw(self.nvars, {_madd(m, mono): v * c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> ExactPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = ExactPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self.terms == ExactPoly.constant(self.nvars, other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # transformations
    def evaluate(self, point: Sequence):
        """Evaluate at a point; works for rationals, floats and complex numbers."""
        if len(point) != self.nvars:
            raise ValueError("point has the wrong dimension")
        total = 0
        for m, c in self.terms.items():
            term = c if isinstance(point[0], mpq) else _to_number(c)
            for x, e in zip(point, m):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def partial(self, i: int) -> ExactPoly:
        out: dict[Monomial, mpq] = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = m[:i] + (m[i] - 1,) + m[i + 1 :]
                out[mm] = c * m[i]
        return ExactPoly._raw(self.nvars, out)

    def permute(self, perm: Sequence[int]) -> ExactPoly:
        """Apply the substitution v_k -> v_perm[k]."""
        out = {}
        for m, c in self.terms.items():
            mm = [0] * self.nvars
            for k, e in enumerate(m):
                mm[perm[k]] = e
            out[tuple(mm)] = c
        return ExactPoly._raw(self.nvars, out)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogenize(self) -> ExactPoly:
        """Homogenization with a new last variable."""
        D = self.total_degree()
        return ExactPoly._raw(self.nvars + 1, {m + (D - sum(m),): c for m, c in self.terms.items()})

    def dehomogenize(self) -> ExactPoly:
        """Set the last variable to 1."""
        out: dict[Monomial, mpq] = {}
        for m, c in self.terms.items():
            k = m[:-1]
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ExactPoly._raw(self.nvars - 1, out)

    def embed(self, nvars: int) -> ExactPoly:
        """View a polynomial in the first variables of a bigger ring."""
        if nvars < self.nvars:
            raise ValueError("cannot embed into a smaller ring")
        pad = (0,) * (nvars - self.nvars)
        return ExactPoly._raw(nvars, {m + pad: c for m, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder = None) -> list[tuple[Monomial, mpq]]:
        order = order or MonomialOrder.GREVLEX
        return sorted(self.terms.items(), key=lambda t: order.rkey(t[0]))

    def __repr__(self) -> str:
        return f"ExactPoly({self.nvars}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(MonomialOrder.GRLEX):
            mono = "*".join(
                f"v{k + 1}" if e == 1 else f"v{k + 1}^{e}" for k, e in enumerate(m) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _to_number(c: mpq):
    return int(c) if c.denominator == 1 else float(c)


def elementary_symmetric(n: int, i: int) -> ExactPoly:
    """e_i(v_1, ..., v_n); e_0 = 1."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    terms = {}
    for subset in itertools.combinations(range(n), i):
        s = set(subset)
        terms[tuple(1 if k in s else 0 for k in range(n))] = mpq(1)
    return ExactPoly._raw(n, terms)


def complete_homogeneous(i: int, j: int, n: int) -> ExactPoly:
    """H_i(v_1, ..., v_j) as a polynomial in n variables."""
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got j={j}, n={n}")
    if i < 0:
        raise ValueError("degree must be non-negative")
    terms = {}
    if j == 0:
        return ExactPoly.constant(n, 1) if i == 0 else ExactPoly.zero(n)
    for combo in itertools.combinations_with_replacement(range(j), i):
        m = [0] * n
        for k in combo:
            m[k] += 1
        terms[tuple(m)] = mpq(1)
    return ExactPoly._raw(n, terms)


# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroebnerConfig:
    max_reductions: int = 20_000
    max_seconds: float | None = None
    # run inhomogeneous grevlex inputs through their homogenization; this
    # avoids the coefficient blow-up of affine Buchberger runs
    homogenize: bool = True


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[ExactPoly, ...]
    order: MonomialOrder
    nvars: int
    reduced: bool = True

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_term(self.order)[0] for g in self.generators]

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials())

    def normal_form(self, p: ExactPoly) -> ExactPoly:
        return normal_form(p, self)

    def contains(self, p: ExactPoly) -> bool:
        return normal_form(p, self).is_zero()

    def __len__(self) -> int:
        return len(self.generators)


class _Reducer:
    """Division by a list of monic polynomials, with cached order keys."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self._rk: dict[Monomial, tuple] = {}

    def rk(self, m: Monomial) -> tuple:
        k = self._rk.get(m)
        if k is None:
            k = self._rk[m] = self.order.rkey(m)
        return k

    def lead(self, p: dict[Monomial, mpq]) -> Monomial:
        return min(p, key=self.rk)

    def reduce(
        self,
        p: dict[Monomial, mpq],
        basis: Sequence[tuple[Monomial, list[tuple[Monomial, mpq]]]],
        full: bool = True,
    ) -> dict[Monomial, mpq]:
        """Remainder of p on division by monic ``basis`` given as (lm, tail) pairs."""
        p = dict(p)
        heap = [(self.rk(m), m) for m in p]
        heapq.heapify(heap)
        rem: dict[Monomial, mpq] = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = p.get(m)
            if c is None:
                continue
            for lm, tail in basis:
                if _divides(lm, m):
                    q = _msub(m, lm)
                    for tm, tc in tail:
                        mm = _madd(q, tm)
                        old = p.get(mm)
                        if old is None:
                            p[mm] = -c * tc
                            heapq.heappush(heap, (self.rk(mm), mm))
                        else:
                            s = old - c * tc
                            if s:
                                p[mm] = s
                            else:
                                del p[mm]
                    del p[m]
                    break
            else:
                if not full:
                    return p
                rem[m] = c
                del p[m]
        return rem


def _as_basis_entry(p: dict[Monomial, mpq], red: _Reducer):
    lm = red.lead(p)
    lc = p[lm]
    tail = [(m, c / lc) for m, c in p.items() if m != lm]
    return lm, tail


def buchberger(
    gens: Sequence[ExactPoly],
    order: MonomialOrder = MonomialOrder.GREVLEX,
    config: GroebnerConfig | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis via Buchberger with Gebauer-Moeller pair
    pruning and normal selection by sugar degree.

    Raises ResourceLimitError when ``config`` budgets run out.
    """
    config = config or GroebnerConfig()
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise ValueError("all generators must live in the same ring")
    if (
        config.homogenize
        and order is MonomialOrder.GREVLEX
        and not all(g.is_homogeneous() for g in gens)
    ):
        return _buchberger_via_homogenization(gens, config)
    red = _Reducer(order)
    start = time.monotonic()

    polys: list[tuple[Monomial, list[tuple[Monomial, mpq]]]] = []
    sugar: list[int] = []
    active: list[int] = []
    pairs: list[tuple[int, int, Monomial, int]] = []  # (i, j, lcm, sugar)

    def pair_sugar(i: int, j: int, lcm: Monomial) -> int:
        d = sum(lcm)
        return max(sugar[i] + d - sum(polys[i][0]), sugar[j] + d - sum(polys[j][0]))

    def update(h: int) -> None:
        nonlocal active, pairs
        lmh = polys[h][0]
        cands = list(active)
        kept: list[int] = []
        while cands:
            g1 = cands.pop()
            l1 = _lcm(lmh, polys[g1][0])
            if _coprime(lmh, polys[g1][0]) or not any(
                _divides(_lcm(lmh, polys[g2][0]), l1) for g2 in itertools.chain(cands, kept)
            ):
                kept.append(g1)
        new_pairs = [
            (g, h, _lcm(polys[g][0], lmh), 0)
            for g in kept
            if not _coprime(lmh, polys[g][0])
        ]
        filtered = []
        for i, j, l, s in pairs:
            if (
                _divides(lmh, l)
                and _lcm(polys[i][0], lmh) != l
                and _lcm(lmh, polys[j][0]) != l
            ):
                continue
            filtered.append((i, j, l, s))
        filtered.extend((i, j, l, pair_sugar(i, j, l)) for i, j, l, _ in new_pairs)
        pairs = filtered
        active = [g for g in active if not _divides(lmh, polys[g][0])] + [h]

    def add(p: dict[Monomial, mpq], s: int) -> None:
        polys.append(_as_basis_entry(p, red))
        sugar.append(s)
        h = len(polys) - 1
        update(h)
        # keep the active tails reduced by the new element; without this the
        # coefficients of later remainders grow exponentially
        lmh, tail_h = polys[h]
        for a in active:
            if a == h:
                continue
            lm, tail = polys[a]
            if any(_divides(lmh, m) for m, _ in tail):
                rem = red.reduce(dict(tail), [(lmh, tail_h)])
                polys[a] = (lm, list(rem.items()))

    for g in sorted(gens, key=lambda g: red.rk(g.leading_term(order)[0]), reverse=True):
        add(dict(g.terms), g.total_degree())

    steps = 0
    while pairs:
        steps += 1
        if steps > config.max_reductions:
            raise ResourceLimitError(f"Buchberger exceeded {config.max_reductions} pair reductions")
        if config.max_seconds is not None and time.monotonic() - start > config.max_seconds:
            raise ResourceLimitError(f"Buchberger exceeded {config.max_seconds} s")
        best = min(range(len(pairs)), key=lambda k: (pairs[k][3], order.key(pairs[k][2])))
        i, j, l, s = pairs.pop(best)
        spoly: dict[Monomial, mpq] = {}
        for idx, sign in ((i, 1), (j, -1)):
            lm, tail = polys[idx]
            q = _msub(l, lm)
            for tm, tc in tail:
                mm = _madd(q, tm)
                v = spoly.get(mm, 0) + sign * tc
                if v:
                    spoly[mm] = v
                else:
                    spoly.pop(mm, None)
        basis = [polys[a] for a in active]
        h = red.reduce(spoly, basis)
        if h:
            add(h, s)

    log.debug("buchberger: %d pair reductions, %d active", steps, len(active))
    return _reduce_basis([polys[a] for a in active], order, nvars, red)


def _buchberger_via_homogenization(gens: Sequence[ExactPoly], config: GroebnerConfig) -> GroebnerBasis:
    """Grevlex basis of (gens) from a basis of the homogenized generators.

    With the homogenizing variable last (smallest), setting it to 1 in a
    grevlex basis of (f^h) gives a grevlex basis of (f), since h divides the
    leading term of a homogeneous g only when it divides all of g.
    """
    n = gens[0].nvars
    start = time.monotonic()
    homog = [g.homogenize() for g in gens]
    gb = buchberger(homog, MonomialOrder.GREVLEX, replace(config, homogenize=False))
    dehom = [g.dehomogenize() for g in gb.generators]
    left = None
    if config.max_seconds is not None:
        left = max(0.0, config.max_seconds - (time.monotonic() - start))
    return buchberger(dehom, MonomialOrder.GREVLEX, replace(config, homogenize=False, max_seconds=left))


def _reduce_basis(entries, order: MonomialOrder, nvars: int, red: _Reducer) -> GroebnerBasis:
    # minimalize
    entries = sorted(entries, key=lambda e: red.rk(e[0]), reverse=True)
    minimal = []
    for k, (lm, tail) in enumerate(entries):
        if any(_divides(lm2, lm) for lm2, _ in minimal):
            continue
        if any(_divides(lm2, lm) and lm2 != lm for lm2, _ in entries[k + 1 :]):
            continue
        minimal.append((lm, tail))
    out = []
    for k, (lm, tail) in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        rem = red.reduce(dict(tail), others)
        rem[lm] = mpq(1)
        out.append(ExactPoly._raw(nvars, rem))
    out.sort(key=lambda g: red.rk(g.leading_term(order)[0]), reverse=True)
    return GroebnerBasis(tuple(out), order, nvars, True)


def normal_form(p: ExactPoly, gb: GroebnerBasis) -> ExactPoly:
    """Remainder of multivariate division of p by gb (unique when gb is reduced)."""
    if p.nvars != gb.nvars:
        raise ValueError("polynomial and basis live in different rings")
    red = _Reducer(gb.order)
    basis = [_as_basis_entry(dict(g.terms), red) for g in gb.generators]
    return ExactPoly._raw(p.nvars, red.reduce(dict(p.terms), basis))


def _staircase_bounds(gb: GroebnerBasis) -> list[int] | None:
    bounds = [None] * gb.nvars
    for lm in gb.leading_monomials():
        support = [k for k, e in enumerate(lm) if e]
        if len(support) == 1:
            k = support[0]
            if bounds[k] is None or lm[k] < bounds[k]:
                bounds[k] = lm[k]
        elif not support:
            return [0] * gb.nvars
    if any(b is None for b in bounds):
        return None
    return bounds


def standard_monomials(gb: GroebnerBasis) -> list[Monomial]:
    """Monomials outside the initial ideal; raises NotZeroDimensionalError if infinitely many."""
    bounds = _staircase_bounds(gb)
    if bounds is None:
        raise NotZeroDimensionalError("quotient is infinite-dimensional")
    lms = gb.leading_monomials()
    if any(sum(m) == 0 for m in lms):
        return []
    out: list[Monomial] = []
    n = gb.nvars

    def rec(prefix: list[int]) -> None:
        k = len(prefix)
        if k == n:
            out.append(tuple(prefix))
            return
        for e in range(bounds[k]):
            cand = prefix + [e] + [0] * (n - k - 1)
            if any(_divides(lm, tuple(cand)) for lm in lms):
                break
            rec(prefix + [e])

    rec([])
    return out


def quotient_dimension(gb: GroebnerBasis) -> int | float:
    """dim_Q of P/I, or ``math.inf`` when the staircase is unbounded."""
    if _staircase_bounds(gb) is None:
        return math.inf
    return len(standard_monomials(gb))


def vanishes_only_at_origin(gb: GroebnerBasis) -> bool:
    """True iff the complex variety of the ideal is exactly {0}.

    Checked as nilpotency of every variable modulo the ideal.  Ideals with
    an infinite-dimensional quotient have a positive-dimensional variety
    and the unit ideal has an empty one; both give False.
    """
    dim = quotient_dimension(gb)
    if dim == math.inf or dim == 0:
        return False
    n = gb.nvars
    red = _Reducer(gb.order)
    basis = [_as_basis_entry(dict(g.terms), red) for g in gb.generators]
    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n))
        r: dict[Monomial, mpq] = {(0,) * n: mpq(1)}
        for _ in range(dim):
            r = red.reduce({_madd(m, e): c for m, c in r.items()}, basis)
            if not r:
                break
        if r:
            return False
    return True
