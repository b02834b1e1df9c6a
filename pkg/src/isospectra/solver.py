"""Witness search for isospectral diagonal shifts and exact rigidity certificates.

A witness is a nonzero complex vector ``D`` with ``A + diag(D)`` isospectral
to ``A``.  Two search modes are provided: damped Newton from random starts,
and a total-degree homotopy tracking all Bezout paths.  Every returned
witness is re-checked on characteristic-polynomial coefficients computed
from principal minors of ``A + diag(D)``, independently of the invariant
polynomials used during the search.
"""

from __future__ import annotations

import cmath
import itertools
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .errors import ResourceLimitError
from .invariants import SpectralIdeal, spectral_invariants
from .minors import RationalMatrix, all_principal_minors, as_matrix, has_symmetrized_principal_minors
from .polycore import ExactPoly, GroebnerConfig, quotient_dimension, vanishes_only_at_origin

log = logging.getLogger(__name__)

MODES = ("newton-multistart", "total-degree-homotopy")


@dataclass(frozen=True)
class SolveConfig:
    residual_tol: float = 1e-10
    zero_threshold: float = 1e-6
    max_restarts: int | None = None  # default 200 * n!
    newton_max_iter: int = 100
    seed: int = 0
    mode: str = "newton-multistart"
    real: bool = False  # restrict the search to real shifts
    workers: int = 1
    polish: bool = False  # extended-precision Newton pass on the witness
    polish_dps: int = 60

    def __post_init__(self):
        if self.residual_tol <= 0 or self.zero_threshold <= 0:
            raise ValueError("tolerances must be positive")
        if self.zero_threshold <= self.residual_tol:
            raise ValueError("zero_threshold must exceed residual_tol")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    def restarts_for(self, n: int) -> int:
        return self.max_restarts if self.max_restarts is not None else 200 * math.factorial(n)


@dataclass(frozen=True)
class Witness:
    D: np.ndarray
    residual: float
    method: str
    certified_nonzero: bool
    seed: int = 0
    restarts: int = 0

    def to_json(self) -> dict:
        return {
            "D": [{"re": float(z.real), "im": float(z.imag)} for z in self.D],
            "residual": float(self.residual),
            "seed": int(self.seed),
            "mode": self.method,
        }

    @classmethod
    def from_json(cls, data: dict, zero_threshold: float = 1e-6) -> Witness:
        D = np.array([complex(d["re"], d["im"]) for d in data["D"]])
        return cls(
            D,
            float(data["residual"]),
            str(data["mode"]),
            bool(np.max(np.abs(D), initial=0.0) > zero_threshold),
            int(data.get("seed", 0)),
        )


# ---------------------------------------------------------------------------
# numeric polynomial systems
# ---------------------------------------------------------------------------


class PolySystem:
    """Numeric evaluator for a square list of polynomials in n variables."""

    def __init__(self, polys: Sequence[ExactPoly]):
        self.polys = list(polys)
        self.n = polys[0].nvars
        self.degrees = [p.total_degree() for p in polys]
        self._square_free = all(p.is_square_free() for p in polys)
        if self._square_free:
            n = self.n
            self._C = np.zeros((len(polys), 1 << n), dtype=complex)
            for i, p in enumerate(polys):
                for m, c in p.terms.items():
                    mask = sum(1 << k for k, e in enumerate(m) if e)
                    self._C[i, mask] = complex(c)
            masks = np.arange(1 << n)
            self._with = [masks[(masks >> j) & 1 == 1] for j in range(n)]
        else:
            self._compiled = [self._compile(p) for p in polys]
            self._dcompiled = [[self._compile(p.partial(j)) for j in range(self.n)] for p in polys]

    @classmethod
    def from_ideal(cls, E: SpectralIdeal) -> PolySystem:
        return cls(E.generators)

    @staticmethod
    def _compile(p: ExactPoly):
        if not p.terms:
            return np.zeros((0, p.nvars), dtype=int), np.zeros(0, dtype=complex)
        exps = np.array(list(p.terms.keys()), dtype=int).reshape(len(p.terms), p.nvars)
        coeffs = np.array([complex(c) for c in p.terms.values()])
        return exps, coeffs

    @staticmethod
    def _eval_compiled(comp, x):
        exps, coeffs = comp
        if not len(coeffs):
            return 0j
        return coeffs @ np.prod(x[None, :] ** exps, axis=1)

    def _subset_products(self, x: np.ndarray) -> np.ndarray:
        n = self.n
        val = np.ones(1 << n, dtype=complex)
        for j in range(n):
            step = 1 << j
            val[step : 2 * step] = val[:step] * x[j]
        return val

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if self._square_free:
            return self._C @ self._subset_products(x)
        return np.array([self._eval_compiled(c, x) for c in self._compiled])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        n = self.n
        if self._square_free:
            val = self._subset_products(x)
            Jm = np.empty((len(self.polys), n), dtype=complex)
            for j in range(n):
                idx = self._with[j]
                Jm[:, j] = self._C[:, idx] @ val[idx ^ (1 << j)]
            return Jm
        return np.array([[self._eval_compiled(c, x) for c in row] for row in self._dcompiled])


def evaluate_system(E: SpectralIdeal, D) -> np.ndarray:
    """(S_1(D), ..., S_n(D))."""
    D = np.asarray(D, dtype=complex)
    if D.shape != (E.n,):
        raise ValueError("dimension mismatch")
    return PolySystem.from_ideal(E).evaluate(D)


def jacobian(E: SpectralIdeal, D) -> np.ndarray:
    """Matrix of partials dS_i/dv_j at D."""
    D = np.asarray(D, dtype=complex)
    if D.shape != (E.n,):
        raise ValueError("dimension mismatch")
    return PolySystem.from_ideal(E).jacobian(D)


def charpoly_coefficients(M: np.ndarray) -> np.ndarray:
    """C_0..C_n with det(M - x I) = sum C_i (-x)^(n-i); C_i is the sum of i x i principal minors."""
    n = M.shape[0]
    C = np.zeros(n + 1, dtype=complex)
    C[0] = 1.0
    for mask in range(1, 1 << n):
        idx = [k for k in range(n) if (mask >> k) & 1]
        C[len(idx)] += np.linalg.det(M[np.ix_(idx, idx)])
    return C


def verify_witness(A, D) -> float:
    """max_i |C_i(A + D) - C_i(A)| over characteristic-polynomial coefficients."""
    A = as_matrix(A)
    D = np.asarray(D, dtype=complex)
    if D.shape != (A.n,):
        raise ValueError("dimension mismatch")
    minors = all_principal_minors(A)
    base = np.zeros(A.n + 1, dtype=complex)
    for mask, val in minors.items():
        base[bin(mask).count("1")] += complex(val)
    shifted = charpoly_coefficients(A.to_complex() + np.diag(D))
    return float(np.max(np.abs(shifted - base)))


# ---------------------------------------------------------------------------
# Newton
# ---------------------------------------------------------------------------


def newton(system: PolySystem, x0: np.ndarray, max_iter: int = 100, tol: float = 1e-10):
    """Damped Newton iteration; returns (x, |F(x)|_inf, converged).

    Convergence means the *full* Newton step is below ``tol`` relative to
    |x|_inf.  Iterates crawling linearly into a multiple root (the origin
    is always one) never meet this and are reported as not converged.
    """
    x = np.array(x0, dtype=x0.dtype)
    F = system.evaluate(x)
    fn = float(np.max(np.abs(F)))
    real = np.isrealobj(x)
    for _ in range(max_iter):
        Jm, rhs = system.jacobian(x), -F
        if real:
            Jm, rhs = Jm.real, rhs.real
        try:
            dx = np.linalg.solve(Jm, rhs)
        except np.linalg.LinAlgError:
            return x, fn, False
        if not np.all(np.isfinite(dx)):
            return x, fn, False
        size = float(np.max(np.abs(x), initial=0.0))
        if float(np.max(np.abs(dx))) <= tol * size:
            return x + dx, float(np.max(np.abs(system.evaluate(x + dx)))), True
        t = 1.0
        for _ in range(30):
            xn = x + t * dx
            Fn = system.evaluate(xn)
            fnn = float(np.max(np.abs(Fn)))
            if fnn < fn or fnn == 0.0:
                break
            t *= 0.5
        else:
            return x, fn, False
        x, F, fn = xn, Fn, fnn
    return x, fn, False


def _newton_polish(system: PolySystem, x: np.ndarray, iters: int = 3) -> np.ndarray:
    for _ in range(iters):
        F = system.evaluate(x)
        try:
            dx = np.linalg.solve(system.jacobian(x), -F)
        except np.linalg.LinAlgError:
            break
        xn = x + dx
        if np.max(np.abs(system.evaluate(xn))) > np.max(np.abs(F)):
            break
        x = xn
    return x


def polish_high_precision(E: SpectralIdeal, D: np.ndarray, dps: int = 60, iters: int = 8) -> np.ndarray:
    """Newton in mpmath at ``dps`` digits with exact rational coefficients."""
    import mpmath

    with mpmath.workdps(dps):
        polys = E.generators
        parts = [[p.partial(j) for j in range(E.n)] for p in polys]

        def ev(p, x):
            total = mpmath.mpc(0)
            for m, c in p.terms.items():
                term = mpmath.mpf(int(c.numerator)) / int(c.denominator)
                for xi, e in zip(x, m):
                    if e:
                        term *= xi**e
                total += term
            return total

        x = [mpmath.mpc(complex(z)) for z in D]
        for _ in range(iters):
            F = mpmath.matrix([ev(p, x) for p in polys])
            Jm = mpmath.matrix([[ev(q, x) for q in row] for row in parts])
            dx = mpmath.lu_solve(Jm, -F)
            x = [xi + dx[i] for i, xi in enumerate(x)]
        return np.array([complex(z) for z in x])


# ---------------------------------------------------------------------------
# witness search
# ---------------------------------------------------------------------------


def _start_radius(A: RationalMatrix) -> float:
    M = A.to_complex()
    return max(1.0, float(np.linalg.norm(M, 2)))


def _one_start(system: PolySystem, rng: np.random.Generator, radius: float, cfg: SolveConfig):
    n = system.n
    if cfg.real:
        x0 = rng.uniform(-radius, radius, n)
    else:
        r = radius * rng.uniform(0, 1, n) ** (1 / 2)
        x0 = r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    x, fn, ok = newton(system, x0, cfg.newton_max_iter)
    return x, ok


def _accept(A, system, x, cfg: SolveConfig):
    if not np.all(np.isfinite(x)):
        return None
    if float(np.max(np.abs(x))) <= cfg.zero_threshold:
        return None
    x = _newton_polish(system, np.asarray(x, dtype=complex))
    res = verify_witness(A, x)
    if float(np.max(np.abs(x))) <= cfg.zero_threshold:
        return None
    return x, res


def _finalize(A, E, x, res, cfg: SolveConfig, method: str, restarts: int):
    if cfg.polish:
        x = polish_high_precision(E, x, cfg.polish_dps)
        res = verify_witness(A, x)
    if res > cfg.residual_tol:
        return None
    return Witness(x, res, method, bool(np.max(np.abs(x)) > cfg.zero_threshold), cfg.seed, restarts)


def _multistart(A: RationalMatrix, E: SpectralIdeal, cfg: SolveConfig) -> Witness | None:
    system = PolySystem.from_ideal(E)
    radius = 2.0 * _start_radius(A)
    budget = cfg.restarts_for(A.n)
    seqs = np.random.SeedSequence(cfg.seed)
    batch = max(1, cfg.workers) * 8
    done = 0
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        while done < budget:
            size = min(batch, budget - done)
            children = seqs.spawn(size)
            rngs = [np.random.default_rng(s) for s in children]
            results = list(pool.map(lambda r: _one_start(system, r, radius, cfg), rngs))
            for offset, (x, ok) in enumerate(results):
                if not ok:
                    continue
                acc = _accept(A, system, x, cfg)
                if acc is None:
                    continue
                w = _finalize(A, E, acc[0], acc[1], cfg, "newton-multistart", done + offset + 1)
                if w is not None:
                    return w
            done += size
    log.info("newton multistart exhausted %d restarts", budget)
    return None


def track_total_degree(
    system: PolySystem,
    seed: int = 0,
    min_step: float = 1e-9,
    max_steps: int = 20_000,
    real_gamma: bool = False,
) -> list[np.ndarray]:
    """Track all prod(deg) paths of the gamma-trick homotopy
    (1 - t) * gamma * (x_i^{d_i} - c_i) + t * F(x) from t = 0 to 1.

    Returns endpoints of successfully tracked paths (diverged or stalled
    paths are logged and dropped).
    """
    rng = np.random.default_rng(seed)
    n = system.n
    d = system.degrees
    c = np.exp(2j * np.pi * rng.uniform(0, 1, n))
    gamma = np.exp(2j * np.pi * rng.uniform(0, 1))

    def G(x):
        return x**d - c

    def dG(x):
        return np.diag([di * xi ** (di - 1) for di, xi in zip(d, x)])

    def H(x, t):
        return (1 - t) * gamma * G(x) + t * system.evaluate(x)

    def Hx(x, t):
        return (1 - t) * gamma * dG(x) + t * system.jacobian(x)

    def Ht(x):
        return system.evaluate(x) - gamma * G(x)

    roots = [c[i] ** (1.0 / d[i]) * np.exp(2j * np.pi * np.arange(d[i]) / d[i]) for i in range(n)]
    ends = []
    for start in itertools.product(*roots):
        x = np.array(start, dtype=complex)
        t, dt = 0.0, 0.02
        steps = 0
        ok = True
        while t < 1.0:
            steps += 1
            if steps > max_steps or dt < min_step:
                ok = False
                break
            h = min(dt, 1.0 - t)
            try:
                v = np.linalg.solve(Hx(x, t), -Ht(x))
            except np.linalg.LinAlgError:
                dt *= 0.5
                continue
            xp = x + h * v
            tn = t + h
            converged = False
            for _ in range(4):
                try:
                    dx = np.linalg.solve(Hx(xp, tn), -H(xp, tn))
                except np.linalg.LinAlgError:
                    break
                xp = xp + dx
                if np.max(np.abs(dx)) <= 1e-9 * (1 + np.max(np.abs(xp))):
                    converged = True
                    break
            if converged and np.all(np.isfinite(xp)):
                x, t = xp, tn
                dt = min(0.1, dt * 1.6)
            else:
                dt *= 0.5
        if ok and np.all(np.isfinite(x)):
            ends.append(x)
        else:
            log.debug("path from %s did not reach t=1", start)
    return ends


def _homotopy(A: RationalMatrix, E: SpectralIdeal, cfg: SolveConfig) -> Witness | None:
    system = PolySystem.from_ideal(E)
    ends = track_total_degree(system, cfg.seed)
    best = None
    for k, x in enumerate(ends):
        x, _, _ = newton(system, x, cfg.newton_max_iter)
        acc = _accept(A, system, x, cfg)
        if acc is None:
            continue
        if best is None or acc[1] < best[1]:
            best = (acc[0], acc[1], k + 1)
        if acc[1] <= cfg.residual_tol:
            break
    if best is None:
        return None
    return _finalize(A, E, best[0], best[1], cfg, "total-degree-homotopy", best[2])


def find_nonzero_witness(A, cfg: SolveConfig | None = None) -> Witness | None:
    """Search for D != 0 with A + diag(D) isospectral to A; None if the budget runs out."""
    cfg = cfg or SolveConfig()
    A = as_matrix(A)
    E = spectral_invariants(A)
    if cfg.mode == "total-degree-homotopy":
        return _homotopy(A, E, cfg)
    return _multistart(A, E, cfg)


def witness_family(A, count: int, cfg: SolveConfig | None = None, cluster_tol: float = 1e-6) -> list[np.ndarray]:
    """Distinct nonzero witnesses collected from ``count`` Newton restarts."""
    cfg = cfg or SolveConfig()
    A = as_matrix(A)
    system = PolySystem.from_ideal(spectral_invariants(A))
    radius = 2.0 * _start_radius(A)
    rng = np.random.default_rng(cfg.seed)
    found: list[np.ndarray] = []
    for _ in range(count):
        x, ok = _one_start(system, rng, radius, cfg)
        if not ok:
            continue
        acc = _accept(A, system, x, cfg)
        if acc is None or acc[1] > cfg.residual_tol:
            continue
        if all(np.max(np.abs(acc[0] - y)) > cluster_tol for y in found):
            found.append(acc[0])
    return found


# ---------------------------------------------------------------------------
# exact certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RigidityCertificate:
    """Exact rigidity verdict.  ``rigid`` is None when the Groebner budget ran out."""

    rigid: bool | None
    symmetrized_minors: bool
    quotient_dimension: int | float | None
    groebner_size: int | None
    status: str  # "rigid", "not-rigid", "inconclusive"

    @property
    def agrees(self) -> bool:
        return self.rigid is None or self.rigid == self.symmetrized_minors

    def __bool__(self) -> bool:
        return bool(self.rigid)


def certify_rigid(A, config: GroebnerConfig | None = None) -> RigidityCertificate:
    """Exact check that the ideal of spectral invariants vanishes only at 0."""
    A = as_matrix(A)
    sym = bool(has_symmetrized_principal_minors(A))
    try:
        gb = spectral_invariants(A).groebner(config=config)
    except ResourceLimitError:
        return RigidityCertificate(None, sym, None, None, "inconclusive")
    dim = quotient_dimension(gb)
    rigid = vanishes_only_at_origin(gb)
    return RigidityCertificate(rigid, sym, dim, len(gb), "rigid" if rigid else "not-rigid")


def seed_from_env(default: int = 0) -> int:
    val = os.environ.get("ISOSPECTRA_SEED")
    return int(val) if val not in (None, "") else default
