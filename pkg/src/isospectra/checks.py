"""End-to-end verification checks, shared by the acceptance tests and ``selftest``.

Each ``criterion_*`` function runs one check at the scale given by its
arguments and returns a :class:`CheckResult`.  Functions from the other
modules are looked up at call time, so a monkeypatched implementation is
what gets checked.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import coinvariant, floquet, invariants, minors, polycore, solver
from .polycore import ExactPoly, GroebnerConfig, MonomialOrder, elementary_symmetric


@dataclass
class CheckResult:
    criterion: int
    name: str
    status: str  # "pass", "fail" or "inconclusive"
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        return f"[{self.status.upper():12s}] criterion {self.criterion}: {self.name} ({self.seconds:.1f} s) {self.detail}"


def _timed(criterion: int, name: str):
    def wrap(fn):
        def run(*args, **kwargs):
            start = time.monotonic()
            try:
                status, detail, data = fn(*args, **kwargs)
            except Exception as exc:  # a crash is a failed check, reported not raised
                status, detail, data = "fail", f"{type(exc).__name__}: {exc}", {}
            return CheckResult(criterion, name, status, detail, time.monotonic() - start, data)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


# ---------------------------------------------------------------------------
# matrix families
# ---------------------------------------------------------------------------


def random_integer_matrix(n: int, rng: random.Random, lo: int = -5, hi: int = 5) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def symmetrized_family(n: int, count: int, rng: random.Random) -> list[list[list[int]]]:
    """Matrices whose k x k principal minors agree for each k: triangular with
    constant diagonal, c(J - I) + dI up to a diagonal sign conjugation, and
    scalar matrices."""
    out = []
    for idx in range(count):
        kind = idx % 3
        if kind == 0:
            c = rng.randint(-5, 5)
            A = [[c if i == j else (rng.randint(-5, 5) if i < j else 0) for j in range(n)] for i in range(n)]
            if rng.random() < 0.5:
                A = [list(r) for r in zip(*A)]
        elif kind == 1:
            c, d = rng.choice([x for x in range(-3, 4) if x]), rng.randint(-3, 3)
            s = [rng.choice((-1, 1)) for _ in range(n)]
            A = [[d if i == j else s[i] * s[j] * c for j in range(n)] for i in range(n)]
        else:
            c = rng.randint(-5, 5)
            A = [[c if i == j else 0 for j in range(n)] for i in range(n)]
        out.append(A)
    return out


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def rigidity_instances(sizes=(2, 3, 4), random_count: int = 50, constructed_count: int = 50, seed: int = 0):
    rng = random.Random(seed)
    inst = []
    for n in sizes:
        inst += [("random", n, random_integer_matrix(n, rng)) for _ in range(random_count)]
        inst += [("constructed", n, A) for A in symmetrized_family(n, constructed_count, rng)]
    return inst


@_timed(1, "exact rigidity agrees with the symmetrized-minor test")
def criterion_1(instances, budget: GroebnerConfig | None = None):
    bad, counts = [], {"rigid": 0, "not-rigid": 0}
    for kind, n, A in instances:
        cert = solver.certify_rigid(A, budget)
        sym = bool(minors.has_symmetrized_principal_minors(A))
        if cert.rigid is None or cert.rigid != sym:
            bad.append((kind, A, cert.status, sym))
        else:
            counts[cert.status] += 1
    status = "pass" if not bad else "fail"
    return status, f"{len(instances)} instances, {counts}, disagreements={bad[:3]}", {"counts": counts}


@_timed(2, "numeric witnesses for every non-rigid instance")
def criterion_2(instances, cfg: solver.SolveConfig | None = None):
    cfg = cfg or solver.SolveConfig()
    misses, worst, tried = [], 0.0, 0
    for kind, n, A in instances:
        if minors.has_symmetrized_principal_minors(A):
            continue
        tried += 1
        w = solver.find_nonzero_witness(A, cfg)
        if w is None or not np.max(np.abs(w.D)) > 1e-6 or w.residual > 1e-10:
            misses.append(A)
            continue
        worst = max(worst, solver.verify_witness(A, w.D))
    status = "pass" if not misses and worst <= 1e-10 else "fail"
    return status, f"{tried} non-rigid instances, worst residual {worst:.2e}, misses={misses[:3]}", {}


def example_ideals():
    n = 3
    v1, v2 = ExactPoly.variable(n, 0), ExactPoly.variable(n, 1)
    e = [elementary_symmetric(n, i) for i in (1, 2, 3)]
    return {
        "I_1": [e[0], e[1] - v1 - v2, e[2] + v1 * v2 - v1 - v2],
        "I_2": [e[0], e[1] + v1, e[2] + v1 * v1],
        "I_3": [e[0], e[1] - v2, e[2] + v1 * v1 + v1 * v2 + v2],
    }


@_timed(3, "perturbed ideals vanishing only at the origin")
def criterion_3():
    bad = []
    for name, gens in example_ideals().items():
        if not polycore.vanishes_only_at_origin(polycore.buchberger(gens)):
            bad.append(name)
        for drop in range(len(gens)):
            rest = gens[:drop] + gens[drop + 1 :]
            if polycore.vanishes_only_at_origin(polycore.buchberger(rest)):
                bad.append(f"{name} without generator {drop + 1}")
    return ("pass" if not bad else "fail"), f"failures={bad}", {}


def lambda_identity_failures(max_n: int = 8) -> list:
    """Recursion lambda_{k,j} = -lambda_{k-1,j-1} and the binomial sum identity."""
    bad = []
    for n in range(1, max_n + 1):
        for m in range(1, n + 1):
            for k in range(0, n - m + 1):
                for j in range(1, min(k, m) + 1):
                    if coinvariant.lambda_closed_form(n, m, k, j) != -coinvariant.lambda_closed_form(n, m, k - 1, j - 1):
                        bad.append(("recursion", n, m, k, j))
                if k >= 1:
                    total = sum(
                        coinvariant.lambda_closed_form(n, m, k, j) * comb(m, j) * comb(n - m, k - j)
                        for j in range(0, min(k, m) + 1)
                        if k - j <= n - m
                    )
                    if total != 0:
                        bad.append(("binomial-sum", n, m, k))
    return bad


@_timed(4, "closed-form lambda coefficients against traces")
def criterion_4(exhaustive_n: int = 4, n5_samples: int = 30, identity_n: int = 8, seed: int = 0):
    bad, rows = [], 0
    for n in range(1, exhaustive_n + 1):
        for m in range(1, n + 1):
            for k in range(0, n - m + 1):
                for J in itertools.combinations(range(n), k):
                    j = sum(1 for x in J if x < m)
                    rows += 1
                    if coinvariant.lambda_via_trace(n, m, k, J) != coinvariant.lambda_closed_form(n, m, k, j):
                        bad.append((n, m, k, J))
    rng = random.Random(seed)
    for _ in range(n5_samples):
        n = 5
        m = rng.randint(1, n)
        k = rng.randint(0, n - m)
        J = tuple(sorted(rng.sample(range(n), k)))
        j = sum(1 for x in J if x < m)
        rows += 1
        if coinvariant.lambda_via_trace(n, m, k, J) != coinvariant.lambda_closed_form(n, m, k, j):
            bad.append((n, m, k, J))
    ident = lambda_identity_failures(identity_n)
    status = "pass" if not bad and not ident else "fail"
    return status, f"{rows} trace rows, mismatches={bad[:3]}, identity failures={ident[:3]}", {}


@_timed(5, "coinvariant algebra has dimension n!")
def criterion_5(dim_n: int = 6, artin_n: int = 7):
    bad = []
    for n in range(1, dim_n + 1):
        gb = polycore.buchberger([elementary_symmetric(n, i) for i in range(1, n + 1)])
        if polycore.quotient_dimension(gb) != math.factorial(n):
            bad.append(("groebner", n))
    for n in range(1, artin_n + 1):
        if len(coinvariant.artin_monomials(n)) != math.factorial(n):
            bad.append(("artin", n))
    return ("pass" if not bad else "fail"), f"failures={bad}", {}


def _reduced(gens):
    return set(polycore.buchberger(gens).generators)


@_timed(6, "small one-dimensional periods give the expected rigid ideals")
def criterion_6():
    bad = []
    for q in (1, 2, 3):
        e = [elementary_symmetric(q, i) for i in range(1, q + 1)]
        expected = e if q < 3 else [e[0], e[1], e[2] - e[0]]
        system = floquet.spectral_invariant_system((q,))
        if _reduced(list(system.generators)) != _reduced(expected):
            bad.append(("ideal", q))
        if not polycore.vanishes_only_at_origin(system.groebner()):
            bad.append(("rigid", q))
    return ("pass" if not bad else "fail"), f"failures={bad}", {}


@_timed(7, "nonzero potentials isospectral to 0 for periods 4..7")
def criterion_7(qs=(4, 5, 6, 7), points: int = 32, cfg: solver.SolveConfig | None = None):
    rows, bad = [], []
    for q in qs:
        r = floquet.find_isospectral_potential((q,), cfg, points=points)
        ok = (
            r.verdict == "witness"
            and r.potential.max_abs() > 1e-6
            and r.deviation is not None
            and r.deviation <= 1e-8
            and r.residual <= 1e-8
        )
        rows.append((q, r.verdict, r.deviation, r.residual))
        if not ok:
            bad.append(q)
    detail = ", ".join(f"q={q}: {v} dev={d:.1e} res={s:.1e}" if d is not None else f"q={q}: {v}" for q, v, d, s in rows)
    return ("pass" if not bad else "fail"), detail, {}


@_timed(8, "rigidity for periods (3,2) and the sum-of-squares membership")
def criterion_8(qs=(4, 5, 6)):
    bad = []
    r = floquet.find_isospectral_potential((3, 2))
    if r.verdict != "rigid" or r.certificate.get("method") != "exact-groebner":
        bad.append(("rigid", r.verdict))
    for q in qs:
        system = floquet.spectral_invariant_system((q,))
        target = elementary_symmetric(q, 1) ** 2 - elementary_symmetric(q, 2).scale(2)
        via_gb = system.groebner().contains(target)
        via_artin = coinvariant.normal_form_mod_E(target, system.as_spectral_ideal()).is_zero()
        if not (via_gb and via_artin):
            bad.append(("membership", q, via_gb, via_artin))
    return ("pass" if not bad else "fail"), f"(3,2) -> {r.verdict}; failures={bad}", {}


def random_divisor_pairs(count: int, max_total: int = 12, seed: int = 0):
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        d = rng.randint(1, 3)
        P = [rng.randint(1, 6) for _ in range(d)]
        if math.prod(P) > max_total:
            continue
        Q = [rng.choice([x for x in range(1, p + 1) if p % x == 0]) for p in P]
        pairs.append((tuple(Q), tuple(P)))
    return pairs


@_timed(9, "finite-Fourier product formula and lifted witnesses")
def criterion_9(pairs: int = 10, points: int = 16, seed: int = 0):
    rng = np.random.default_rng(seed)
    worst, bad = 0.0, []
    for Q, P in random_divisor_pairs(pairs, seed=seed):
        n = math.prod(Q)
        V = floquet.Potential(Q, tuple(complex(x, y) for x, y in rng.normal(size=(n, 2))))
        dev = floquet.product_formula_deviation(V, P, points, seed)
        worst = max(worst, dev)
        if dev > 1e-9:
            bad.append((Q, P, dev))
    w = floquet.find_isospectral_potential((4,))
    lifted = {}
    for P in ((8,), (4, 2)):
        W = floquet.lift_potential(w.potential, P)
        dev = floquet.torus_deviation(W, floquet.Potential.zero(P))
        res = floquet.spectral_invariant_system(P).residual(W)
        lifted[P] = (dev, res)
        if dev > 1e-8 or res > 1e-8:
            bad.append(("lift", P, dev, res))
    return ("pass" if not bad else "fail"), f"worst product deviation {worst:.1e}, lifted {lifted}, failures={bad}", {}


@_timed(10, "quotient dimensions 51 and 12 for periods (3,2)")
def criterion_10(seconds: float = 1800.0, seed: int = 0, include_generic: bool = True):
    Q = floquet.Periods((3, 2))
    budget = GroebnerConfig(max_reductions=10**9, max_seconds=seconds)
    start = time.monotonic()
    dims = {}
    try:
        dims["zero"] = polycore.quotient_dimension(floquet.spectral_invariant_system(Q).groebner(config=budget))
        if include_generic:
            rng = random.Random(seed)
            ref = floquet.Potential(Q, tuple(rng.randint(-3, 3) for _ in range(Q.total)))
            left = max(1.0, seconds - (time.monotonic() - start))
            gb = floquet.spectral_invariant_system(Q, ref).groebner(
                config=GroebnerConfig(max_reductions=10**9, max_seconds=left)
            )
            dims["generic"] = polycore.quotient_dimension(gb)
    except polycore.ResourceLimitError as exc:
        return "inconclusive", f"budget exhausted after {dims}: {exc}", {"dims": dims}
    expected = {"zero": 51, "generic": 12} if include_generic else {"zero": 51}
    return ("pass" if dims == expected else "fail"), f"dimensions {dims}", {"dims": dims}
