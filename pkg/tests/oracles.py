"""Independent reference computations used by the tests.

Nothing here imports from ``fracrisk``: each value is computed from first
principles with ``math`` so a bug in the package cannot hide in its oracle.
"""
from __future__ import annotations

import math

# hand-evaluated constants
LN2 = math.log(2.0)
S_HALF_UNIFORM2 = 0.83255          # 2 * 0.5 * sqrt(ln 2)
NS_HALF_UNIFORM2 = 0.97058         # 0.83255 / (2 * 0.5**0.5 * e**-0.5)
TERM_MAX_HALF = 0.428882           # 0.5**0.5 * e**-0.5
NS_ONE_UNIFORM2 = 0.94208          # ln 2 / (2 / e)
NSH_90_10 = 0.46900                # -(0.9 ln 0.9 + 0.1 ln 0.1) / ln 2
U_TENTH = 0.095310                 # ln 1.1
EU_A1 = 0.048790                   # ln 1.05
EU_A2 = 0.047655                   # 0.5 ln 1.1
GRID_WIDTH = 0.021                 # (0.128 + 0.187) / 15

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500) -> float:
    """Argmax of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def entropy_term(p: float, q: float) -> float:
    return p * (-math.log(p)) ** q


def naive_fractional_entropy(probs, q: float) -> float:
    total = 0.0
    for p in probs:
        if 0.0 < p < 1.0:
            total += p * (-math.log(p)) ** q
    return total


def naive_shannon(probs) -> float:
    return -sum(p * math.log(p) for p in probs if p > 0.0)


def naive_ns(probs, q: float, n: int | None = None) -> float:
    n = sum(1 for p in probs if p > 0.0) if n is None else n
    bound = 1.0 if q == 0.0 else q**q * math.exp(-q)
    return naive_fractional_entropy(probs, q) / (n * bound)


def naive_utility(x: float) -> float:
    return math.log(1.0 + x) if x >= 0.0 else -math.log(1.0 - x)


def naive_eu(payoffs, probs) -> float:
    return sum(p * naive_utility(x) for x, p in zip(payoffs, probs))


def naive_var(payoffs, probs) -> float:
    mu = sum(p * x for x, p in zip(payoffs, probs))
    return sum(p * (x - mu) ** 2 for x, p in zip(payoffs, probs))


def naive_neu_fev(ctx, i: int, q: float, lam: float, n: int | None = None) -> float:
    """NEU-FEV total of the ``i``-th (payoffs, probs) pair in ``ctx``."""
    eus = [naive_eu(*a) for a in ctx]
    vs = [naive_var(*a) for a in ctx]
    m_eu, m_v = max(abs(e) for e in eus), max(vs)
    u = eus[i] / m_eu if m_eu else 0.0
    v = vs[i] / m_v if m_v else 0.0
    return lam / 2 * (naive_ns(ctx[i][1], q, n) + v) - (1 - lam) * u


def central_difference_grads(loss, params, eps: float = 1e-5):
    """Central finite-difference gradient of ``loss(params)`` for a list of float arrays.

    The default step sits near the roundoff/truncation optimum for central
    differences in float64 (about machine-epsilon ** (1/3)).
    """
    grads = []
    for w in params:
        g = [0.0] * w.size
        flat = w.reshape(-1)
        for i in range(w.size):
            orig = flat[i]
            flat[i] = orig + eps
            up = loss(params)
            flat[i] = orig - eps
            down = loss(params)
            flat[i] = orig
            g[i] = (up - down) / (2.0 * eps)
        grads.append(g)
    return grads


def max_relative_error(analytic, numeric, floor: float = 1e-8) -> float:
    worst = 0.0
    for a_arr, n_list in zip(analytic, numeric):
        for a, n in zip(a_arr.reshape(-1), n_list):
            worst = max(worst, abs(a - n) / max(abs(a) + abs(n), floor))
    return worst
