"""Quadrature primitives for the double-contour kernel integrals.

Circles use the periodic trapezoid rule, which is spectrally accurate for
analytic integrands.  Lines carrying a Gaussian (exp(-u^2/2)) or exponential
(exp(-beta*u)) weight use Gauss rules built from the classical orthonormal
three-term recurrences: Sturm bisection on the recurrence brackets every
root, Newton iteration converges each node to 1e-15, and weights come from
the Christoffel sums evaluated with overflow-safe rescaling.  Node sums are
accumulated pairwise so rounding error grows like O(log N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import ExactMathError, as_fraction

MAX_LINE_NODES = 512
NEWTON_TOL = 1e-15
_STALL_TOL = 1e-11
# rescale recurrence state beyond this bound so squares stay representable;
# Newton ratios are scale invariant and the tracked log-scale keeps the
# Christoffel sums meaningful
_RESCALE_AT = 1e150
_RESCALE_BY = 2.0**-1024
_RESCALE_LOG = -1024.0 * math.log(2.0)


class ContourError(ExactMathError):
    """Invalid contour geometry or node configuration."""


class ConvergenceError(RuntimeError):
    """Iteration hit its cap; carries the best value seen."""

    def __init__(self, message: str, best, delta: float, nodes: int):
        super().__init__(message)
        self.best = best
        self.delta = delta
        self.nodes = nodes


@dataclass(frozen=True)
class ContourSpec:
    """A positively oriented circle (center, radius) or a vertical line
    Re s = abscissa, with a node count."""

    kind: str
    center: complex = 0j
    radius: float = 0.0
    nodes: int = 64

    def __post_init__(self) -> None:
        if self.kind not in ("circle", "vertical-line"):
            raise ContourError(f"unknown contour kind {self.kind!r}")
        if self.nodes < 1:
            raise ContourError("node count must be >= 1")
        if self.kind == "circle":
            if self.radius <= 0:
                raise ContourError(f"circle radius must be > 0, got {self.radius}")
            if self.nodes < 16 or self.nodes % 2:
                raise ContourError(
                    f"circle rules need an even node count >= 16, got {self.nodes}"
                )

    def with_nodes(self, n: int) -> "ContourSpec":
        return ContourSpec(self.kind, self.center, self.radius, n)


def pairwise_sum(values: Sequence[complex]) -> complex:
    """Tree summation; deterministic and O(log N) rounding growth."""
    n = len(values)
    if n == 0:
        return 0j
    if n == 1:
        return values[0]
    half = n // 2
    return pairwise_sum(values[:half]) + pairwise_sum(values[half:])


def circle_nodes(c: ContourSpec) -> list[complex]:
    if c.kind != "circle":
        raise ContourError("circle nodes requested for a non-circle contour")
    out = []
    for j in range(c.nodes):
        theta = 2.0 * math.pi * j / c.nodes
        out.append(c.center + c.radius * complex(math.cos(theta), math.sin(theta)))
    return out


def trapezoid_circle(f: Callable[[complex], complex], c: ContourSpec) -> complex:
    """Contour integral of f over the circle: with z_j on the circle,
    (2*pi*i/N) * sum_j (z_j - center) * f(z_j), the exact discretization of
    integral f(z) i (z - center) dtheta."""
    nodes = circle_nodes(c)
    terms = [(z - c.center) * f(z) for z in nodes]
    return (2j * math.pi / c.nodes) * pairwise_sum(terms)


def adaptive_double(
    f: Callable[[complex], complex],
    c: ContourSpec,
    tol: float,
    cap: int = 8192,
) -> tuple[complex, float, int]:
    """Double the node count until successive trapezoid values agree within
    tol.  Returns (value, delta, nodes); raises ConvergenceError carrying the
    best value if the cap is exceeded."""
    if c.kind != "circle":
        raise ContourError("adaptive doubling is defined for circle contours")
    n = c.nodes
    value = trapezoid_circle(f, c.with_nodes(n))
    best_delta = float("inf")
    while True:
        n2 = 2 * n
        if n2 > cap:
            raise ConvergenceError(
                f"no convergence to {tol} within {cap} nodes", value, best_delta, n
            )
        value2 = trapezoid_circle(f, c.with_nodes(n2))
        delta = abs(value2 - value)
        if delta < tol:
            return value2, delta, n2
        n, value, best_delta = n2, value2, delta


# ---------------------------------------------------------------------------
# Gauss rules for exp(-u^2/2) on R and exp(-beta*u) on (0, inf)


@dataclass(frozen=True)
class LineRule:
    """Nodes and weights with sum_i weights[i] * f(nodes[i]) approximating
    integral f(u) * weight(u) du; exact for polynomials of degree <= 2N-1.

    lifted[i] = weights[i] * exp(+W(nodes[i])) (W the weight exponent) are
    computed in log space during generation, so integral g(u) du over the
    weight's support is sum_i lifted[i] * g(nodes[i]) without overflow.
    """

    kind: str
    beta: Fraction
    nodes: np.ndarray
    weights: np.ndarray
    lifted: np.ndarray


def _jacobi_coeffs(kind: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the n x n Jacobi matrix of the
    orthonormal recurrence x p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j-1}.

    gaussian (weight e^{-u^2/2}): a_j = 0, b_j = sqrt(j)
    exponential (weight e^{-u}):  a_j = 2j+1, b_j = j
    """
    if kind == "gaussian":
        return np.zeros(n), np.sqrt(np.arange(1.0, n))
    return 2.0 * np.arange(n) + 1.0, np.arange(1.0, n)


def _eigen_count(diag: np.ndarray, off2: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Sturm count: number of Jacobi-matrix eigenvalues < lam, vectorized.
    A zero pivot counts as negative (the boundary case lam == eigenvalue)."""
    d = diag[0] - lam
    d = np.where(d == 0.0, -1e-300, d)
    count = (d < 0).astype(np.int64)
    for j in range(1, diag.size):
        d = diag[j] - lam - off2[j - 1] / d
        d = np.where(d == 0.0, -1e-300, d)
        count += d < 0
    return count


def _bracket_nodes(kind: str, n: int) -> np.ndarray:
    """Initial node guesses: bisection on the Sturm count, one lane per root."""
    diag, off = _jacobi_coeffs(kind, n)
    off2 = off * off
    pad = np.zeros(n)
    if n > 1:
        pad[:-1] += np.abs(off)
        pad[1:] += np.abs(off)
    lo = np.full(n, float(np.min(diag - pad)))
    hi = np.full(n, float(np.max(diag + pad)))
    ks = np.arange(n)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        above = _eigen_count(diag, off2, mid) > ks
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
        if np.all(hi - lo <= 1e-12 * (1.0 + np.abs(lo))):
            break
    return 0.5 * (lo + hi)


def _poly_eval(kind: str, n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate (p_n, p_n', log of the Christoffel sum) at x, vectorized,
    rescaling lanes whose recurrence values grow past the overflow guard."""
    x = np.asarray(x, dtype=float)
    p = np.full_like(x, (2.0 * math.pi) ** -0.25 if kind == "gaussian" else 1.0)
    pm = np.zeros_like(x)
    dp = np.zeros_like(x)
    dpm = np.zeros_like(x)
    ssq = p * p
    logs = np.zeros_like(x)
    for j in range(n):
        if kind == "gaussian":
            aj, bj, bj1 = 0.0, math.sqrt(j), math.sqrt(j + 1.0)
        else:
            aj, bj, bj1 = 2.0 * j + 1.0, float(j), float(j + 1)
        p, pm = ((x - aj) * p - bj * pm) / bj1, p
        dp, dpm = ((x - aj) * dp + pm - bj * dpm) / bj1, dp
        if j < n - 1:
            ssq = ssq + p * p
        big = np.abs(p) > _RESCALE_AT
        if big.any():
            f = np.where(big, _RESCALE_BY, 1.0)
            p, pm, dp, dpm = p * f, pm * f, dp * f, dpm * f
            ssq = ssq * (f * f)
            logs = logs + np.where(big, _RESCALE_LOG, 0.0)
    return p, dp, np.log(ssq) - 2.0 * logs


def _gauss_rule(kind: str, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    z = _bracket_nodes(kind, n)
    best = np.full(n, np.inf)
    zbest = z.copy()
    stalled = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    for _ in range(60):
        p, dp, _ = _poly_eval(kind, n, z)
        step = np.where(done, 0.0, p / dp)
        znew = z - step
        absstep = np.abs(step)
        tolv = NEWTON_TOL * (1.0 + np.abs(znew))
        improved = absstep < best
        zbest = np.where(improved & ~done, znew, zbest)
        best = np.where(improved & ~done, absstep, best)
        stalled = np.where(improved | done, 0, stalled + 1)
        # Accept a lane once its step is below tolerance, or once three
        # consecutive iterations fail to shrink an already-tiny step (the
        # iterate is oscillating on the double-precision roundoff floor).
        done = done | (absstep <= tolv) | (
            (stalled >= 3) & (best <= _STALL_TOL * (1.0 + np.abs(znew)))
        )
        z = np.where(done, zbest, znew)
        if done.all():
            break
    else:
        raise ConvergenceError(
            f"Newton did not converge for {kind} rule N={n}",
            zbest,
            float(np.max(best[~done])),
            n,
        )
    z = zbest
    if kind == "gaussian":
        z[np.abs(z) < 1e-13] = 0.0
    _, _, log_ssq = _poly_eval(kind, n, z)
    with np.errstate(under="ignore"):
        weights = np.exp(-log_ssq)
        expo = 0.5 * z * z if kind == "gaussian" else z
        lifted = np.exp(expo - log_ssq)
    return z, weights, lifted


@lru_cache(maxsize=None)
def _line_rule_cached(kind: str, n: int, beta: Fraction) -> LineRule:
    nodes, weights, lifted = _gauss_rule(kind, n)
    if kind == "exponential":
        b = float(beta)
        if b != 1.0:
            nodes = nodes / b
            weights = weights / b
            lifted = lifted / b
    for arr in (nodes, weights, lifted):
        arr.setflags(write=False)
    return LineRule(kind, beta, nodes, weights, lifted)


def line_rule_nodes(kind: str, n: int, beta=1) -> LineRule:
    """Gauss rule of n nodes for the named weight.  kind is "gaussian"
    (exp(-u^2/2) on R) or "exponential" (exp(-beta*u) on (0, inf))."""
    if kind not in ("gaussian", "exponential"):
        raise ContourError(f"unknown line rule kind {kind!r}")
    if not 1 <= n <= MAX_LINE_NODES:
        raise ContourError(f"line rules support 1..{MAX_LINE_NODES} nodes, got {n}")
    beta = as_fraction(beta)
    if beta <= 0:
        raise ContourError(f"exponential rate must be > 0, got {beta}")
    return _line_rule_cached(kind, n, beta)
