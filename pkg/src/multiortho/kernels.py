"""Correlation kernels in three equivalent forms, plus their cross-checks.

The kernel of the determinantal eigenvalue process is computed as

1. the Christoffel-Darboux quotient
   K(x, y) = [P(x) Q(y) - sum_k ratio_k P_down_k(x) Q_up_k(y)] / (x - y),
   built from exact polynomial data (``eval_cd``), with an analytic limit
   branch on the diagonal;
2. the biorthogonal sum K(x, y) = sum_j P_{c_j}(x) Q_{c_{j+1}}(y) along a
   monotone chain of multi-indices (``eval_sum``);
3. a double-contour quadrature (vertical line x circle for the Gaussian
   family, circle x circle for the half-line family), spectrally accurate
   in the node count (``eval_contour_*``).

All polynomial ingredients are exact rationals; floats appear only at the
final evaluation step.  The module also provides the derivative identity
check, correlation determinants, exact biorthogonality matrices, and the
trace rule integral(K(x,x) dx) = |n|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import hermite as _hermite
from . import laguerre as _laguerre
from .core import ExactMathError, LinearForm, MultiIndex, RatPoly, mi_chain
from .hermite import HermiteSpec
from .laguerre import LaguerreSpec
from .quad import MAX_LINE_NODES, ContourError, ConvergenceError, line_rule_nodes

Spec = Union[HermiteSpec, LaguerreSpec]

FAMILIES = ("hermite", "laguerre")

# Below this separation the CD quotient switches to its analytic limit.
DIAGONAL_EPS = 1e-8

# Contour-quadrature refinement policy: start at 512 nodes and double until
# two successive values differ by less than the tolerance.
CONTOUR_START_NODES = 512
CONTOUR_CAP_NODES = 8192
CONTOUR_DOUBLING_TOL = 1e-9

# Column-chunk bound so the 1/(s - t) node matrix never exceeds ~64 MB.
_CHUNK_ENTRIES = 4_000_000


class DegenerateIndexError(ExactMathError):
    """Kernel build with some n_k = 0; that component has no down-neighbor."""


def _check_family(family: str, spec: Spec) -> None:
    if family not in FAMILIES:
        raise ExactMathError(f"unknown family {family!r}; expected one of {FAMILIES}")
    want = HermiteSpec if family == "hermite" else LaguerreSpec
    if not isinstance(spec, want):
        raise ExactMathError(f"family {family!r} does not match spec type {type(spec).__name__}")


def family_of(spec: Spec) -> str:
    return "hermite" if isinstance(spec, HermiteSpec) else "laguerre"


@lru_cache(maxsize=None)
def _type2(spec: Spec) -> RatPoly:
    mod = _hermite if isinstance(spec, HermiteSpec) else _laguerre
    return mod.type_ii_poly(spec)


@lru_cache(maxsize=None)
def _type1(spec: Spec) -> LinearForm:
    mod = _hermite if isinstance(spec, HermiteSpec) else _laguerre
    return mod.type_i_form(spec)


# ---------------------------------------------------------------------------
# Christoffel-Darboux model


@dataclass(frozen=True)
class KernelModel:
    """Exact ingredients of the CD kernel for one spec.

    P and Q carry the top multi-index n; for each component k,
    P_down[k] has index n - e_k, Q_up[k] has index n + e_k, and ratios[k]
    is the exact normalization ratio h_n(k) / h_{n-e_k}(k).
    dP / dP_down are the formal derivatives used by the diagonal limit.
    """

    family: str
    spec: Spec
    P: RatPoly
    Q: LinearForm
    P_down: tuple[RatPoly, ...]
    Q_up: tuple[LinearForm, ...]
    ratios: tuple[Fraction, ...]
    dP: RatPoly
    dP_down: tuple[RatPoly, ...]


@lru_cache(maxsize=None)
def build_kernel(family: str, spec: Spec) -> KernelModel:
    """Construct all CD ingredients exactly and assert the ratio identity.

    The closed-form ratio (n_k for the Gaussian family,
    n_k (|n| + p) / beta_k^2 for the half-line family) is checked against
    the ratio of moment-based normalization constants before use.
    """
    _check_family(family, spec)
    n = spec.n
    for k, n_k in enumerate(n):
        if n_k == 0:
            raise DegenerateIndexError(
                f"n[{k}] = 0: drop component {k} from the multi-index before building the kernel"
            )
    P = _type2(spec)
    Q = _type1(spec)
    P_down, Q_up, ratios = [], [], []
    for k in range(n.m):
        spec_down = spec.with_n(n.drop(k))
        spec_up = spec.with_n(n.bump(k))
        Pd = _type2(spec_down)
        P_down.append(Pd)
        Q_up.append(_type1(spec_up))
        if family == "hermite":
            closed = Fraction(n[k])
            h_top = _hermite.norm_constant_from_moments(spec, k, P)
            h_low = _hermite.norm_constant_from_moments(spec_down, k, Pd)
            moment_ratio = (h_top / h_low).as_fraction()
            if _hermite.norm_constant(spec, k) != h_top:
                raise ExactMathError("closed-form h disagrees with moment h")  # unreachable
        else:
            closed = _laguerre.norm_ratio(spec, k)
            h_top = _laguerre.norm_constant(spec, k, P)
            h_low = _laguerre.norm_constant(spec_down, k, Pd)
            moment_ratio = h_top / h_low
        if moment_ratio != closed:
            raise ExactMathError(
                f"normalization ratio mismatch for component {k}: "
                f"closed form {closed}, moments {moment_ratio}"
            )  # unreachable
        ratios.append(closed)
    return KernelModel(
        family=family,
        spec=spec,
        P=P,
        Q=Q,
        P_down=tuple(P_down),
        Q_up=tuple(Q_up),
        ratios=tuple(ratios),
        dP=P.derivative(),
        dP_down=tuple(p.derivative() for p in P_down),
    )


def _check_domain(K: KernelModel, x: float, y: float) -> None:
    if K.family == "laguerre" and (x <= 0.0 or y <= 0.0):
        raise ExactMathError(
            f"half-line kernel needs x, y > 0, got ({x}, {y})"
        )


def eval_cd(K: KernelModel, x: float, y: float) -> float:
    """CD kernel value at (x, y).

    Away from the diagonal this is the quotient N(x, y) / (x - y) with
    N(x, y) = P(x) Q(y) - sum_k ratio_k P_down_k(x) Q_up_k(y).  Within
    DIAGONAL_EPS of the diagonal it returns the limit dN/dx evaluated at the
    midpoint: N vanishes on the diagonal, so K(x, x) = dN/dx |_{y=x}, which
    needs only the exact polynomial derivatives of P and P_down.
    """
    x, y = float(x), float(y)
    _check_domain(K, x, y)
    if abs(x - y) < DIAGONAL_EPS:
        t = 0.5 * (x + y)
        val = K.dP(t) * K.Q(t)
        for r, dPd, Qu in zip(K.ratios, K.dP_down, K.Q_up):
            val -= float(r) * dPd(t) * Qu(t)
        return val
    num = K.P(x) * K.Q(y)
    for r, Pd, Qu in zip(K.ratios, K.P_down, K.Q_up):
        num -= float(r) * Pd(x) * Qu(y)
    return num / (x - y)


# ---------------------------------------------------------------------------
# biorthogonal sum form


def _check_chain(chain: Sequence[MultiIndex], n: MultiIndex) -> None:
    if len(chain) != n.weight + 1:
        raise ExactMathError(f"chain length {len(chain)} != |n| + 1 = {n.weight + 1}")
    if chain[0].weight != 0 or chain[-1] != n:
        raise ExactMathError("chain must run from the zero index to n")
    for prev, cur in zip(chain, chain[1:]):
        diff = [c - p for p, c in zip(prev, cur)]
        if sorted(diff) != [0] * (n.m - 1) + [1]:
            raise ExactMathError(f"chain step {prev} -> {cur} is not a unit increment")


def eval_sum(family: str, spec: Spec, chain: Sequence[MultiIndex], x: float, y: float) -> float:
    """Biorthogonal sum sum_{j<|n|} P_{chain[j]}(x) * Q_{chain[j+1]}(y).

    Every factor is built exactly (and cached), then evaluated in float.
    The value is chain-independent; the chain only reindexes the same span.
    """
    _check_family(family, spec)
    _check_chain(chain, spec.n)
    x, y = float(x), float(y)
    if family == "laguerre" and (x <= 0.0 or y <= 0.0):
        raise ExactMathError(f"half-line kernel needs x, y > 0, got ({x}, {y})")
    total = 0.0
    for j in range(spec.n.weight):
        p = _type2(spec.with_n(chain[j]))
        q = _type1(spec.with_n(chain[j + 1]))
        total += p(x) * q(y)
    return total


# ---------------------------------------------------------------------------
# double-contour quadrature


@dataclass(frozen=True)
class HermiteContourGeometry:
    """Vertical line Re s = line_abscissa paired with a circle |t - c| = r.

    The line must lie strictly left of the circle and the circle must
    enclose every shift parameter a_k.
    """

    line_abscissa: float
    circle_center: float
    circle_radius: float

    @classmethod
    def default_for(cls, spec: HermiteSpec) -> "HermiteContourGeometry":
        a = [float(v) for v in spec.a]
        lo, hi = min(a), max(a)
        return cls(lo - 2.0, 0.5 * (lo + hi), 0.5 * (hi - lo) + 1.0)

    def validate(self, spec: HermiteSpec) -> None:
        if self.circle_radius <= 0.0:
            raise ContourError("circle radius must be positive")
        if self.line_abscissa >= self.circle_center - self.circle_radius:
            raise ContourError(
                "vertical line must lie strictly left of the circle "
                f"(abscissa {self.line_abscissa}, circle reaches "
                f"{self.circle_center - self.circle_radius})"
            )
        for a_k in spec.a:
            if abs(float(a_k) - self.circle_center) >= self.circle_radius:
                raise ContourError(f"shift parameter {a_k} is not inside the circle")


@dataclass(frozen=True)
class LaguerreContourGeometry:
    """Two disjoint counterclockwise circles: one of radius inner_radius
    around the origin (inside Re s < min beta), and one around the rates,
    kept in the right half-plane away from the origin."""

    inner_radius: float
    outer_center: float
    outer_radius: float

    @classmethod
    def default_for(cls, spec: LaguerreSpec) -> "LaguerreContourGeometry":
        b = [float(v) for v in spec.beta]
        lo, hi = min(b), max(b)
        return cls(0.5 * lo, 0.5 * (lo + hi), 0.5 * (hi - lo) + 0.25 * lo)

    def validate(self, spec: LaguerreSpec) -> None:
        bmin = min(float(v) for v in spec.beta)
        if not 0.0 < self.inner_radius < bmin:
            raise ContourError(
                f"inner radius must lie in (0, min rate) = (0, {bmin}), got {self.inner_radius}"
            )
        if self.outer_radius <= 0.0:
            raise ContourError("outer radius must be positive")
        if self.outer_center - self.outer_radius <= 0.0:
            raise ContourError("outer circle must stay in the right half-plane, away from 0")
        if self.outer_center - self.outer_radius <= self.inner_radius:
            raise ContourError("the two circles must be disjoint")
        for b_k in spec.beta:
            if abs(float(b_k) - self.outer_center) >= self.outer_radius:
                raise ContourError(f"rate {b_k} is not inside the outer circle")


def _chunked_bilinear(A: np.ndarray, s: np.ndarray, t: np.ndarray, B: np.ndarray) -> complex:
    """sum_{i,j} A[i] * B[j] / (s[i] - t[j]) with bounded memory, summed in a
    fixed chunk order for determinism."""
    cols = max(1, _CHUNK_ENTRIES // max(1, s.size))
    total = 0.0 + 0.0j
    for j0 in range(0, t.size, cols):
        block = 1.0 / (s[:, None] - t[None, j0 : j0 + cols])
        total += complex(A @ block @ B[j0 : j0 + cols])
    return total


def _contour_hermite_complex(
    spec: HermiteSpec,
    x: float,
    y: float,
    nodes: int,
    geometry: HermiteContourGeometry | None,
) -> complex:
    geom = geometry if geometry is not None else HermiteContourGeometry.default_for(spec)
    geom.validate(spec)
    if nodes < 16 or nodes % 2:
        raise ContourError(f"node count must be even and >= 16, got {nodes}")
    sigma, c, rho = geom.line_abscissa, geom.circle_center, geom.circle_radius
    line = line_rule_nodes("gaussian", min(nodes, MAX_LINE_NODES))
    u = line.nodes
    s = sigma + 1j * u
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    t = c + rho * np.exp(1j * theta)

    A = line.weights * np.exp(1j * u * (sigma - x))
    B = (t - c) * np.exp(-0.5 * (t - y) ** 2)
    for a_k, n_k in zip(spec.a, spec.n):
        if n_k:
            A = A * (s - float(a_k)) ** n_k
            B = B / (t - float(a_k)) ** n_k
    factor = math.exp(0.5 * (sigma - x) ** 2) / (2.0 * math.pi * nodes)
    return factor * _chunked_bilinear(A, s, t, B)


def _contour_laguerre_complex(
    spec: LaguerreSpec,
    x: float,
    y: float,
    nodes: int,
    geometry: LaguerreContourGeometry | None,
) -> complex:
    geom = geometry if geometry is not None else LaguerreContourGeometry.default_for(spec)
    geom.validate(spec)
    if nodes < 16 or nodes % 2:
        raise ContourError(f"node count must be even and >= 16, got {nodes}")
    if x <= 0.0 or y <= 0.0:
        raise ExactMathError(f"half-line kernel needs x, y > 0, got ({x}, {y})")
    r, c, rho = geom.inner_radius, geom.outer_center, geom.outer_radius
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    s = r * np.exp(1j * theta)
    t = c + rho * np.exp(1j * theta)
    wp = spec.n.weight + spec.p

    A = s * np.exp(x * s) * s ** (-wp)
    B = (t - c) * np.exp(-y * t) * t**wp
    for b_k, n_k in zip(spec.beta, spec.n):
        if n_k:
            A = A * (s - float(b_k)) ** n_k
            B = B / (t - float(b_k)) ** n_k
    factor = 1.0 / (nodes * nodes)
    return factor * _chunked_bilinear(A, s, t, B)


def eval_contour_hermite(
    spec: HermiteSpec,
    x: float,
    y: float,
    nodes: int = CONTOUR_START_NODES,
    geometry: HermiteContourGeometry | None = None,
) -> float:
    """Double-contour kernel value (real part) for the Gaussian family.

    The vertical-line direction substitutes s = sigma + i u so the Gaussian
    factor exp((s-x)^2/2) splits into exp((sigma-x)^2/2) * exp(iu(sigma-x))
    times the Gaussian weight absorbed by the line rule; the circle
    direction uses the trapezoid rule.  The line rule saturates at
    MAX_LINE_NODES while the circle keeps refining.
    """
    return _contour_hermite_complex(spec, float(x), float(y), nodes, geometry).real


def eval_contour_hermite_full(
    spec: HermiteSpec,
    x: float,
    y: float,
    nodes: int = CONTOUR_START_NODES,
    geometry: HermiteContourGeometry | None = None,
) -> complex:
    """Same as eval_contour_hermite but keeps the imaginary part, which is a
    pure discretization diagnostic (the kernel is real on real inputs)."""
    return _contour_hermite_complex(spec, float(x), float(y), nodes, geometry)


def eval_contour_laguerre(
    spec: LaguerreSpec,
    x: float,
    y: float,
    nodes: int = CONTOUR_START_NODES,
    geometry: LaguerreContourGeometry | None = None,
) -> float:
    """Double-contour kernel value (real part) for the half-line family.

    Both directions are trapezoid rules on circles.  Note the contour
    normalization differs from the CD kernel by the factor x^p y^(-p);
    they agree exactly when p = 0.
    """
    return _contour_laguerre_complex(spec, float(x), float(y), nodes, geometry).real


def eval_contour_laguerre_full(
    spec: LaguerreSpec,
    x: float,
    y: float,
    nodes: int = CONTOUR_START_NODES,
    geometry: LaguerreContourGeometry | None = None,
) -> complex:
    """Same as eval_contour_laguerre but keeps the imaginary diagnostic."""
    return _contour_laguerre_complex(spec, float(x), float(y), nodes, geometry)


def eval_contour(
    family: str,
    spec: Spec,
    x: float,
    y: float,
    nodes: int | None = None,
    geometry=None,
    tol: float = CONTOUR_DOUBLING_TOL,
    cap: int = CONTOUR_CAP_NODES,
) -> float:
    """Family dispatch for the contour kernel.

    With an explicit node count this is a single evaluation.  With
    nodes=None it doubles from CONTOUR_START_NODES until two successive
    values differ by less than tol, raising ConvergenceError (carrying the
    best value) if the cap is reached first.
    """
    _check_family(family, spec)
    fn = eval_contour_hermite if family == "hermite" else eval_contour_laguerre
    if nodes is not None:
        return fn(spec, x, y, nodes, geometry)
    n = CONTOUR_START_NODES
    prev = fn(spec, x, y, n, geometry)
    delta = math.inf
    while n < cap:
        n *= 2
        cur = fn(spec, x, y, n, geometry)
        delta = abs(cur - prev)
        if delta < tol:
            return cur
        prev = cur
    raise ConvergenceError(
        f"contour kernel did not settle below {tol} by {cap} nodes", prev, delta, cap
    )


# ---------------------------------------------------------------------------
# identity checks and derived quantities


def check_dxdy_identity(
    spec: HermiteSpec, x: float, y: float, h: float
) -> tuple[float, float]:
    """Residuals of the two expressions for dK/dx + dK/dy (Gaussian family).

    D is the central-difference sum with step h.  Returns
    (|D - [(x-y) K - P(x) Q(y)]|, |D + sum_k n_k P_down_k(x) Q_up_k(y)|);
    both vanish like h^2.
    """
    K = build_kernel("hermite", spec)
    x, y = float(x), float(y)
    D = (eval_cd(K, x + h, y) - eval_cd(K, x - h, y)) / (2.0 * h)
    D += (eval_cd(K, x, y + h) - eval_cd(K, x, y - h)) / (2.0 * h)
    first = (x - y) * eval_cd(K, x, y) - K.P(x) * K.Q(y)
    second = 0.0
    for r, Pd, Qu in zip(K.ratios, K.P_down, K.Q_up):
        second += float(r) * Pd(x) * Qu(y)
    return abs(D - first), abs(D + second)


def correlation_det(K: KernelModel, points: Sequence[float], conjugated: bool = False) -> float:
    """det[ K(x_i, x_j) ] over the given points, by partial-pivot elimination.

    With conjugated=True the entries carry the extra (x_i / x_j)^p factor
    (half-line family); the determinant is unchanged because the factor is
    a diagonal similarity.
    """
    pts = [float(v) for v in points]
    n = len(pts)
    p = getattr(K.spec, "p", 0) if conjugated else 0
    a = [[eval_cd(K, xi, xj) * (xi / xj) ** p for xj in pts] for xi in pts]
    det = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda row: abs(a[row][col]))
        if a[piv][col] == 0.0:
            return 0.0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for row in range(col + 1, n):
            f = a[row][col] / a[col][col]
            for j in range(col + 1, n):
                a[row][j] -= f * a[col][j]
    return det


def check_biorthogonality(
    family: str, spec: Spec, chain: Sequence[MultiIndex] | None = None
) -> list[list[Fraction]]:
    """Exact matrix integral(p_i(x) q_j(x) dx), which must be the identity.

    p_i is the type II polynomial at chain[i], q_j the type I form at
    chain[j+1]; all integrals reduce to rational moment sums.
    """
    _check_family(family, spec)
    if chain is None:
        chain = mi_chain(spec.n)
    _check_chain(chain, spec.n)
    mod = _hermite if family == "hermite" else _laguerre
    w = spec.n.weight
    polys = [_type2(spec.with_n(chain[i])) for i in range(w)]
    forms = [_type1(spec.with_n(chain[j + 1])) for j in range(w)]
    return [[mod.form_integral(q, p) for q in forms] for p in polys]


def kernel_trace(K: KernelModel, nodes: int = 200) -> float:
    """Quadrature value of integral(K(x, x) dx) over the family's support.

    Uses the lifted rule weights (weights times exp(+W)) so the kernel's own
    weight decay is divided out analytically; the exact value is |n|.
    """
    if K.family == "hermite":
        rule = line_rule_nodes("gaussian", nodes)
    else:
        rule = line_rule_nodes("exponential", nodes, beta=min(K.spec.beta))
    return math.fsum(
        w * eval_cd(K, xi, xi) for xi, w in zip(rule.nodes, rule.lifted) if w != 0.0
    )
