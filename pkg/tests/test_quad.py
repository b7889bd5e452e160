"""Contour and line quadrature: trapezoid circles, adaptive doubling, and
Gauss rules built from scratch."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiortho.quad import (
    MAX_LINE_NODES,
    ContourError,
    ContourSpec,
    ConvergenceError,
    adaptive_double,
    circle_nodes,
    line_rule_nodes,
    pairwise_sum,
    trapezoid_circle,
)
from oracles import gamma_moment_oracle, gaussian_moment_oracle

TWO_PI_I = 2j * math.pi
UNIT = ContourSpec("circle", 0j, 1.0, 64)


# ---------------------------------------------------------------------------
# contour specs and trapezoid rule


def test_contour_spec_validation():
    with pytest.raises(ContourError):
        ContourSpec("square", 0j, 1.0, 64)
    with pytest.raises(ContourError):
        ContourSpec("circle", 0j, -1.0, 64)
    with pytest.raises(ContourError):
        ContourSpec("circle", 0j, 1.0, 17)  # odd
    with pytest.raises(ContourError):
        ContourSpec("circle", 0j, 1.0, 8)  # too few


def test_reciprocal_is_exact_for_any_even_count():
    for n in (16, 20, 64, 250):
        val = trapezoid_circle(lambda z: 1 / z, UNIT.with_nodes(n))
        assert abs(val - TWO_PI_I) <= 2 * abs(TWO_PI_I) * 2.3e-16


def test_exp_over_z_residue():
    val = trapezoid_circle(lambda z: cmath.exp(z) / z, UNIT)
    assert abs(val - TWO_PI_I) < 1e-12


def test_analytic_integrand_vanishes():
    for spec in (UNIT, ContourSpec("circle", 2 + 1j, 3.0, 32)):
        assert abs(trapezoid_circle(lambda z: z, spec)) < 1e-12


@given(st.integers(-4, 4), st.integers(1, 5))
def test_laurent_monomials(k, scale):
    """Only the z^-1 mode survives; all other integer powers integrate to 0."""
    spec = ContourSpec("circle", 0j, float(scale), 64)
    val = trapezoid_circle(lambda z: z**k, spec)
    want = TWO_PI_I if k == -1 else 0j
    assert abs(val - want) <= 1e-10 * max(1.0, float(scale) ** abs(k))


def test_circle_nodes_geometry():
    nodes = circle_nodes(ContourSpec("circle", 1 + 2j, 2.0, 32))
    assert len(nodes) == 32
    assert all(abs(abs(z - (1 + 2j)) - 2.0) < 1e-14 for z in nodes)


def test_pairwise_sum_matches_fsum():
    values = [complex((-1) ** i * i, i / 7) for i in range(1001)]
    ref = complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    assert abs(pairwise_sum(values) - ref) < 1e-9


# ---------------------------------------------------------------------------
# adaptive doubling


def test_adaptive_converges_immediately_on_residue():
    val, delta, nodes = adaptive_double(lambda z: 1 / z, UNIT.with_nodes(16), tol=1e-12)
    assert abs(val - TWO_PI_I) < 1e-12
    assert delta < 5e-15  # first doubling already agrees to rounding error
    assert nodes == 32


def test_adaptive_reports_nonconvergence_near_pole():
    pole = 1.0 + 1e-3
    with pytest.raises(ConvergenceError) as err:
        adaptive_double(lambda z: 1 / (z - pole), UNIT.with_nodes(16), tol=1e-12, cap=4096)
    assert err.value.nodes == 4096
    assert err.value.delta > 1e-12
    assert err.value.best is not None


# ---------------------------------------------------------------------------
# Gauss line rules


def test_gaussian_rule_examples():
    rule = line_rule_nodes("gaussian", 1)
    assert rule.nodes[0] == 0.0
    assert rule.weights[0] == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)

    rule3 = line_rule_nodes("gaussian", 3)
    second = float(np.sum(rule3.weights * rule3.nodes**2))
    assert second == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)


def test_exponential_rule_example():
    rule = line_rule_nodes("exponential", 2, 1)
    third = float(np.sum(rule.weights * rule.nodes**3))
    assert third == pytest.approx(6.0, rel=1e-12)


@given(st.integers(1, 40))
def test_gaussian_moments_exact_to_degree(n):
    """An n-point rule integrates x^j exactly for j <= 2n-1 (weight e^{-x^2/2},
    normalized so moments carry the sqrt(2*pi) factor)."""
    rule = line_rule_nodes("gaussian", n)
    root = math.sqrt(2 * math.pi)
    for j in range(0, 2 * n, max(1, (2 * n) // 7)):
        got = float(np.sum(rule.weights * rule.nodes ** j))
        want = float(gaussian_moment_oracle(j)) * root
        # odd moments cancel between symmetric nodes; measure the error
        # against the non-cancelling magnitude of the summands
        scale = float(np.sum(rule.weights * np.abs(rule.nodes) ** j))
        assert abs(got - want) <= 1e-13 * max(scale, 1.0)


@given(
    st.integers(1, 30),
    st.fractions(min_value=1, max_value=4, max_denominator=4).map(float),
)
def test_exponential_moments_exact_to_degree(n, beta):
    rule = line_rule_nodes("exponential", n, beta)
    for j in range(0, 2 * n, max(1, (2 * n) // 7)):
        got = float(np.sum(rule.weights * rule.nodes ** j))
        want = float(gamma_moment_oracle(j, beta))
        assert got == pytest.approx(want, rel=1e-11)


def test_lifted_weights_consistency():
    """lifted = weight * e^{+W(x)} so that sum(lifted * f) integrates f alone;
    check integral of e^{-x^2/2} equals sqrt(2*pi)."""
    rule = line_rule_nodes("gaussian", 48)
    got = float(np.sum(rule.lifted * np.exp(-rule.nodes**2 / 2)))
    assert got == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)

    erule = line_rule_nodes("exponential", 48, 2.0)
    got2 = float(np.sum(erule.lifted * np.exp(-2.0 * erule.nodes)))
    assert got2 == pytest.approx(0.5, rel=1e-10)


def test_rules_are_read_only_and_capped():
    rule = line_rule_nodes("gaussian", 8)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0
    assert MAX_LINE_NODES == 512
    big = line_rule_nodes("gaussian", MAX_LINE_NODES)
    assert big.nodes.size == MAX_LINE_NODES
    assert np.all(np.diff(big.nodes) > 0)


def test_max_size_rules_high_degree():
    rule = line_rule_nodes("gaussian", MAX_LINE_NODES)
    j = 20
    got = float(np.sum(rule.weights * rule.nodes**j))
    want = float(gaussian_moment_oracle(j)) * math.sqrt(2 * math.pi)
    assert got == pytest.approx(want, rel=1e-11)
