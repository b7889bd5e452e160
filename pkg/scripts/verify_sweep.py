#!/usr/bin/env python3
"""Exhaustive exact verification sweep.

Enumerates every spec with up to --max-m components (distinct parameters
drawn from a configurable pool), multi-index weight up to --max-weight, and
for the half-line family exponent p up to --max-p, then checks exactly:

  * type II residuals vanish and type I conditions are (0, ..., 0, 1);
  * closed-form vs moment-based normalization (Gaussian family) and the
    h-ratio identities (n_k, resp. n_k (|n|+p) / beta_k^2);
  * the biorthogonality matrix is the identity.

On top of the exact sweep it runs the floating-point battery (kernel
three-way agreement, trace, derivative identity, ...) on the standard specs.
Exit status 0 when everything passes, 1 otherwise.
"""

import argparse
import itertools
import json
import sys
import time
from fractions import Fraction

from multiortho import hermite as hermite_mod
from multiortho import laguerre as laguerre_mod
from multiortho.hermite import HermiteSpec
from multiortho.kernels import check_biorthogonality
from multiortho.laguerre import LaguerreSpec
from multiortho.presets import standard_specs, verify_battery


def multi_indices(m: int, max_weight: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(1, max_weight + 1):
        for cuts in itertools.combinations(range(total + m - 1), m - 1):
            parts, prev = [], -1
            for c in cuts + (total + m - 1,):
                parts.append(c - prev - 1)
                prev = c
            out.append(tuple(parts))
    return out


def sweep_specs(args):
    shift_pool = [Fraction(v) for v in args.shift_pool.split(",")]
    rate_pool = [Fraction(v) for v in args.rate_pool.split(",")]
    for m in range(1, args.max_m + 1):
        for n in multi_indices(m, args.max_weight):
            if args.family in ("hermite", "both"):
                for a in itertools.combinations(shift_pool, m):
                    yield "hermite", HermiteSpec.of(a, n)
            if args.family in ("laguerre", "both"):
                for beta in itertools.combinations(rate_pool, m):
                    for p in range(args.max_p + 1):
                        yield "laguerre", LaguerreSpec.of(beta, n, p)


def check_exact(family: str, spec) -> list[str]:
    mod = hermite_mod if family == "hermite" else laguerre_mod
    problems = []
    P = mod.type_ii_poly(spec)
    if any(r != 0 for r in mod.type_ii_residuals(P, spec)):
        problems.append("type II residual nonzero")
    cond = mod.type_i_conditions(mod.type_i_form(spec), spec)
    if cond[:-1] != [Fraction(0)] * (len(cond) - 1) or cond[-1] != 1:
        problems.append(f"type I conditions {cond}")
    for k in range(spec.m):
        if spec.n[k] == 0:
            continue
        down = spec.with_n(spec.n.drop(k))
        if family == "hermite":
            h_up = hermite_mod.norm_constant_from_moments(spec, k, P)
            if h_up != hermite_mod.norm_constant(spec, k):
                problems.append(f"h closed form != moments at k={k}")
            h_down = hermite_mod.norm_constant_from_moments(
                down, k, hermite_mod.type_ii_poly(down)
            )
            if (h_up / h_down).as_fraction() != spec.n[k]:
                problems.append(f"h ratio != n_k at k={k}")
        else:
            h_up = laguerre_mod.norm_constant(spec, k, P)
            h_down = laguerre_mod.norm_constant(down, k, laguerre_mod.type_ii_poly(down))
            if h_up / h_down != laguerre_mod.norm_ratio(spec, k):
                problems.append(f"h ratio != closed form at k={k}")
    w = spec.n.weight
    M = check_biorthogonality(family, spec)
    if any(M[i][j] != (1 if i == j else 0) for i in range(w) for j in range(w)):
        problems.append("biorthogonality matrix not identity")
    return problems


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--family", choices=("hermite", "laguerre", "both"), default="both")
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-weight", type=int, default=5)
    parser.add_argument("--max-p", type=int, default=2)
    parser.add_argument("--shift-pool", default="-2,-1,0,1,2")
    parser.add_argument("--rate-pool", default="1/2,1,2,3")
    parser.add_argument("--skip-battery", action="store_true", help="exact sweep only")
    parser.add_argument("--out", help="write a JSON summary here")
    args = parser.parse_args(argv)

    start = time.perf_counter()
    failures = []
    counts = {"hermite": 0, "laguerre": 0}
    for family, spec in sweep_specs(args):
        problems = check_exact(family, spec)
        counts[family] += 1
        for text in problems:
            failures.append(f"{family} {spec}: {text}")
            print(f"FAIL {family} {spec}: {text}")
    sweep_seconds = time.perf_counter() - start
    print(
        f"exact sweep: {counts['hermite']} hermite + {counts['laguerre']} laguerre "
        f"specs, {len(failures)} failures, {sweep_seconds:.1f}s"
    )

    battery_checks = 0
    if not args.skip_battery:
        families = ("hermite", "laguerre") if args.family == "both" else (args.family,)
        for family in families:
            for spec in standard_specs(family):
                for check in verify_battery(family, spec):
                    battery_checks += 1
                    status = "pass" if check.passed else "FAIL"
                    print(f"{status} {family} {spec.n.parts} {check.name}: {check.detail}")
                    if not check.passed:
                        failures.append(f"{family} {spec}: {check.name}")

    ok = not failures
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(
                {
                    "specs": counts,
                    "battery_checks": battery_checks,
                    "failures": failures,
                    "sweep_seconds": round(sweep_seconds, 3),
                    "overall": "pass" if ok else "fail",
                },
                handle,
                indent=2,
            )
            handle.write("\n")
    print(f"overall: {'pass' if ok else 'fail'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
