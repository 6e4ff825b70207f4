#!/usr/bin/env python3
"""
Finite-field restriction verifier - example usage.
"""
import logging

from ffharmonic.field import case_tag, gauss_sum, make_field
from ffharmonic.logging_config import configure_logging
from ffharmonic.restriction import (
    conjectured_exponent,
    extremizer_check,
    necessary_threshold,
    omega_bound_check,
    operator_norm_p2,
)
from ffharmonic.varieties import build_affine_in_sphere, homogeneous_spec, lift_to_homogeneous, sphere_spec


def main():
    """
    Walk through the main objects on a desk-scale example.
    """
    configure_logging(level=logging.WARNING)
    print("Finite-Field Restriction Verifier")
    print("=" * 50)

    q, d, j = 5, 3, 1
    prime_field = make_field(q)
    tag = case_tag(prime_field, d, j)

    print(f"\n1. Field F_{q}")
    print(f"   Gauss sum G_1 = {gauss_sum(prime_field, 1):.6f}")
    print(f"   Case of (d={d}, j={j}): {tag.kind.value}, alpha = {tag.alpha}")

    print("\n2. Affine subspace inside the sphere...")
    subspace = build_affine_in_sphere(prime_field, d, j, seed=0)
    print(f"   k = {subspace.k}, base = {subspace.base}, directions = {subspace.directions}")
    threshold = necessary_threshold(d, subspace.k, 2)
    print(f"   Necessary p threshold: {threshold} (conjectured {conjectured_exponent(d, tag)})")

    print("\n3. Extremizer ratio at p = 2, r = 2...")
    report = extremizer_check(subspace, j, 2, 2)
    print(f"   computed = {report.lhs:.10f}, closed = {report.rhs:.10f}")

    print("\n4. Omega(E) for the lifted subspace...")
    omega_report = omega_bound_check(lift_to_homogeneous(subspace), homogeneous_spec(prime_field, d, j))
    print(f"   |E| = {omega_report.size}, Omega = {omega_report.omega:.1f}, bound = {omega_report.bound:.1f}")
    print(f"   regime: {omega_report.regime}")

    print("\n5. R(2 -> 2) for the sphere...")
    norm = operator_norm_p2(sphere_spec(prime_field, d, j))
    print(f"   power iteration = {norm.lhs:.8f}, closed = {norm.rhs:.8f}")

    print("\n" + "=" * 50)
    print("For the full suites, run: python run_verifier.py verify --q 3,5 --d 2,3")


if __name__ == "__main__":
    main()
