"""Shared oracles and builders for the test suite.

The closed-form 2x2 spectral radius below is the independent reference the
power-iteration kernel is checked against; it must never call into the
package's own eigen code.
"""

import math

import numpy as np

from hourglass import FiniteSet, Matrix, hausdorff_distance


def rho_2x2_closed_form(entries) -> float:
    """Largest-modulus root of the characteristic polynomial of a
    non-negative 2x2 matrix, straight from the quadratic formula.

    For non-negative entries the discriminant (a-d)^2 + 4bc is non-negative
    and the larger root dominates the other in modulus.
    """
    (a, b), (c, d) = entries
    disc = (a - d) * (a - d) + 4.0 * b * c
    return ((a + d) + math.sqrt(disc)) / 2.0


def diag(*values) -> Matrix:
    return Matrix(np.diag(np.asarray(values, dtype=float)))


def ex4_matrices() -> tuple[Matrix, Matrix]:
    return diag(1.0, 0.0), diag(0.0, 1.0)


def ex4_set() -> FiniteSet:
    return FiniteSet(ex4_matrices())


def sets_equal(a, b, tol: float = 1e-12) -> bool:
    """Equality as point sets: zero Hausdorff distance."""
    return a.shape == b.shape and hausdorff_distance(a, b) <= tol


def random_finite_set(rng, n, m, count, zero_prob=0.0) -> FiniteSet:
    """Finite set of random non-negative matrices, optionally sparsified."""
    mats = []
    for _ in range(count):
        entries = rng.uniform(0.0, 1.0, size=(n, m))
        if zero_prob:
            entries = np.where(rng.uniform(size=(n, m)) < zero_prob, 0.0, entries)
        mats.append(Matrix(entries))
    return FiniteSet(mats)
