"""Closed-form spectrum of the expected planted matrix.

Let A be the Hermitian matrix with i above the diagonal and -i below; then
the planted model satisfies E[i*T] = 2*gamma*A (identity hidden ranking).
A has eigenvalues cot((2k-1)pi/(2n)) with explicit Fourier-type
eigenvectors, so its top eigenvalues grow linearly in n.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "build_A",
    "closed_form_eigenpair",
    "closed_form_eigenvalue",
    "top_eigenvalue_asymptote",
]


def build_A(n: int) -> np.ndarray:
    """Hermitian matrix with +i above the diagonal, -i below, 0 on it."""
    if n < 1:
        raise ValueError("n must be at least 1")
    upper = np.triu(np.ones((n, n)), k=1)
    return 1j * upper - 1j * upper.T


def closed_form_eigenvalue(n: int, i: int) -> float:
    """Eigenvalue lambda_i(A) = cot((2i-1)pi/(2n)) for 1 <= i <= n.

    Indices past the middle are evaluated through the mirror identity
    lambda_{n-i+1} = -lambda_i, which keeps the antisymmetry exact in
    floating point.
    """
    if not 1 <= i <= n:
        raise IndexError(f"eigenvalue index {i} out of range 1..{n}")
    mirror = n - i + 1
    if i == mirror:
        return 0.0
    if i > mirror:
        return -closed_form_eigenvalue(n, mirror)
    return 1.0 / math.tan((2 * i - 1) * math.pi / (2 * n))


def closed_form_eigenpair(n: int, i: int) -> tuple[float, np.ndarray]:
    """(lambda_i, unit eigenvector) of A from the closed form.

    The raw eigenvector has entries exp(-i*pi*(2i-1)*j/n) for j = 1..n and
    norm sqrt(n); it is returned normalized to unit norm.
    """
    lam = closed_form_eigenvalue(n, i)
    j = np.arange(1, n + 1)
    vec = np.exp(-1j * math.pi * (2 * i - 1) * j / n)
    return lam, vec / np.linalg.norm(vec)


def top_eigenvalue_asymptote(n: int, a: int) -> float:
    """Large-n value 2n/((2a-1)pi) of lambda_a(A), mirrored for bottom indices.

    For a counted from the bottom of the spectrum (a close to n) the value
    is the negation of the mirror index's asymptote.
    """
    if not 1 <= a <= n:
        raise IndexError(f"index {a} out of range 1..{n}")
    mirror = n - a + 1
    if a > mirror:
        return -2.0 * n / ((2 * mirror - 1) * math.pi)
    return 2.0 * n / ((2 * a - 1) * math.pi)
