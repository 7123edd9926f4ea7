"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own code paths: the
displacement oracle sums the operator Taylor series directly (no scipy
expm), and the partial-trace oracle contracts indices with explicit Python
loops.  Agreement between library and oracle is then evidence, not
tautology.
"""

import numpy as np
import pytest


def series_displacement(lam: complex, dim: int, pad: int = 24) -> np.ndarray:
    """exp(lam*a^dag - conj(lam)*a) by direct Taylor summation.

    Evaluated in a padded space so truncation of the generator does not
    contaminate the returned dim x dim block.
    """
    big = dim + pad
    a = np.diag(np.sqrt(np.arange(1.0, big)), k=1).astype(complex)
    gen = lam * a.conj().T - np.conj(lam) * a
    acc = np.eye(big, dtype=complex)
    term = np.eye(big, dtype=complex)
    for k in range(1, 400):
        term = term @ gen / k
        acc += term
        if np.abs(term).max() < 1e-18:
            break
    else:  # pragma: no cover - would mean the series failed to converge
        raise RuntimeError("displacement series did not converge")
    return acc[:dim, :dim]


def loop_partial_trace(mat: np.ndarray, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Reduced density matrix by explicit index loops (slow, obvious)."""
    if keep == "a":
        out = np.zeros((dim_a, dim_a), dtype=complex)
        for m in range(dim_a):
            for p in range(dim_a):
                for n in range(dim_b):
                    out[m, p] += mat[m * dim_b + n, p * dim_b + n]
        return out
    out = np.zeros((dim_b, dim_b), dtype=complex)
    for n in range(dim_b):
        for q in range(dim_b):
            for m in range(dim_a):
                out[n, q] += mat[m * dim_b + n, m * dim_b + q]
    return out


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(987123)
