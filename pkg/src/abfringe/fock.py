"""Truncated Fock-space linear algebra.

Ladder operators, displacement operators, tensor products and partial traces
over the photon-number basis {|0>, ..., |dim-1>}, as dense complex numpy
arrays.  Two-mode objects follow the convention that the first mode's index
varies slowest: the basis ket |m, n> sits at position m * dim_b + n.

Displacement operators come in two independent constructions: a matrix
exponential of the anti-Hermitian generator, and analytic matrix elements

    <m|D(lam)|n> = sqrt(n!/m!) lam^(m-n) exp(-|lam|^2/2) L_n^(m-n)(|lam|^2)

for m >= n, extended to m < n by D(lam)^dag = D(-lam).  The associated
Laguerre polynomials are evaluated by upward three-term recurrence in the
degree, and the factorial ratio through log-gamma differences so that large
dimensions do not overflow.  Having two routes makes truncation artifacts
observable: entries of the analytic construction are exact, while the
exponential route is exact only in the limit of infinite dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import ConvergenceError, DimensionError, TruncationError

__all__ = [
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "make_annihilation",
    "make_creation",
    "displacement_exp",
    "displacement_analytic",
    "tensor",
    "partial_trace",
    "converge_scalar",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Adaptive truncation control.

    A quantity is computed at ``initial_dim``, recomputed at twice that
    dimension, and accepted once the two results differ by less than ``tol``;
    otherwise the dimension keeps doubling.  Failing to converge at or below
    ``max_dim`` is an error, never a silent approximation.
    """

    initial_dim: int = 16
    max_dim: int = 256
    tol: float = 1e-12

    def __post_init__(self) -> None:
        if not isinstance(self.initial_dim, int) or self.initial_dim < 2:
            raise DimensionError(
                f"initial_dim must be an integer >= 2, got {self.initial_dim!r}"
            )
        if not isinstance(self.max_dim, int) or self.max_dim < self.initial_dim:
            raise DimensionError(
                f"max_dim must be an integer >= initial_dim, got {self.max_dim!r}"
            )
        if not (float(self.tol) > 0.0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")


DEFAULT_POLICY = TruncationPolicy()


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise DimensionError(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def make_annihilation(dim: int) -> np.ndarray:
    """Annihilation operator on a dim-dimensional number basis.

    The only nonzero entries are <m|a|m+1> = sqrt(m+1).
    """
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1).astype(complex)


def make_creation(dim: int) -> np.ndarray:
    """Creation operator, the adjoint of :func:`make_annihilation`."""
    return make_annihilation(dim).conj().T


def _check_lam(lam: complex) -> complex:
    lam = complex(lam)
    if not (np.isfinite(lam.real) and np.isfinite(lam.imag)):
        raise ValueError(f"displacement argument must be finite, got {lam!r}")
    return lam


def displacement_exp(lam: complex, dim: int) -> np.ndarray:
    """Displacement operator D(lam) = exp(lam a^dag - conj(lam) a).

    Built by exponentiating the truncated anti-Hermitian generator
    (scaling-and-squaring), so it is exactly unitary on the truncated space
    but its entries carry truncation error near the top of the basis.
    """
    lam = _check_lam(lam)
    dim = _check_dim(dim)
    a = make_annihilation(dim)
    return expm(lam * a.conj().T - np.conj(lam) * a)


def _laguerre_table(x: float, dim: int) -> np.ndarray:
    """Table L[n, k] = L_n^(k)(x) for 0 <= n, k < dim.

    Upward recurrence in the degree n, vectorized over the order k:
    n L_n^(k) = (2n - 1 + k - x) L_{n-1}^(k) - (n - 1 + k) L_{n-2}^(k).
    """
    table = np.zeros((dim, dim))
    k = np.arange(dim, dtype=float)
    table[0] = 1.0
    if dim > 1:
        table[1] = 1.0 + k - x
    for n in range(2, dim):
        table[n] = ((2.0 * n - 1.0 + k - x) * table[n - 1]
                    - (n - 1.0 + k) * table[n - 2]) / n
    return table


@lru_cache(maxsize=32)
def _displacement_amplitude(x: float, dim: int) -> np.ndarray:
    """Phase-free part of the analytic displacement matrix at |lam|^2 = x.

    amp[m, n] = sqrt(min(m,n)! / max(m,n)!) exp(-x/2) L_min^(|m-n|)(x); the
    matrix is symmetric and depends on lam only through x, so it is cached
    and reused across evaluation times.
    """
    idx = np.arange(dim)
    lo = np.minimum.outer(idx, idx)
    hi = np.maximum.outer(idx, idx)
    order = hi - lo
    log_ratio = 0.5 * (gammaln(lo + 1.0) - gammaln(hi + 1.0))
    table = _laguerre_table(x, dim)
    amp = np.exp(log_ratio - 0.5 * x) * table[lo, order]
    amp.setflags(write=False)
    return amp


def displacement_analytic(lam: complex, dim: int) -> np.ndarray:
    """Displacement operator from analytic matrix elements.

    Every entry equals the infinite-dimensional matrix element of D(lam), so
    traces against states supported inside the truncation are exact.
    """
    lam = _check_lam(lam)
    dim = _check_dim(dim)
    amp = _displacement_amplitude(abs(lam) ** 2, dim)
    steps = np.subtract.outer(np.arange(dim), np.arange(dim))
    raising = lam ** np.arange(dim)            # lam^(m-n) for m >= n
    lowering = (-np.conj(lam)) ** np.arange(dim)  # (-conj(lam))^(n-m) for m < n
    phase = np.where(steps >= 0, raising[np.abs(steps)], lowering[np.abs(steps)])
    return amp * phase


def tensor(a: np.ndarray, b: np.ndarray,
           policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Kronecker product with the first factor's index varying slowest.

    The result dimension is capped at policy.max_dim per mode, i.e. at
    max_dim**2 overall; beyond that the computation refuses to proceed.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    for mat in (a, b):
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"tensor factors must be square, got shape {mat.shape}")
    joint = a.shape[0] * b.shape[0]
    if joint > policy.max_dim ** 2:
        raise TruncationError(
            f"tensor result dimension {joint} exceeds the policy budget "
            f"{policy.max_dim}^2 = {policy.max_dim ** 2}"
        )
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one mode of a two-mode operator.

    ``dims`` gives (dim_a, dim_b); ``keep`` selects the surviving mode,
    "a" or "b".  Acts on plain matrices so it can be applied to operators
    as well as states.
    """
    rho = np.asarray(rho)
    dim_a, dim_b = int(dims[0]), int(dims[1])
    if dim_a < 1 or dim_b < 1:
        raise DimensionError(f"mode dimensions must be positive, got {dims!r}")
    if rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionError(
            f"operator shape {rho.shape} does not match dims {dim_a}x{dim_b}"
        )
    blocks = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "a":
        return np.trace(blocks, axis1=1, axis2=3)
    if keep == "b":
        return np.trace(blocks, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def converge_scalar(evaluate: Callable[[int], complex],
                    policy: TruncationPolicy = DEFAULT_POLICY,
                    min_dim: int = 2) -> complex:
    """Evaluate a dimension-dependent scalar under the truncation policy.

    Runs ``evaluate(dim)`` starting from max(policy.initial_dim, min_dim),
    doubling until two successive results agree to policy.tol, and returns
    the finer of the agreeing pair.  Raises ConvergenceError if agreement is
    not reached with the doubled dimension still within policy.max_dim.
    """
    dim = max(policy.initial_dim, int(min_dim))
    if dim > policy.max_dim:
        raise TruncationError(
            f"starting dimension {dim} already exceeds max_dim {policy.max_dim}"
        )
    value = evaluate(dim)
    while True:
        finer_dim = 2 * dim
        if finer_dim > policy.max_dim:
            raise ConvergenceError(
                f"no convergence to tol={policy.tol:g} at dim {dim} "
                f"(next dim {finer_dim} exceeds max_dim {policy.max_dim})"
            )
        finer = evaluate(finer_dim)
        if abs(finer - value) < policy.tol:
            return finer
        dim, value = finer_dim, finer
