"""Two-mode field states.

Constructors for the reference separable and entangled single-photon states,
products of arbitrary single-mode densities, JSON loading, validation, and a
positive-partial-transpose entanglement witness.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, StateFormatError, StateValidationError

__all__ = [
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "POSITIVITY_FLOOR",
    "CorrelationClass",
    "TwoModeState",
    "validate_density_matrix",
    "make_rho_sep",
    "make_rho_ent",
    "make_product",
    "ppt_min_eigenvalue",
    "classify",
    "load_state",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_FLOOR = -1e-10


def _support_min_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    Restricted to the rows/columns that carry any weight; the zero complement
    contributes eigenvalue 0 exactly, which keeps validation cheap for states
    embedded in large truncated spaces.
    """
    weight = np.abs(matrix).sum(axis=0) + np.abs(matrix).sum(axis=1)
    support = np.flatnonzero(weight)
    if support.size == 0:
        return 0.0
    block = matrix[np.ix_(support, support)]
    smallest = float(np.linalg.eigvalsh(block)[0])
    if support.size < matrix.shape[0]:
        smallest = min(smallest, 0.0)
    return smallest


def validate_density_matrix(matrix: np.ndarray, name: str = "state") -> None:
    """Check the density-matrix invariants, naming the first one that fails.

    Hermiticity to 1e-12, unit trace to 1e-12, and smallest eigenvalue no
    lower than -1e-10.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StateValidationError(f"{name}: matrix must be square, got {matrix.shape}")
    if not np.all(np.isfinite(matrix.view(float))):
        raise StateValidationError(f"{name}: matrix contains non-finite entries")
    herm = np.abs(matrix - matrix.conj().T).max()
    if herm > HERMITICITY_TOL:
        raise StateValidationError(
            f"{name}: hermiticity violated, max |M - M^dag| = {herm:.3e}"
        )
    tr = complex(np.trace(matrix))
    if abs(tr - 1.0) > TRACE_TOL:
        raise StateValidationError(f"{name}: trace must be 1, got {tr:.15g}")
    smallest = _support_min_eigenvalue(matrix)
    if smallest < POSITIVITY_FLOOR:
        raise StateValidationError(
            f"{name}: positivity violated, min eigenvalue = {smallest:.3e}"
        )


class CorrelationClass(enum.Enum):
    """Coarse correlation classification of a two-mode state.

    Factorizable states are products; separable states are convex mixtures of
    products (every factorizable state is separable); a negative partial
    transpose certifies entanglement; anything else is left undetermined
    rather than guessed.
    """

    FACTORIZABLE = "factorizable"
    SEPARABLE = "separable"
    ENTANGLED_BY_PPT_WITNESS = "entangled-by-ppt-witness"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Validated two-mode density matrix with its per-mode dimensions."""

    matrix: np.ndarray
    dim_a: int
    dim_b: int
    label: str = ""

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", matrix)
        if self.dim_a < 2 or self.dim_b < 2:
            raise DimensionError(
                f"mode dimensions must be >= 2, got ({self.dim_a}, {self.dim_b})"
            )
        expected = self.dim_a * self.dim_b
        if matrix.shape != (expected, expected):
            raise DimensionError(
                f"matrix shape {matrix.shape} does not match "
                f"dims {self.dim_a} x {self.dim_b}"
            )
        validate_density_matrix(matrix, name=self.label or "two-mode state")

    def reshaped(self) -> np.ndarray:
        """View as a rank-4 tensor rho[m, n, p, q] = <m n|rho|p q>."""
        return self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def marginal(self, keep: str) -> np.ndarray:
        """Reduced single-mode density matrix of mode 'a' or 'b'."""
        blocks = self.reshaped()
        if keep == "a":
            return np.trace(blocks, axis1=1, axis2=3)
        if keep == "b":
            return np.trace(blocks, axis1=0, axis2=2)
        raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def make_rho_sep(dim: int = 2) -> TwoModeState:
    """Equal classical mixture of |0 1> and |1 0>, embedded at per-mode dim."""
    if dim < 2:
        raise DimensionError(f"per-mode dimension must be >= 2, got {dim}")
    matrix = np.zeros((dim * dim, dim * dim), dtype=complex)
    i01 = 1          # |0 1>
    i10 = dim        # |1 0>
    matrix[i01, i01] = 0.5
    matrix[i10, i10] = 0.5
    return TwoModeState(matrix, dim, dim, label="sep")


def make_rho_ent(dim: int = 2) -> TwoModeState:
    """Maximally entangled single-photon state (|0 1> + |1 0>)/sqrt(2)."""
    if dim < 2:
        raise DimensionError(f"per-mode dimension must be >= 2, got {dim}")
    matrix = make_rho_sep(dim).matrix.copy()
    i01, i10 = 1, dim
    matrix[i01, i10] = 0.5
    matrix[i10, i01] = 0.5
    return TwoModeState(matrix, dim, dim, label="ent")


def make_product(rho_a: np.ndarray, rho_b: np.ndarray,
                 label: str = "product") -> TwoModeState:
    """Product state rho_a ⊗ rho_b from two single-mode density matrices."""
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    validate_density_matrix(rho_a, name="mode-a factor")
    validate_density_matrix(rho_b, name="mode-b factor")
    matrix = np.kron(rho_a, rho_b)
    return TwoModeState(matrix, rho_a.shape[0], rho_b.shape[0], label=label)


def _partial_transpose_b(state: TwoModeState) -> np.ndarray:
    blocks = state.reshaped()
    return blocks.transpose(0, 3, 2, 1).reshape(state.matrix.shape)


def ppt_min_eigenvalue(state: TwoModeState) -> float:
    """Smallest eigenvalue of the partial transpose over mode b.

    Negative values witness entanglement; non-negative values are
    inconclusive in general.
    """
    return _support_min_eigenvalue(_partial_transpose_b(state))


def classify(state: TwoModeState) -> CorrelationClass:
    """Classify a state, preferring certainty over optimism.

    A negative partial transpose certifies entanglement.  A state equal to
    the product of its own marginals is factorizable.  A state diagonal in
    the two-mode number basis is a mixture of products, hence separable.
    Everything else stays undetermined.
    """
    if ppt_min_eigenvalue(state) < POSITIVITY_FLOOR:
        return CorrelationClass.ENTANGLED_BY_PPT_WITNESS
    product = np.kron(state.marginal("a"), state.marginal("b"))
    if np.abs(state.matrix - product).max() <= 1e-12:
        return CorrelationClass.FACTORIZABLE
    off_diagonal = state.matrix - np.diag(np.diag(state.matrix))
    if np.abs(off_diagonal).max() <= 1e-12:
        return CorrelationClass.SEPARABLE
    return CorrelationClass.UNDETERMINED


# ---------------------------------------------------------------------------
# JSON state files
# ---------------------------------------------------------------------------
#
# {"dims": [Na, Nb],
#  "entries": [{"bra": [m, n], "ket": [p, q], "re": x, "im": y}, ...]}
#
# Indices are zero-based; omitted entries are zero; "re"/"im" default to 0.
# Declaring one side of an off-diagonal pair is enough, the conjugate is
# filled in automatically; declaring both sides inconsistently (beyond 1e-9)
# is rejected.

_CONTRADICTION_TOL = 1e-9


def _entry_value(raw: dict, pos: int) -> complex:
    try:
        re = float(raw.get("re", 0.0))
        im = float(raw.get("im", 0.0))
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"entry {pos}: re/im must be numbers") from exc
    return complex(re, im)


def _entry_index(raw: dict, key: str, pos: int, dims: tuple[int, int]) -> int:
    try:
        m, n = raw[key]
        m, n = int(m), int(n)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFormatError(
            f"entry {pos}: {key!r} must be a pair of integers"
        ) from exc
    if not (0 <= m < dims[0] and 0 <= n < dims[1]):
        raise StateFormatError(
            f"entry {pos}: index {key}=[{m}, {n}] outside dims {list(dims)}"
        )
    return m * dims[1] + n


def load_state(text: str, label: str = "file") -> TwoModeState:
    """Parse a JSON state document into a validated TwoModeState."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFormatError("top level must be a JSON object")
    dims_raw = doc.get("dims")
    if (not isinstance(dims_raw, list) or len(dims_raw) != 2
            or not all(isinstance(d, int) for d in dims_raw)):
        raise StateFormatError('"dims" must be a pair of integers')
    dim_a, dim_b = dims_raw
    if dim_a < 2 or dim_b < 2:
        raise StateFormatError(f"dims must each be >= 2, got {dims_raw}")
    entries = doc.get("entries", [])
    if not isinstance(entries, list):
        raise StateFormatError('"entries" must be a list')

    size = dim_a * dim_b
    matrix = np.zeros((size, size), dtype=complex)
    declared: dict[tuple[int, int], complex] = {}
    for pos, raw in enumerate(entries):
        if not isinstance(raw, dict):
            raise StateFormatError(f"entry {pos}: must be an object")
        row = _entry_index(raw, "bra", pos, (dim_a, dim_b))
        col = _entry_index(raw, "ket", pos, (dim_a, dim_b))
        value = _entry_value(raw, pos)
        if (row, col) in declared and abs(declared[row, col] - value) > _CONTRADICTION_TOL:
            raise StateFormatError(
                f"entry {pos}: duplicate declaration of ({row}, {col}) "
                f"contradicts an earlier value"
            )
        declared[row, col] = value

    for (row, col), value in declared.items():
        if row == col:
            if abs(value.imag) > _CONTRADICTION_TOL:
                raise StateFormatError(
                    f"diagonal entry ({row}, {row}) has imaginary part "
                    f"{value.imag:.3e}"
                )
            matrix[row, col] = value
            continue
        mirror = declared.get((col, row))
        if mirror is not None and abs(mirror - np.conj(value)) > _CONTRADICTION_TOL:
            raise StateFormatError(
                f"entries ({row}, {col}) and ({col}, {row}) contradict "
                f"Hermiticity beyond {_CONTRADICTION_TOL:g}"
            )
        matrix[row, col] = value
        matrix[col, row] = np.conj(value) if mirror is None else mirror

    matrix = 0.5 * (matrix + matrix.conj().T)
    return TwoModeState(matrix, dim_a, dim_b, label=label)
