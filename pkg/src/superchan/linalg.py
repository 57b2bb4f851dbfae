"""Dense complex-matrix kernel with multipartite index bookkeeping.

Operators live on a tensor product of finite-dimensional subsystems.  The
composite index is big-endian: the leftmost subsystem is the most significant
digit of the flattened row/column index, which is exactly numpy's C-order
reshape of ``dims + dims``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10


class NonHermitianMatrixError(ValueError):
    """Raised when a PSD test is asked about a clearly non-Hermitian matrix."""


class EigensolverError(RuntimeError):
    """Raised when the Hermitian eigensolver fails to converge."""


@dataclass(frozen=True)
class MultipartiteOperator:
    """A square complex matrix tagged with an ordered list of subsystem dims.

    The matrix side must equal the product of ``dims``.  Instances are
    immutable (the backing array is marked read-only) and safe to share
    across threads.
    """

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if any(d <= 0 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {dims}")
        mat = np.array(self.mat, dtype=np.complex128, order="C")
        side = math.prod(dims)
        if mat.shape != (side, side):
            raise ValueError(
                f"matrix shape {mat.shape} does not match dims {dims} (side {side})"
            )
        if not np.isfinite(mat).all():
            raise ValueError("matrix entries must be finite (no NaN/Inf)")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def side(self) -> int:
        return self.mat.shape[0]

    def tensor(self) -> np.ndarray:
        """View of the matrix with one row axis and one column axis per subsystem."""
        return self.mat.reshape(self.dims + self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def __repr__(self) -> str:  # keep huge matrices out of tracebacks
        return f"MultipartiteOperator(dims={self.dims}, side={self.side})"


def operator(mat, dims: Sequence[int]) -> MultipartiteOperator:
    """Wrap an array-like square matrix as a MultipartiteOperator."""
    return MultipartiteOperator(tuple(dims), np.asarray(mat, dtype=complex))


def identity_operator(dims: Sequence[int]) -> MultipartiteOperator:
    side = math.prod(dims)
    return MultipartiteOperator(tuple(dims), np.eye(side, dtype=complex))


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    """The matrix unit e_ij of size d (1 at row i, column j)."""
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


def max_entangled_projector(d: int) -> MultipartiteOperator:
    """Unnormalized projector sum_ij e_ij (x) e_ij on dims (d, d)."""
    psi = np.eye(d, dtype=complex).reshape(d * d)
    return MultipartiteOperator((d, d), np.outer(psi, psi.conj()))


def swap_operator(d: int) -> MultipartiteOperator:
    """The swap matrix sum_ij e_ij (x) e_ji on dims (d, d)."""
    m = np.eye(d * d, dtype=complex).reshape(d, d, d, d).transpose(0, 1, 3, 2)
    return MultipartiteOperator((d, d), m.reshape(d * d, d * d))


def kron(a: MultipartiteOperator, b: MultipartiteOperator) -> MultipartiteOperator:
    """Kronecker product; dims concatenate, consistent with big-endian flattening."""
    return MultipartiteOperator(a.dims + b.dims, np.kron(a.mat, b.mat))


def _check_subsystem(x: MultipartiteOperator, s: int) -> int:
    s = int(s)
    if not 0 <= s < len(x.dims):
        raise ValueError(f"subsystem index {s} out of range for dims {x.dims}")
    return s


def partial_trace(
    x: MultipartiteOperator, subsystems: int | Iterable[int]
) -> MultipartiteOperator:
    """Trace out the given subsystems; remaining dims keep their original order."""
    if isinstance(subsystems, (int, np.integer)):
        subsystems = (subsystems,)
    traced = sorted({_check_subsystem(x, s) for s in subsystems})
    t = x.tensor()
    dims = list(x.dims)
    for s in reversed(traced):
        t = np.trace(t, axis1=s, axis2=s + len(dims))
        dims.pop(s)
    side = math.prod(dims)
    return MultipartiteOperator(tuple(dims), np.asarray(t).reshape(side, side))


def partial_transpose(x: MultipartiteOperator, subsystem: int) -> MultipartiteOperator:
    """Transpose one subsystem in the computational basis (an involution)."""
    s = _check_subsystem(x, subsystem)
    n = len(x.dims)
    t = x.tensor()
    axes = list(range(2 * n))
    axes[s], axes[s + n] = axes[s + n], axes[s]
    return MultipartiteOperator(x.dims, t.transpose(axes).reshape(x.side, x.side))


def permute_subsystems(
    x: MultipartiteOperator, perm: Sequence[int]
) -> MultipartiteOperator:
    """Reorder subsystems so output subsystem k is input subsystem perm[k].

    Acts as conjugation by the corresponding permutation matrix; the spectrum
    and the multiset of entries are preserved.
    """
    perm = tuple(int(p) for p in perm)
    n = len(x.dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"malformed permutation {perm} for {n} subsystems")
    t = x.tensor().transpose(perm + tuple(p + n for p in perm))
    dims = tuple(x.dims[p] for p in perm)
    return MultipartiteOperator(dims, t.reshape(x.side, x.side))


def schur_product(
    a: MultipartiteOperator, b: MultipartiteOperator
) -> MultipartiteOperator:
    """Entrywise (Hadamard) product of two operators with identical dims."""
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    return MultipartiteOperator(a.dims, a.mat * b.mat)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, MultipartiteOperator):
        return x.mat
    m = np.asarray(x)
    if m.dtype != np.float64 and m.dtype != np.complex128:
        m = m.astype(complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_deviation(x) -> float:
    """Max-norm distance between a matrix and its conjugate transpose."""
    m = _as_matrix(x)
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def hermitian_eigenvalues(x) -> np.ndarray:
    """Eigenvalues of the symmetrization (x + x^dag)/2, ascending."""
    m = _as_matrix(x)
    try:
        return np.linalg.eigvalsh((m + m.conj().T) / 2)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails here
        raise EigensolverError(f"Hermitian eigensolver failed: {exc}") from exc


def min_eigenvalue(x) -> float:
    """Smallest eigenvalue of the symmetrized matrix."""
    return float(hermitian_eigenvalues(x)[0])


def is_hermitian(x, tol: float = DEFAULT_TOL) -> bool:
    m = _as_matrix(x)
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    return hermiticity_deviation(m) <= tol * scale


def is_psd(x, tol: float = DEFAULT_TOL) -> bool:
    """Positive-semidefiniteness test on the symmetrized matrix.

    Accepts iff the minimum eigenvalue is >= -tol * max(1, largest |eigenvalue|).
    Grossly non-Hermitian input is rejected with NonHermitianMatrixError rather
    than silently symmetrized.
    """
    m = _as_matrix(x)
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    if hermiticity_deviation(m) > tol * scale:
        raise NonHermitianMatrixError(
            f"matrix is not Hermitian within tolerance {tol}"
        )
    evals = hermitian_eigenvalues(m)
    bound = max(1.0, float(np.abs(evals).max()))
    return float(evals[0]) >= -tol * bound


def psd_report(x, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """(is_psd, min eigenvalue) without raising on non-Hermitian input.

    Hermiticity is folded into the verdict: a matrix further than tol from its
    adjoint is reported as not PSD.
    """
    m = _as_matrix(x)
    evals = hermitian_eigenvalues(m)
    bound = max(1.0, float(np.abs(evals).max()))
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    hermitian_ok = hermiticity_deviation(m) <= tol * scale
    return hermitian_ok and float(evals[0]) >= -tol * bound, float(evals[0])


def matrix_to_json(x: MultipartiteOperator) -> dict:
    """JSON form {"dims": [...], "data": [[re, im], ...]} (row-major)."""
    flat = x.mat.reshape(-1)
    return {
        "dims": list(x.dims),
        "data": [[float(v.real), float(v.imag)] for v in flat],
    }


def matrix_from_json(obj: dict) -> MultipartiteOperator:
    if not isinstance(obj, dict) or "dims" not in obj or "data" not in obj:
        raise ValueError("matrix JSON must contain 'dims' and 'data'")
    dims = tuple(int(d) for d in obj["dims"])
    side = math.prod(dims)
    data = obj["data"]
    if len(data) != side * side:
        raise ValueError(
            f"matrix JSON data has {len(data)} entries, expected {side * side}"
        )
    flat = np.array(
        [complex(float(re), float(im)) for re, im in data], dtype=complex
    )
    return MultipartiteOperator(dims, flat.reshape(side, side))
