"""Quantum channels as Choi matrices.

A channel Phi: M_{d_in} -> M_{d_out} is stored through its Choi matrix
C = sum_ij e_ij (x) Phi(e_ij) on subsystem dims (d_in, d_out).  Validity
(CP via positivity, TP via the input marginal) is checked on demand, never
at construction, so invalid Chois can be carried around for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    MultipartiteOperator,
    hermiticity_deviation,
    hermitian_eigenvalues,
    max_entangled_projector,
    partial_trace,
    psd_report,
    swap_operator,
)

PARAM_EDGE_TOL = 1e-12  # slack for closed parameter intervals


@dataclass(frozen=True)
class ChoiChannel:
    """A linear map between matrix algebras, held as its Choi matrix."""

    d_in: int
    d_out: int
    choi: MultipartiteOperator

    def __post_init__(self) -> None:
        if self.choi.dims != (self.d_in, self.d_out):
            raise ValueError(
                f"choi dims {self.choi.dims} do not match ({self.d_in}, {self.d_out})"
            )

    def choi4(self) -> np.ndarray:
        """Choi as a 4-tensor [in, out, in', out']."""
        d0, d1 = self.d_in, self.d_out
        return self.choi.mat.reshape(d0, d1, d0, d1)


def choi_channel(mat, d_in: int, d_out: int) -> ChoiChannel:
    return ChoiChannel(d_in, d_out, MultipartiteOperator((d_in, d_out), np.asarray(mat, dtype=complex)))


def choi_from_kraus(kraus_ops, d_in: int | None = None, d_out: int | None = None) -> ChoiChannel:
    """Assemble the Choi matrix of X -> sum_k K X K^dag from Kraus operators."""
    ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
    if not ops:
        raise ValueError("at least one Kraus operator is required")
    rows, cols = ops[0].shape
    d_in = cols if d_in is None else d_in
    d_out = rows if d_out is None else d_out
    c = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in ops:
        # vec_r(K) vec_r(K)^dag with row-major vec matches C = sum e_ij (x) K e_ij K^dag
        v = k.T.reshape(-1, 1)
        c += v @ v.conj().T
    return choi_channel(c, d_in, d_out)


def apply_channel(ch: ChoiChannel, rho) -> MultipartiteOperator:
    """Apply the channel: Phi(rho) = Tr_in[(rho^T (x) I) C]."""
    r = rho.mat if isinstance(rho, MultipartiteOperator) else np.asarray(rho, dtype=complex)
    if r.shape != (ch.d_in, ch.d_in):
        raise ValueError(f"state side {r.shape} does not match d_in={ch.d_in}")
    out = np.einsum("ij,iajb->ab", r, ch.choi4())
    return MultipartiteOperator((ch.d_out,), out)


def compose_channels(f: ChoiChannel, g: ChoiChannel) -> ChoiChannel:
    """Choi matrix of f o g, by pushing matrix units through g then f."""
    if g.d_out != f.d_in:
        raise ValueError(f"cannot compose: g.d_out={g.d_out} != f.d_in={f.d_in}")
    c = np.einsum("kmln,manb->kalb", g.choi4(), f.choi4())
    return choi_channel(c.reshape(g.d_in * f.d_out, g.d_in * f.d_out), g.d_in, f.d_out)


@dataclass(frozen=True)
class ChannelVerdict:
    """Diagnostic result of a channel validity check."""

    is_cp: bool
    is_tp: bool
    min_eigenvalue: float
    marginal_deviation: float
    hermiticity_deviation: float

    @property
    def ok(self) -> bool:
        return self.is_cp and self.is_tp

    def report(self) -> dict:
        return {
            "is_cp": self.is_cp,
            "is_tp": self.is_tp,
            "min_eig": self.min_eigenvalue,
            "marginal_deviation": self.marginal_deviation,
            "hermiticity_deviation": self.hermiticity_deviation,
        }


def validate_channel(ch: ChoiChannel, tol: float = DEFAULT_TOL) -> ChannelVerdict:
    """CP iff the Choi is PSD; TP iff the output marginal equals the identity."""
    cp_ok, min_eig = psd_report(ch.choi.mat, tol)
    herm = hermiticity_deviation(ch.choi.mat)
    marg = partial_trace(ch.choi, 1).mat - np.eye(ch.d_in)
    marg_dev = float(np.abs(marg).max())
    return ChannelVerdict(cp_ok, marg_dev <= tol, min_eig, marg_dev, herm)


def classical_channel_extract(ch: ChoiChannel) -> np.ndarray:
    """The stochastic matrix S[a, i] = <i a|C|i a> of diagonal Choi entries.

    For a valid channel S is column stochastic (columns indexed by the input).
    """
    c4 = ch.choi4()
    s = np.empty((ch.d_out, ch.d_in))
    for i in range(ch.d_in):
        for a in range(ch.d_out):
            s[a, i] = c4[i, a, i, a].real
    return s


# ---------------------------------------------------------------------------
# Standard channels
# ---------------------------------------------------------------------------


def _check_unit_interval(name: str, value: float) -> float:
    if not -PARAM_EDGE_TOL <= value <= 1.0 + PARAM_EDGE_TOL:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def identity_channel(d: int) -> ChoiChannel:
    return ChoiChannel(d, d, max_entangled_projector(d))


def depolarizing(d: int) -> ChoiChannel:
    """Completely depolarizing channel X -> Tr(X) I/d."""
    return choi_channel(np.eye(d * d, dtype=complex) / d, d, d)


def transpose_map(d: int) -> ChoiChannel:
    """The transposition map (not CP); its Choi is the swap matrix."""
    return ChoiChannel(d, d, swap_operator(d))


def amplitude_damping(gamma: float) -> ChoiChannel:
    g = _check_unit_interval("gamma", gamma)
    s = math.sqrt(max(0.0, 1.0 - g))
    c = np.array(
        [
            [1, 0, 0, s],
            [0, 0, 0, 0],
            [0, 0, g, 0],
            [s, 0, 0, 1 - g],
        ],
        dtype=complex,
    )
    return choi_channel(c, 2, 2)


def bit_flip(p: float) -> ChoiChannel:
    q = _check_unit_interval("p", p)
    c = np.array(
        [
            [1 - q, 0, 0, 1 - q],
            [0, q, q, 0],
            [0, q, q, 0],
            [1 - q, 0, 0, 1 - q],
        ],
        dtype=complex,
    )
    return choi_channel(c, 2, 2)


PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli_channel(probs) -> ChoiChannel:
    """Mixture of Pauli conjugations X -> sum_a p_a sigma_a X sigma_a."""
    p = np.asarray(probs, dtype=float)
    if p.shape != (4,):
        raise ValueError("pauli_channel expects four probabilities")
    if p.min() < -PARAM_EDGE_TOL or abs(p.sum() - 1.0) > PARAM_EDGE_TOL:
        raise ValueError(f"{p} is not a probability vector")
    return choi_from_kraus([math.sqrt(max(v, 0.0)) * s for v, s in zip(p, PAULI)])


def check_covariance_matrix(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a dephasing covariance matrix: PSD with unit diagonal."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("covariance matrix must be square")
    ok, min_eig = psd_report(m, tol)
    if not ok:
        raise ValueError(f"covariance matrix is not PSD (min eig {min_eig:.3e})")
    if np.abs(np.diagonal(m) - 1.0).max() > tol:
        raise ValueError("covariance matrix must have unit diagonal")
    return m


def dephasing_channel(m) -> ChoiChannel:
    """Schur-product channel X -> M o X for a covariance matrix M."""
    m = check_covariance_matrix(m)
    d = m.shape[0]
    c = np.zeros((d * d, d * d), dtype=complex)
    c4 = c.reshape(d, d, d, d)
    for i in range(d):
        for j in range(d):
            c4[i, i, j, j] = m[i, j]
    return choi_channel(c, d, d)


# ---------------------------------------------------------------------------
# Covariant channel families (group-symmetric one-parameter mixtures)
# ---------------------------------------------------------------------------


def _mix(coeffs_channels, d: int) -> ChoiChannel:
    c = sum(w * ch.choi.mat for w, ch in coeffs_channels)
    return choi_channel(c, d, d)


def unitary_covariant(lam: float, d: int) -> ChoiChannel:
    """lam * id + (1 - lam) * depolarizing; CP for lam in [-1/(d^2-1), 1]."""
    lo = -1.0 / (d * d - 1)
    if not lo - PARAM_EDGE_TOL <= lam <= 1.0 + PARAM_EDGE_TOL:
        raise ValueError(f"lambda={lam} outside CP range [{lo}, 1] for d={d}")
    return _mix([(lam, identity_channel(d)), (1 - lam, depolarizing(d))], d)


def conjugate_covariant(mu: float, d: int) -> ChoiChannel:
    """mu * transpose + (1 - mu) * depolarizing; CP for mu in [-1/(d-1), 1/(d+1)]."""
    lo, hi = -1.0 / (d - 1), 1.0 / (d + 1)
    if not lo - PARAM_EDGE_TOL <= mu <= hi + PARAM_EDGE_TOL:
        raise ValueError(f"mu={mu} outside CP range [{lo}, {hi}] for d={d}")
    return _mix([(mu, transpose_map(d)), (1 - mu, depolarizing(d))], d)


def holevo_werner(d: int) -> ChoiChannel:
    """rho -> (Tr(rho) I - rho^T)/(d-1), the extreme conjugate-covariant channel."""
    if d < 2:
        raise ValueError("holevo_werner requires d >= 2")
    c = (np.eye(d * d, dtype=complex) - swap_operator(d).mat) / (d - 1)
    return choi_channel(c, d, d)


def orthogonal_covariant(alpha: float, beta: float, d: int) -> ChoiChannel:
    """(1-a-b) id + a D + b T; CP for a >= d|b| and d(1-a-b) + a/d + b >= 0."""
    if alpha < d * abs(beta) - PARAM_EDGE_TOL:
        raise ValueError(f"need alpha >= d|beta|: alpha={alpha}, beta={beta}, d={d}")
    if d * (1 - alpha - beta) + alpha / d + beta < -PARAM_EDGE_TOL:
        raise ValueError(
            f"need d(1-a-b) + a/d + b >= 0: alpha={alpha}, beta={beta}, d={d}"
        )
    return _mix(
        [
            (1 - alpha - beta, identity_channel(d)),
            (alpha, depolarizing(d)),
            (beta, transpose_map(d)),
        ],
        d,
    )


# ---------------------------------------------------------------------------
# Channels covariant under diagonal groups: coefficient-table families
# ---------------------------------------------------------------------------


def _check_table(name: str, t, d: int, real: bool = False) -> np.ndarray:
    arr = np.asarray(t, dtype=float if real else complex)
    if arr.shape != (d, d):
        raise ValueError(f"{name} must be {d}x{d}, got {arr.shape}")
    return arr


def _zero_diagonal(name: str, arr: np.ndarray) -> np.ndarray:
    if np.abs(np.diagonal(arr)).max() > 0:
        raise ValueError(f"{name} must vanish on the diagonal (off-diagonal support)")
    return arr


@dataclass(frozen=True)
class DUChannelParams:
    """Tables (A, B) of a diagonal-unitary covariant map.

    The map acts as X -> sum_ij A_ij e_ij X e_ji + sum_{i!=j} B_ij e_ii X e_jj.
    B has off-diagonal support only.
    """

    d: int
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _check_table("A", self.A, self.d, real=True))
        object.__setattr__(self, "B", _zero_diagonal("B", _check_table("B", self.B, self.d)))


@dataclass(frozen=True)
class ConjDUChannelParams:
    """Tables (A, C) of a conjugate diagonal-unitary covariant map.

    The map acts as X -> sum_ij A_ij e_ij X e_ji + sum_{i!=j} C_ij e_ii X^T e_jj.
    """

    d: int
    A: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _check_table("A", self.A, self.d, real=True))
        object.__setattr__(self, "C", _zero_diagonal("C", _check_table("C", self.C, self.d)))


@dataclass(frozen=True)
class DOChannelParams:
    """Tables (A, B, C) of a diagonal-orthogonal covariant map (both terms)."""

    d: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _check_table("A", self.A, self.d, real=True))
        object.__setattr__(self, "B", _zero_diagonal("B", _check_table("B", self.B, self.d)))
        object.__setattr__(self, "C", _zero_diagonal("C", _check_table("C", self.C, self.d)))


def du_identity_channel_params(d: int) -> DUChannelParams:
    ones = np.ones((d, d)) - np.eye(d)
    return DUChannelParams(d, np.eye(d), ones.astype(complex))


def _diagonal_family_choi(d, a, b=None, c=None) -> ChoiChannel:
    choi = np.zeros((d * d, d * d), dtype=complex)
    c4 = choi.reshape(d, d, d, d)
    for k in range(d):
        for i in range(d):
            c4[k, i, k, i] = a[i, k]
    if b is not None:
        for k in range(d):
            for l in range(d):
                if k != l:
                    c4[k, k, l, l] = b[k, l]
    if c is not None:
        for k in range(d):
            for l in range(d):
                if k != l:
                    c4[k, l, l, k] = c[l, k]
    return choi_channel(choi, d, d)


def du_channel(params: DUChannelParams) -> ChoiChannel:
    return _diagonal_family_choi(params.d, params.A, b=params.B)


def conj_du_channel(params: ConjDUChannelParams) -> ChoiChannel:
    return _diagonal_family_choi(params.d, params.A, c=params.C)


def do_channel(params: DOChannelParams) -> ChoiChannel:
    return _diagonal_family_choi(params.d, params.A, b=params.B, c=params.C)


@dataclass(frozen=True)
class DUChannelVerdict:
    """Named closed-form checks for table-parameterized channels."""

    a_nonnegative: bool
    b_psd: bool
    pair_condition: bool
    column_stochastic: bool
    min_a_entry: float
    b_min_eigenvalue: float
    pair_violation: float
    column_deviation: float

    @property
    def is_cp(self) -> bool:
        return self.a_nonnegative and self.b_psd and self.pair_condition

    @property
    def is_tp(self) -> bool:
        return self.column_stochastic

    @property
    def ok(self) -> bool:
        return self.is_cp and self.is_tp

    def report(self) -> dict:
        return {
            "a_nonnegative": self.a_nonnegative,
            "b_psd": self.b_psd,
            "pair_condition": self.pair_condition,
            "column_stochastic": self.column_stochastic,
            "min_a_entry": self.min_a_entry,
            "b_min_eig": self.b_min_eigenvalue,
            "pair_violation": self.pair_violation,
            "column_deviation": self.column_deviation,
        }


def _b_with_diagonal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    bb = np.array(b, dtype=complex)
    np.fill_diagonal(bb, np.diagonal(a))
    return bb


def _pair_violation(a: np.ndarray, c: np.ndarray) -> float:
    """Worst violation of |C_ij|^2 <= A_ij A_ji over i != j."""
    worst = 0.0
    d = a.shape[0]
    for i in range(d):
        for j in range(d):
            if i != j:
                worst = max(worst, abs(c[i, j]) ** 2 - a[i, j] * a[j, i])
    return worst


def _table_verdict(a, b, c, tol: float) -> DUChannelVerdict:
    min_a = float(a.min())
    if b is not None:
        evals = hermitian_eigenvalues(_b_with_diagonal(a, b))
        b_min = float(evals[0])
        b_ok = b_min >= -tol * max(1.0, float(np.abs(evals).max()))
        b_herm = hermiticity_deviation(_b_with_diagonal(a, b)) <= tol * max(
            1.0, float(np.abs(b).max()) if b.size else 1.0
        )
        b_ok = b_ok and b_herm
    else:
        b_min, b_ok = 0.0, True
    if c is not None:
        pair = _pair_violation(a, c)
        pair_ok = pair <= tol and hermiticity_deviation(c) <= tol * max(
            1.0, float(np.abs(c).max()) if c.size else 1.0
        )
    else:
        pair, pair_ok = 0.0, True
    col_dev = float(np.abs(a.sum(axis=0) - 1.0).max())
    return DUChannelVerdict(
        a_nonnegative=min_a >= -tol,
        b_psd=b_ok,
        pair_condition=pair_ok,
        column_stochastic=col_dev <= tol,
        min_a_entry=min_a,
        b_min_eigenvalue=b_min,
        pair_violation=pair,
        column_deviation=col_dev,
    )


def du_channel_validate(params: DUChannelParams, tol: float = DEFAULT_TOL) -> DUChannelVerdict:
    """CP iff A >= 0 entrywise and B-with-A-diagonal is PSD; TP iff A columns sum to 1."""
    return _table_verdict(params.A, params.B, None, tol)


def conj_du_channel_validate(
    params: ConjDUChannelParams, tol: float = DEFAULT_TOL
) -> DUChannelVerdict:
    """CP iff A >= 0 and |C_ij|^2 <= A_ij A_ji; TP iff A columns sum to 1."""
    return _table_verdict(params.A, None, params.C, tol)


def do_channel_validate(params: DOChannelParams, tol: float = DEFAULT_TOL) -> DUChannelVerdict:
    """Union of the two diagonal-family closed forms."""
    return _table_verdict(params.A, params.B, params.C, tol)


def du_channel_compose(p: DUChannelParams, q: DUChannelParams) -> DUChannelParams:
    """Parameters of (p o q): matrix product on A, Hadamard product on B."""
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} vs {q.d}")
    b = p.B * q.B
    np.fill_diagonal(b, 0.0)
    return DUChannelParams(p.d, p.A @ q.A, b)
