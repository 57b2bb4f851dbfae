"""Pauli superchannels: mixtures of two-sided Pauli conjugations on qubit maps.

A 4x4 probability table pi[mu, nu] defines the representing map
X -> sum pi[mu, nu] (sigma_mu (x) sigma_nu) X (sigma_mu (x) sigma_nu).
On Pauli channels the action reduces to a bistochastic matrix built from the
two-bit XOR of Pauli labels acting on the Bell-diagonal probability vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import PAULI, ChoiChannel, pauli_channel
from .du import NotDUCovariantError, from_choi
from .linalg import DEFAULT_TOL, MultipartiteOperator, max_entangled_projector
from .superchannels import SuperChoi, super_choi

PROB_TOL = 1e-12


@dataclass(frozen=True)
class PauliSuperParams:
    """Nonnegative 4x4 probability table over pairs of Pauli labels."""

    pi: np.ndarray

    def __post_init__(self) -> None:
        pi = np.asarray(self.pi, dtype=float)
        if pi.shape != (4, 4):
            raise ValueError("pi must be a 4x4 table")
        if pi.min() < -PROB_TOL:
            raise ValueError(f"pi must be nonnegative (min entry {pi.min()})")
        if abs(pi.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"pi must sum to 1 (sum {pi.sum()})")
        pi.setflags(write=False)
        object.__setattr__(self, "pi", pi)


def pauli_super_choi(p: PauliSuperParams) -> SuperChoi:
    """16x16 Choi matrix of the two-sided Pauli mixture (dims 2,2,2,2)."""
    p_plus = max_entangled_projector(4).mat
    acc = np.zeros((16, 16), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            w = np.kron(np.eye(4), np.kron(PAULI[mu], PAULI[nu]))
            acc += p.pi[mu, nu] * (w @ p_plus @ w.conj().T)
    return super_choi(acc, (2, 2, 2, 2))


@dataclass(frozen=True)
class PauliDUVerdict:
    """Diagonal-unitary covariance test for a Pauli superchannel.

    The table must have equal middle columns (pi[:, 1] == pi[:, 2]) and equal
    middle rows; the verdict carries the worst violation together with the
    outcome of the independent pattern-extraction cross-check.
    """

    max_violation: float
    extraction_ok: bool
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol

    def report(self) -> dict:
        return {
            "du_covariant": self.ok,
            "max_violation": self.max_violation,
            "extraction_ok": self.extraction_ok,
        }


def pauli_du_check(p: PauliSuperParams, tol: float = DEFAULT_TOL) -> PauliDUVerdict:
    violation = max(
        float(np.abs(p.pi[:, 1] - p.pi[:, 2]).max()),
        float(np.abs(p.pi[1, :] - p.pi[2, :]).max()),
    )
    try:
        from_choi(pauli_super_choi(p), tol)
        extraction_ok = True
    except NotDUCovariantError:
        extraction_ok = False
    return PauliDUVerdict(violation, extraction_ok, tol)


def xor_label(alpha: int, beta: int) -> int:
    """Two-bit XOR of Pauli labels (0..3)."""
    return alpha ^ beta


def pauli_induced_bistochastic(p: PauliSuperParams) -> np.ndarray:
    """The 4x4 bistochastic matrix M[alpha, beta] = sum of pi over label pairs
    with mu XOR nu = alpha XOR beta (summed in fixed mu order)."""
    m = np.zeros((4, 4))
    for alpha in range(4):
        for beta in range(4):
            target = xor_label(alpha, beta)
            m[alpha, beta] = sum(p.pi[mu, mu ^ target] for mu in range(4))
    return m


def pauli_apply(p: PauliSuperParams, q_in) -> np.ndarray:
    """Image of a Pauli-channel probability vector under the superchannel."""
    q = np.asarray(q_in, dtype=float)
    if q.shape != (4,):
        raise ValueError("expected a probability 4-vector")
    if q.min() < -PROB_TOL or abs(q.sum() - 1.0) > PROB_TOL:
        raise ValueError(f"{q} is not a probability vector")
    return pauli_induced_bistochastic(p) @ q


def bell_vectors() -> list[np.ndarray]:
    """Unnormalized Bell vectors (1 (x) sigma_alpha) sum_i |ii>."""
    psi = np.eye(2, dtype=complex).reshape(4)
    return [np.kron(np.eye(2), s) @ psi for s in PAULI]


def bell_weights(choi) -> np.ndarray:
    """Read Bell-diagonal weights q_alpha = <B_alpha|C|B_alpha> / 4 off a
    4x4 qubit-channel Choi matrix (each Bell vector has norm sqrt(2))."""
    mat = choi.mat if isinstance(choi, MultipartiteOperator) else np.asarray(choi)
    return np.array([np.vdot(b, mat @ b).real / 4.0 for b in bell_vectors()])


def pauli_marginal_channel(p: PauliSuperParams) -> ChoiChannel:
    """The qubit Pauli channel induced on input marginals, with weights the
    row sums of the table."""
    return pauli_channel(p.pi.sum(axis=1))
