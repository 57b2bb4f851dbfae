"""Dephasing superchannels: entrywise multiplication of Choi matrices.

The representing map is C -> M_big o C (Schur product), where M_big is a
d^2 x d^2 table over the pair flattening (i, a) -> i*d + a.  Complete
positivity is exactly positivity of M_big; trace preservation is the
a-independence of the fibers M_big[(i,a),(j,a)] together with a unit
diagonal of the resulting d x d covariance matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channels import ChoiChannel, check_covariance_matrix, choi_channel
from .du import DUSuperParams, mask_tables
from .linalg import DEFAULT_TOL, psd_report
from .superchannels import SuperChoi, super_choi


@dataclass(frozen=True)
class DephasingSuperParams:
    """The Schur-multiplier table of a dephasing superchannel."""

    d: int
    M_big: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.M_big, dtype=complex)
        if m.shape != (self.d * self.d, self.d * self.d):
            raise ValueError(f"M_big must be {self.d**2}x{self.d**2}")
        m.setflags(write=False)
        object.__setattr__(self, "M_big", m)

    def m4(self) -> np.ndarray:
        d = self.d
        return self.M_big.reshape(d, d, d, d)


def dephasing_super_apply(p: DephasingSuperParams, c: ChoiChannel) -> ChoiChannel:
    """Entrywise product of the multiplier table with the channel Choi."""
    if (c.d_in, c.d_out) != (p.d, p.d):
        raise ValueError(f"channel dims ({c.d_in}, {c.d_out}) do not match d={p.d}")
    return choi_channel(p.M_big * c.choi.mat, p.d, p.d)


def to_super_choi(p: DephasingSuperParams) -> SuperChoi:
    """Choi matrix of the Schur multiplier: M_big entries on e_KL (x) e_KL."""
    d = p.d
    n = d * d
    c = np.zeros((n * n, n * n), dtype=complex)
    c4 = c.reshape(n, n, n, n)
    for k in range(n):
        for l in range(n):
            c4[k, k, l, l] = p.M_big[k, l]
    return super_choi(c, (d, d, d, d))


@dataclass(frozen=True)
class DephasingVerdict:
    """The three named dephasing validity checks.

    psd_ok covers complete positivity; fiber_deviation measures the worst
    a-dependence of M_big[(i,a),(j,a)] with its witness (i, j, a, a');
    diagonal_deviation measures | M_ii - 1 | of the induced covariance matrix.
    """

    psd_ok: bool
    min_eigenvalue: float
    fiber_deviation: float
    fiber_witness: tuple[int, int, int, int]
    diagonal_deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return (
            self.psd_ok
            and self.fiber_deviation <= self.tol
            and self.diagonal_deviation <= self.tol
        )

    def report(self) -> dict:
        return {
            "valid": self.ok,
            "psd": self.psd_ok,
            "min_eig": self.min_eigenvalue,
            "fiber_deviation": self.fiber_deviation,
            "fiber_witness": self.fiber_witness,
            "diagonal_deviation": self.diagonal_deviation,
        }


def covariance_fibers(p: DephasingSuperParams) -> np.ndarray:
    """The a-averaged covariance matrix M[i, j] = mean_a M_big[(i,a),(j,a)]."""
    m4 = p.m4()
    return np.einsum("iaja->ija", m4).mean(axis=2)


def dephasing_validate(p: DephasingSuperParams, tol: float = DEFAULT_TOL) -> DephasingVerdict:
    """Run the three named checks.

    Equivalent to the generic Choi-level validation of to_super_choi(p); the
    test suite asserts that equivalence rather than this function.
    """
    d = p.d
    psd_ok, min_eig = psd_report(p.M_big, tol)
    m4 = p.m4()
    m = covariance_fibers(p)
    worst = 0.0
    witness = (0, 0, 0, 0)
    for i, j in product(range(d), repeat=2):
        fiber = np.array([m4[i, aa, j, aa] for aa in range(d)])
        dev = np.abs(fiber - m[i, j])
        if dev.max() > worst:
            worst = float(dev.max())
            a = int(np.argmax(dev))
            witness = (i, j, a, int(np.argmax(np.abs(fiber - fiber[a]))))
    diag_dev = float(np.abs(np.diagonal(m) - 1.0).max())
    return DephasingVerdict(psd_ok, min_eig, worst, witness, diag_dev, tol)


def dephasing_from_realization(u_list, v_list, psi, tol: float = 1e-12) -> DephasingSuperParams:
    """Multiplier table of the block-diagonal-unitary dilation.

    With system-controlled environment unitaries U_i (before) and V_a (after)
    and environment state psi, the table is the cross Gram form

        M_big[(i,a),(j,b)] = <psi| U_j^dag V_b^dag V_a U_i |psi>,

    which is always a valid dephasing superchannel: M_big is the conjugate of
    a Gram matrix (hence PSD), its fibers collapse to <psi|U_j^dag U_i|psi>
    independently of a, and the diagonal is 1.
    """
    us = [np.asarray(u, dtype=complex) for u in u_list]
    vs = [np.asarray(v, dtype=complex) for v in v_list]
    d = len(us)
    if len(vs) != d:
        raise ValueError("need equally many U and V unitaries (one per level)")
    e = us[0].shape[0]
    for w in (*us, *vs):
        if w.shape != (e, e):
            raise ValueError("all unitaries must share the environment dimension")
        if np.abs(w.conj().T @ w - np.eye(e)).max() > tol:
            raise ValueError("inputs must be unitary")
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (e,):
        raise ValueError(f"psi must have the environment dimension {e}")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError("psi must be normalized")
    vectors = [[v @ (u @ psi) for v in vs] for u in us]  # vectors[j][b] = V_b U_j psi
    m = np.empty((d * d, d * d), dtype=complex)
    for i, a, j, b in product(range(d), repeat=4):
        m[i * d + a, j * d + b] = np.vdot(vectors[j][b], vectors[i][a])
    return DephasingSuperParams(d, m)


def dephasing_on_dephasing(p: DephasingSuperParams, m_chan) -> np.ndarray:
    """Covariance matrix of the transformed dephasing channel.

    The entrywise action scales the channel covariance matrix fiberwise:
    out[i, j] = M_big[(i,i),(j,j)] * m_chan[i, j].  This matches the Schur
    route through the full Choi matrices entry for entry.
    """
    m_chan = check_covariance_matrix(m_chan)
    if m_chan.shape != (p.d, p.d):
        raise ValueError(f"covariance matrix side {m_chan.shape} does not match d={p.d}")
    m4 = p.m4()
    scale = np.array([[m4[i, i, j, j] for j in range(p.d)] for i in range(p.d)])
    return scale * m_chan


def superdecoherence_matrix(p: DephasingSuperParams) -> np.ndarray:
    """Covariance matrix of the channel produced from the identity channel."""
    m4 = p.m4()
    return np.array([[m4[i, i, j, j] for j in range(p.d)] for i in range(p.d)])


def dephasing_embed_du(p: DephasingSuperParams) -> DUSuperParams:
    """Reindex the multiplier table into the four-table parameterization.

    A takes the diagonal fibers, B the i = j fibers, C the a = b fibers and D
    the rest; assembling the result gives exactly to_super_choi(p).
    """
    d = p.d
    m4 = p.m4()
    a = np.zeros((d, d, d, d))
    b = np.zeros((d, d, d, d), dtype=complex)
    c = np.zeros((d, d, d, d), dtype=complex)
    dd = np.zeros((d, d, d, d), dtype=complex)
    for i, a_, j, b_ in product(range(d), repeat=4):
        if i == j and a_ == b_:
            a[i, a_, i, a_] = m4[i, a_, i, a_].real
        elif i == j:
            b[i, a_, i, b_] = m4[i, a_, i, b_]
        elif a_ == b_:
            c[i, a_, j, a_] = m4[i, a_, j, a_]
        else:
            dd[i, a_, j, b_] = m4[i, a_, j, b_]
    n = d * d
    return mask_tables(d, a.reshape(n, n), b.reshape(n, n), c.reshape(n, n), dd.reshape(n, n))
