"""Channels as matrix superoperators acting on row-major vectorized operators."""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .fock import BipartiteIndex, spectral_decompose


def channel_from_kraus(kraus):
    """Superoperator matrix of rho -> sum_k K rho K^dag."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise InvalidArgumentError("need at least one Kraus operator")
    d = kraus[0].shape[0]
    for k in kraus:
        if k.shape != (d, d):
            raise InvalidArgumentError("Kraus operators must share a square shape")
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in kraus:
        s += np.kron(k, k.conj())
    return s


def apply_channel(superop, rho):
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if superop.shape != (d * d, d * d):
        raise InvalidArgumentError(
            f"superoperator shape {superop.shape} incompatible with dim {d}")
    return (superop @ rho.reshape(-1)).reshape(d, d)


def choi_matrix(superop):
    """Choi operator C = sum_ij |i><j| (x) Lambda(|i><j|), row-major blocks."""
    dd = superop.shape[0]
    d = int(round(np.sqrt(dd)))
    if d * d != dd or superop.shape != (dd, dd):
        raise InvalidArgumentError(f"superoperator must be d^2 x d^2, got {superop.shape}")
    s4 = superop.reshape(d, d, d, d)         # [out_row, out_col, in_row, in_col]
    c4 = np.einsum("klij->ikjl", s4)
    return c4.reshape(dd, dd)


def is_cptp(superop, tol=1e-8):
    """Return (complete positivity ok, trace preservation ok, defects).

    Small Choi matrices are checked by exact eigendecomposition; large ones
    by a shifted Cholesky factorization, which certifies the smallest
    eigenvalue above ``-tol`` at a third of the cost.
    """
    c = choi_matrix(superop)
    dd = c.shape[0]
    d = int(round(np.sqrt(dd)))
    c = 0.5 * (c + c.conj().T)
    if dd <= 1024:
        try:
            w, _ = spectral_decompose(c, require_psd=False)
            cp_defect = max(0.0, -float(w[0]))
            cp_ok = cp_defect <= tol * max(1.0, d)
        except InvalidArgumentError:
            cp_defect, cp_ok = np.inf, False
    else:
        shift = tol * max(1.0, d)
        try:
            sla.cho_factor(c + shift * np.eye(dd), check_finite=False)
            cp_defect, cp_ok = shift, True      # eigmin certified > -shift
        except np.linalg.LinAlgError:
            cp_defect, cp_ok = np.inf, False
    # partial trace over the output slot must give the identity
    pt = np.einsum("ikjk->ij", c.reshape(d, d, d, d))
    tp_defect = float(np.abs(pt - np.eye(d)).max())
    return cp_ok, tp_defect <= tol, {
        "cp_defect": cp_defect, "tp_defect": tp_defect}


def unitary_channel(u):
    return channel_from_kraus([u])


def phase_rotation_channel(theta, dim):
    u = np.diag(np.exp(1j * theta * np.arange(dim)))
    return channel_from_kraus([u])


def permutation_channel(perm, dim):
    perm = list(perm)
    if sorted(perm) != list(range(dim)):
        raise InvalidArgumentError("not a permutation of range(dim)")
    u = np.zeros((dim, dim), dtype=complex)
    u[perm, np.arange(dim)] = 1.0
    return channel_from_kraus([u])


def dephasing_channel(dim, strength=1.0):
    """rho -> (1-p) rho + p diag(rho): full dephasing at p=1."""
    if not 0 <= strength <= 1:
        raise InvalidArgumentError("strength must sit in [0, 1]")
    kraus = [np.sqrt(1 - strength) * np.eye(dim, dtype=complex)]
    for i in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[i, i] = np.sqrt(strength)
        kraus.append(k)
    return channel_from_kraus(kraus)


def replacement_channel(sigma):
    """rho -> Tr(rho) sigma."""
    sigma = np.asarray(sigma, dtype=complex)
    d = sigma.shape[0]
    s = np.zeros((d * d, d * d), dtype=complex)
    eye_vec = np.eye(d, dtype=complex).reshape(-1)
    s += np.outer(sigma.reshape(-1), eye_vec.conj())
    return s


def local_unitary_channel(u_a, u_b):
    return channel_from_kraus([np.kron(u_a, u_b)])


def partial_trace(rho, index: BipartiteIndex, keep="A"):
    m = np.asarray(rho, dtype=complex).reshape(
        index.dim_a, index.dim_b, index.dim_a, index.dim_b)
    if keep == "A":
        return np.einsum("ikjk->ij", m)
    if keep == "B":
        return np.einsum("kikj->ij", m)
    raise InvalidArgumentError("keep must be 'A' or 'B'")
