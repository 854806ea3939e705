"""Truncated Fock-space substrate: state containers, ladder algebra, spectra.

All operators are dense numpy arrays over a finite cutoff ``D`` (indices
``0..D-1``).  Bipartite objects use row-major flattening: the product basis
index of ``|i>_A |j>_B`` is ``i * d_B + j``.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .config import HERM_TOL, NORM_TOL, PSD_CLIP, TAIL_TOL
from .errors import InvalidArgumentError, TruncationError


def _as_complex_vector(x):
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"expected a vector, got shape {arr.shape}")
    return arr


@dataclasses.dataclass(frozen=True)
class KetVector:
    """Normalized pure state at a finite cutoff.

    ``tail_mass`` records the probability the untruncated state carries beyond
    the cutoff (before renormalization); constructors that know a closed-form
    tail store it here.  ``admitted`` marks that the constructor-level tail
    gate passed (possibly via an override).
    """

    amplitudes: np.ndarray
    cutoff: int
    tail_mass: float = 0.0
    admitted: bool = True

    def __post_init__(self):
        amps = _as_complex_vector(self.amplitudes)
        if len(amps) != self.cutoff:
            raise InvalidArgumentError(
                f"amplitude length {len(amps)} != cutoff {self.cutoff}")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-9:
            raise InvalidArgumentError(f"ket not normalized: |psi| = {nrm!r}")
        if not (0.0 <= self.tail_mass <= 1.0):
            raise InvalidArgumentError(f"bad tail mass {self.tail_mass}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self):
        return self.cutoff

    def inner(self, other: "KetVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> "DensityOperator":
        m = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityOperator(m, self.cutoff, tail_mass=self.tail_mass,
                               admitted=self.admitted)


@dataclasses.dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD unit-trace operator at a finite cutoff."""

    matrix: np.ndarray
    cutoff: int
    tail_mass: float = 0.0
    admitted: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.cutoff, self.cutoff):
            raise InvalidArgumentError(
                f"matrix shape {m.shape} != cutoff {self.cutoff}")
        herm_defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if herm_defect > 10 * HERM_TOL * max(1.0, float(np.max(np.abs(m)))):
            raise InvalidArgumentError(
                f"matrix not Hermitian (defect {herm_defect:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-9:
            raise InvalidArgumentError(f"trace {tr!r} != 1")
        wmin = float(np.linalg.eigvalsh(m)[0])
        if wmin < PSD_CLIP:
            raise InvalidArgumentError(
                f"matrix not positive semidefinite (min eigenvalue {wmin:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.cutoff

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.trace(operator @ self.matrix))


@dataclasses.dataclass(frozen=True)
class BipartiteIndex:
    """Row-major product-basis indexing for a d_A x d_B system."""

    dim_a: int
    dim_b: int

    @property
    def dim(self):
        return self.dim_a * self.dim_b

    def flatten(self, i, j):
        if not (0 <= i < self.dim_a and 0 <= j < self.dim_b):
            raise InvalidArgumentError(f"index ({i},{j}) out of range")
        return i * self.dim_b + j

    def unflatten(self, k):
        if not 0 <= k < self.dim:
            raise InvalidArgumentError(f"index {k} out of range")
        return divmod(k, self.dim_b)


def check_tail(state, override=False, tol=TAIL_TOL):
    """Gate states whose recorded truncated mass exceeds the tolerance."""
    if override:
        return
    if state.tail_mass > tol and not state.admitted:
        raise TruncationError(
            f"truncated mass {state.tail_mass:.3e} exceeds {tol:.1e}; "
            "pass override=True to proceed anyway",
            tail_mass=state.tail_mass)


def ladder_ops(cutoff):
    """Annihilation/creation pair ``(a, a_dag)``.

    The canonical commutator holds exactly on the lower ``cutoff - 1`` block;
    the top diagonal entry is corrupted by truncation, as always.
    """
    if cutoff < 2:
        raise InvalidArgumentError("cutoff must be at least 2")
    a = np.zeros((cutoff, cutoff))
    ns = np.arange(1, cutoff)
    a[ns - 1, ns] = np.sqrt(ns)
    return a, a.T.copy()


def number_op(cutoff):
    return np.diag(np.arange(cutoff, dtype=float))


def trace_norm(matrix):
    """Sum of singular values."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError("trace norm needs a square matrix")
    return float(np.linalg.svd(m, compute_uv=False).sum())


def spectral_decompose(matrix, herm_tol=HERM_TOL, clip=PSD_CLIP, require_psd=False):
    """Eigen-decompose a Hermitian matrix, ascending eigenvalues.

    Eigenvalues in ``[clip, 0)`` are zeroed.  With ``require_psd`` an
    eigenvalue below ``clip`` raises instead of being returned.
    """
    m = np.asarray(matrix, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if defect > 10 * herm_tol * scale:
        raise InvalidArgumentError(f"not Hermitian (defect {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if require_psd and w[0] < clip * scale:
        raise InvalidArgumentError(
            f"not PSD (min eigenvalue {w[0]:.3e}, clip {clip:.1e})")
    w = np.where((w < 0) & (w >= clip * scale), 0.0, w)
    return w, v


def partial_transpose(matrix, index: BipartiteIndex, subsystem="B"):
    """Partial transpose on subsystem A or B of a bipartite operator."""
    m = np.asarray(matrix, dtype=complex)
    da, db = index.dim_a, index.dim_b
    if m.shape != (da * db, da * db):
        raise InvalidArgumentError(
            f"shape {m.shape} incompatible with {da}x{db}")
    t = m.reshape(da, db, da, db)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise InvalidArgumentError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(da * db, da * db)


def schmidt_spectrum(psi, index: BipartiteIndex):
    """Descending Schmidt coefficients (singular values) of a bipartite ket."""
    amps = _as_complex_vector(psi.amplitudes if isinstance(psi, KetVector) else psi)
    if len(amps) != index.dim:
        raise InvalidArgumentError(
            f"ket length {len(amps)} != {index.dim_a}*{index.dim_b}")
    mat = amps.reshape(index.dim_a, index.dim_b)
    return np.linalg.svd(mat, compute_uv=False)


def tensor_ket(psi_a: KetVector, psi_b: KetVector) -> KetVector:
    amps = np.kron(psi_a.amplitudes, psi_b.amplitudes)
    tail = 1.0 - (1.0 - psi_a.tail_mass) * (1.0 - psi_b.tail_mass)
    return KetVector(amps, psi_a.cutoff * psi_b.cutoff, tail_mass=tail,
                     admitted=psi_a.admitted and psi_b.admitted)


def tensor_op(op_a, op_b):
    return np.kron(np.asarray(op_a, dtype=complex), np.asarray(op_b, dtype=complex))


def ket(amplitudes, tail_mass=0.0, admitted=True) -> KetVector:
    """Normalize a raw amplitude vector into a KetVector."""
    amps = _as_complex_vector(amplitudes)
    nrm = np.linalg.norm(amps)
    if nrm < NORM_TOL:
        raise InvalidArgumentError("cannot normalize the zero vector")
    return KetVector(amps / nrm, len(amps), tail_mass=tail_mass, admitted=admitted)
