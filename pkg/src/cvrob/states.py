"""State constructors on the truncated Fock space.

Phase convention: ``squeeze_operator(z) = expm((conj(z) a^2 - z adag^2)/2)``,
so ``squeeze_operator(r)|0>`` for real ``r > 0`` has reduced variance in the
``(a + adag)/sqrt(2)`` quadrature and Fock amplitudes carrying ``(-tanh r)^n``.
Every closed-form amplitude below follows that convention; the operator and
closed-form routes are cross-checked against each other in the test suite.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.linalg as sla
from scipy.special import eval_genlaguerre, eval_laguerre, gammainc, gammaln

from .config import DEFAULT_CUTOFF, TAIL_TOL
from .errors import InternalError, InvalidArgumentError, TruncationError
from .fock import DensityOperator, KetVector, ladder_ops


@dataclasses.dataclass(frozen=True)
class GaussianPureParams:
    """Displaced squeezed vacuum D(alpha) S(z) |0>."""

    alpha: complex = 0.0
    z: complex = 0.0


@dataclasses.dataclass(frozen=True)
class SqueezedThermalParams:
    """S(r) tau_N S(r)^dag with mean thermal occupation N >= 0."""

    r: float
    mean_photons: float

    def __post_init__(self):
        if self.mean_photons < 0:
            raise InvalidArgumentError("mean_photons must be >= 0")

    def is_classical(self):
        """Boundary inclusive: the state admits a P-function iff e^{2r} <= 2N+1."""
        return np.exp(2 * abs(self.r)) <= 2 * self.mean_photons + 1


def _gate(tail, override, what):
    if tail > TAIL_TOL and not override:
        raise TruncationError(
            f"{what}: truncated mass {tail:.3e} exceeds {TAIL_TOL:.1e} "
            "(raise the cutoff or pass override=True)", tail_mass=tail)


def fock_state(n, cutoff=DEFAULT_CUTOFF) -> KetVector:
    if not 0 <= n < cutoff:
        raise InvalidArgumentError(f"need 0 <= n < cutoff, got n={n}, cutoff={cutoff}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return KetVector(amps, cutoff)


def coherent_state(alpha, cutoff=DEFAULT_CUTOFF, override=False) -> KetVector:
    """|alpha> truncated at the cutoff; exact Poisson tail bookkeeping."""
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    tail = float(gammainc(cutoff, x)) if x > 0 else 0.0
    _gate(tail, override, f"coherent_state(alpha={alpha})")
    amps = coherent_amplitudes(alpha, cutoff)
    nrm = np.linalg.norm(amps)
    return KetVector(amps / nrm, cutoff, tail_mass=tail, admitted=tail <= TAIL_TOL)


def coherent_amplitudes(alpha, cutoff):
    """Unnormalized truncation of the coherent amplitude sequence.

    These are the *exact* first ``cutoff`` amplitudes of the untruncated
    state, which is what certification sweeps need (quadratic forms against
    cutoff-supported operators are then exact, with no truncation error).
    """
    alpha = complex(alpha)
    n = np.arange(cutoff)
    if alpha == 0:
        amps = np.zeros(cutoff, dtype=complex)
        amps[0] = 1.0
        return amps
    logmag = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) - abs(alpha) ** 2 / 2
    return np.exp(logmag) * np.exp(1j * np.angle(alpha) * n)


def squeeze_operator(z, cutoff=DEFAULT_CUTOFF, unitarity_tol=1e-8):
    """expm((conj(z) a^2 - z adag^2)/2), with a truncation-health check.

    Unitarity is verified on the lower half of the space; squeezing too hard
    for the cutoff fails that check rather than returning a corrupted matrix.
    """
    a, adag = ladder_ops(cutoff)
    gen = 0.5 * (np.conj(z) * (a @ a) - z * (adag @ adag))
    s = sla.expm(gen)
    half = cutoff // 2
    defect = np.abs((s.conj().T @ s)[:half, :half] - np.eye(half)).max()
    if defect > unitarity_tol:
        raise TruncationError(
            f"squeeze_operator(z={z}): unitarity defect {defect:.3e} on the "
            f"lower half block; increase the cutoff", defect=float(defect))
    return s


def displacement_operator(alpha, cutoff=DEFAULT_CUTOFF, method="laguerre"):
    """Matrix of D(alpha) = expm(alpha adag - conj(alpha) a).

    The default uses the closed-form matrix elements
    ``<m|D|n> = sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)``
    (stable at large cutoffs); ``method='expm'`` exponentiates the generator.
    """
    alpha = complex(alpha)
    if method == "expm":
        a, adag = ladder_ops(cutoff)
        return sla.expm(alpha * adag - np.conj(alpha) * a)
    if method != "laguerre":
        raise InvalidArgumentError(f"unknown method {method!r}")
    m = np.arange(cutoff)[:, None]
    n = np.arange(cutoff)[None, :]
    x = abs(alpha) ** 2
    k = np.minimum(m, n)          # lower order
    d = np.abs(m - n)             # order difference
    logpref = 0.5 * (gammaln(k + 1) - gammaln(k + d + 1)) - x / 2 + d * np.log(abs(alpha) + (alpha == 0))
    lag = eval_genlaguerre(k, d, x)
    base = np.exp(logpref) * lag
    if alpha == 0:
        return np.eye(cutoff, dtype=complex)
    phase_up = np.exp(1j * np.angle(alpha))         # applies where m > n
    phase_dn = -np.exp(-1j * np.angle(alpha))       # applies where m < n
    fac = np.where(m >= n, phase_up ** d, phase_dn ** d)
    return base * fac


def squeezed_vacuum(r, cutoff=DEFAULT_CUTOFF, override=False) -> KetVector:
    """Squeezed vacuum S(r)|0> for real r, built from closed-form amplitudes.

    Representability gate: the family precondition ``tanh(|r|)^{2 cutoff}``
    must not exceed the tail tolerance.  The recorded ``tail_mass`` is the
    true truncated probability (which can be slightly larger).
    """
    r = float(r)
    proxy = np.tanh(abs(r)) ** (2 * cutoff) if r != 0 else 0.0
    _gate(proxy, override, f"squeezed_vacuum(r={r})")
    amps = np.zeros(cutoff, dtype=complex)
    n = np.arange(0, (cutoff - 1) // 2 + 1)
    if r == 0:
        amps[0] = 1.0
        return KetVector(amps, cutoff)
    logmag = (0.5 * (gammaln(2 * n + 1) - 2 * gammaln(n + 1))
              - n * np.log(2.0) + n * np.log(np.tanh(abs(r)))
              - 0.5 * np.log(np.cosh(r)))
    amps[2 * n] = np.exp(logmag) * np.sign(-np.tanh(r)) ** n
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    nrm = np.linalg.norm(amps)
    return KetVector(amps / nrm, cutoff, tail_mass=tail, admitted=proxy <= TAIL_TOL)


def photon_added_squeezed(r, cutoff=DEFAULT_CUTOFF, override=False) -> KetVector:
    """Photon-added squeezed vacuum, equal to S(r)|1> up to a global phase.

    Amplitudes live on odd Fock indices:
    ``c_{2n+1} = (-tanh r)^n cosh(r)^{-3/2} sqrt(2n+1) 2^{-n} sqrt(C(2n,n))``.
    ``adag|zeta_r>/cosh(r)`` and ``a|zeta_r>/sinh(r)`` reproduce it up to
    global phase (the latter with opposite sign), so projector-level tests
    compare overlap magnitudes rather than raw vectors.
    """
    r = float(r)
    if r == 0:
        raise InvalidArgumentError("r=0 gives the bare single photon; use fock_state(1)")
    proxy = np.tanh(abs(r)) ** (2 * cutoff)
    _gate(proxy, override, f"photon_added_squeezed(r={r})")
    amps = np.zeros(cutoff, dtype=complex)
    n = np.arange(0, (cutoff - 2) // 2 + 1)
    logmag = (0.5 * np.log(2 * n + 1) - n * np.log(2.0)
              + 0.5 * (gammaln(2 * n + 1) - 2 * gammaln(n + 1))
              + n * np.log(np.tanh(abs(r))) - 1.5 * np.log(np.cosh(r)))
    amps[2 * n + 1] = np.exp(logmag) * np.sign(-np.tanh(r)) ** n
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    nrm = np.linalg.norm(amps)
    return KetVector(amps / nrm, cutoff, tail_mass=tail, admitted=proxy <= TAIL_TOL)


def displaced_squeezed(alpha, z, cutoff=DEFAULT_CUTOFF, override=False) -> KetVector:
    """D(alpha) S(z) |0> by operator application (numeric route).

    Serves as the independent cross-check for closed-form amplitude families;
    ``tail_mass`` is the norm defect accumulated by truncation.
    """
    s = squeeze_operator(z, cutoff)
    d = displacement_operator(alpha, cutoff)
    vac = np.zeros(cutoff, dtype=complex)
    vac[0] = 1.0
    v = d @ (s @ vac)
    tail = max(0.0, 1.0 - float(np.linalg.norm(v) ** 2))
    _gate(tail, override, f"displaced_squeezed(alpha={alpha}, z={z})")
    return KetVector(v / np.linalg.norm(v), cutoff, tail_mass=tail,
                     admitted=tail <= TAIL_TOL)


def cat_state(alpha, parity, cutoff=DEFAULT_CUTOFF, override=False) -> KetVector:
    """Even (parity=+1) or odd (parity=-1) superposition of |alpha>, |-alpha>."""
    if parity not in (+1, -1):
        raise InvalidArgumentError(f"parity must be +1 or -1, got {parity!r}")
    alpha = complex(alpha)
    if alpha == 0 and parity == -1:
        raise InvalidArgumentError("odd cat is undefined at alpha = 0")
    u = coherent_amplitudes(alpha, cutoff) + parity * coherent_amplitudes(-alpha, cutoff)
    norm_exact = 2.0 * (1.0 + parity * np.exp(-2 * abs(alpha) ** 2))
    tail = max(0.0, 1.0 - float(np.sum(np.abs(u) ** 2)) / norm_exact)
    _gate(tail, override, f"cat_state(alpha={alpha}, parity={parity:+d})")
    return KetVector(u / np.linalg.norm(u), cutoff, tail_mass=tail,
                     admitted=tail <= TAIL_TOL)


def thermal_state(mean_photons, cutoff=DEFAULT_CUTOFF, override=False) -> DensityOperator:
    n_bar = float(mean_photons)
    if n_bar < 0:
        raise InvalidArgumentError("mean photon number must be >= 0")
    if n_bar == 0:
        w = np.zeros(cutoff)
        w[0] = 1.0
        tail = 0.0
    else:
        ratio = n_bar / (n_bar + 1.0)
        w = np.exp(np.arange(cutoff) * np.log(ratio)) / (n_bar + 1.0)
        tail = ratio ** cutoff
    _gate(tail, override, f"thermal_state(N={n_bar})")
    return DensityOperator(np.diag(w / w.sum()).astype(complex), cutoff,
                           tail_mass=float(tail), admitted=tail <= TAIL_TOL)


def phase_randomized_coherent(gamma, cutoff=DEFAULT_CUTOFF, override=False) -> DensityOperator:
    """Phase average of |gamma e^{i theta}>: diagonal Poisson(|gamma|^2) weights."""
    x = abs(complex(gamma)) ** 2
    tail = float(gammainc(cutoff, x)) if x > 0 else 0.0
    _gate(tail, override, f"phase_randomized_coherent(gamma={gamma})")
    n = np.arange(cutoff)
    if x == 0:
        w = np.zeros(cutoff)
        w[0] = 1.0
    else:
        w = np.exp(-x + n * np.log(x) - gammaln(n + 1))
    return DensityOperator(np.diag(w / w.sum()).astype(complex), cutoff,
                           tail_mass=tail, admitted=tail <= TAIL_TOL)


def squeezed_thermal_state(params: SqueezedThermalParams, cutoff=DEFAULT_CUTOFF,
                           override=False) -> DensityOperator:
    """S(r) tau_N S(r)^dag as a matrix; trace defect recorded as tail mass."""
    tau = thermal_state(params.mean_photons, cutoff, override=override)
    s = squeeze_operator(params.r, cutoff)
    m = s @ tau.matrix @ s.conj().T
    tr = float(np.trace(m).real)
    tail = max(tau.tail_mass, 1.0 - tr)
    _gate(tail, override, f"squeezed_thermal_state({params})")
    return DensityOperator(m / tr, cutoff, tail_mass=tail, admitted=tail <= TAIL_TOL)


def chi1_gaussian(alpha, params: SqueezedThermalParams):
    """Normally-ordered characteristic function of a squeezed thermal state.

    chi_1(alpha) = exp(|alpha|^2/2) chi_0(alpha)
                 = exp(|alpha|^2/2 - (2N+1)(e^{2r} aR^2 + e^{-2r} aI^2) / 2)

    in this package's squeeze convention.  It grows exponentially along the
    imaginary-alpha axis exactly when e^{2r} > 2N + 1.  Vectorized in alpha.
    """
    a = np.asarray(alpha, dtype=complex)
    n2 = 2 * params.mean_photons + 1
    r = params.r
    expo = (np.abs(a) ** 2 / 2
            - 0.5 * n2 * (np.exp(2 * r) * a.real ** 2 + np.exp(-2 * r) * a.imag ** 2))
    out = np.exp(expo)
    return out if out.shape else float(out)


def chi1_numeric(alpha, state: DensityOperator):
    """chi_1 evaluated from the truncated matrix: e^{|a|^2/2} Tr[rho D(a)]."""
    d = displacement_operator(alpha, state.cutoff)
    val = np.exp(abs(complex(alpha)) ** 2 / 2) * np.trace(state.matrix @ d)
    return complex(val)


def chi1_series(alpha, params: SqueezedThermalParams, rel_floor=1e-18,
                max_terms=20000):
    """chi_1 of a squeezed thermal state via the displacement-conjugation route.

    Uses S(r)^dag D(alpha) S(r) = D(beta) with beta = alpha cosh r
    + conj(alpha) sinh r, then sums the thermal trace as a Laguerre series
    Tr[tau D(beta)] = sum_n tau_n e^{-x/2} L_n(x) at x = |beta|^2.  The series
    converges absolutely (|L_n(x)| <= e^{x/2}), needs no Fock cutoff, and is a
    computational route independent of the closed-form Gaussian expression.
    Directions suppressed beyond float resolution return 0.0 (certified by
    |chi_1| <= e^{(|alpha|^2 - x)/2}).
    """
    a = complex(alpha)
    n_mean = params.mean_photons
    beta = a * math.cosh(params.r) + a.conjugate() * math.sinh(params.r)
    x = abs(beta) ** 2
    a2 = abs(a) ** 2
    if x - a2 > 200.0:
        return 0.0
    if n_mean == 0:
        return math.exp((a2 - x) / 2)
    q = n_mean / (n_mean + 1.0)
    coef = 1.0 / (n_mean + 1.0)
    envelope = math.exp(min(x / 2, 700.0))
    acc = 0.0
    for n in range(max_terms):
        acc += coef * eval_laguerre(n, x)
        coef *= q
        if coef * envelope < rel_floor * max(abs(acc), 1e-300):
            break
    else:
        raise InternalError("thermal Laguerre series did not settle")
    return math.exp((a2 - x) / 2) * acc
