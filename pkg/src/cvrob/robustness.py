"""Generalized-robustness machinery: certified bounds and the conic solver.

A robustness value is always reported as a certified interval
``[lower, upper]``: lower endpoints come from feasible witnesses (value over a
certified free-set bound), upper endpoints from explicit free decompositions
(quadratic forms against free ansatz states, or the solver's primal point).
"""
from __future__ import annotations

import dataclasses
import typing

import numpy as np
import scipy.linalg as sla

from .config import (GRID_DELTA, SOLVER_REL_GAP, SUPP_MASS_TOL, SUPP_TOL)
from .errors import (CertificationError, InconsistencyError, InvalidArgumentError,
                     SupportError, UnsupportedError)
from .fock import BipartiteIndex, DensityOperator, KetVector, check_tail, schmidt_spectrum
from . import channels as ch
from .optim import golden_max
from .states import coherent_amplitudes

FREE_SET_KINDS = ("classical-coherent", "gaussian-convex-hull", "separable", "incoherent")
WITNESS_PROVENANCE = ("analytic", "grid-certified")


@dataclasses.dataclass(frozen=True)
class FreeSetSpec:
    """Which convex set of states counts as free.

    ``dims`` is required for the separable kind (it fixes the bipartition).
    """

    kind: str
    dims: BipartiteIndex | None = None

    def __post_init__(self):
        if self.kind not in FREE_SET_KINDS:
            raise InvalidArgumentError(
                f"unknown free set {self.kind!r}; expected one of {FREE_SET_KINDS}")
        if self.kind == "separable" and self.dims is None:
            raise InvalidArgumentError("separable free set needs bipartite dims")


@dataclasses.dataclass(frozen=True)
class Witness:
    """A feasibility certificate for a lower bound.

    ``free_value_bound`` is a certified upper bound on the witness expectation
    over the free set; ``provenance`` records whether it is a closed form
    ("analytic") or a grid sweep with inflation ("grid-certified").  For
    witnesses that exist only functionally (no representable matrix at the
    working cutoff), ``operator`` is None and ``profile`` evaluates
    ``<alpha|W|alpha>`` directly.
    """

    free_value_bound: float
    provenance: str
    operator: np.ndarray | None = None
    profile: typing.Callable | None = None
    label: str = ""
    certification: dict | None = None

    def __post_init__(self):
        if self.provenance not in WITNESS_PROVENANCE:
            raise InvalidArgumentError(
                f"provenance {self.provenance!r} not in {WITNESS_PROVENANCE}")
        if not self.free_value_bound > 0:
            raise InvalidArgumentError("free_value_bound must be positive")
        if self.operator is None and self.profile is None:
            raise InvalidArgumentError("witness needs an operator or a profile")


@dataclasses.dataclass(frozen=True)
class BoundContribution:
    side: str          # "lower" | "upper"
    value: float
    method: str

    def __post_init__(self):
        if self.side not in ("lower", "upper"):
            raise InvalidArgumentError(f"side must be lower/upper, got {self.side!r}")
        if not np.isfinite(self.value) and self.side == "lower":
            raise InvalidArgumentError("lower bounds must be finite")


@dataclasses.dataclass(frozen=True)
class RobustnessEstimate:
    """Certified enclosure of a robustness value, with provenance strings."""

    lower: float
    upper: float
    closed_form: float | None = None
    methods: tuple = ()
    witness: Witness | None = None
    primal_diagonal: np.ndarray | None = None
    gap: float | None = None
    converged: bool = True

    def __post_init__(self):
        if self.lower < 1.0 - 1e-9:
            raise InvalidArgumentError(f"robustness lower endpoint {self.lower} < 1")
        if self.upper < self.lower - 1e-9 * max(1.0, abs(self.upper)):
            raise InconsistencyError(
                f"interval inverted: lower {self.lower!r} > upper {self.upper!r}",
                methods=self.methods)
        if self.closed_form is not None and np.isfinite(self.upper):
            slack = 1e-9 * max(1.0, self.closed_form)
            if not (self.lower - slack <= self.closed_form <= self.upper + slack):
                raise InconsistencyError(
                    f"closed form {self.closed_form!r} escapes "
                    f"[{self.lower!r}, {self.upper!r}]", methods=self.methods)

    @property
    def rel_width(self):
        return (self.upper - self.lower) / self.lower


def real_expectation(state, operator):
    """<W> for a ket or density operator, with an imaginary-part sanity gate."""
    op = np.asarray(operator, dtype=complex)
    if isinstance(state, KetVector):
        val = complex(np.vdot(state.amplitudes, op @ state.amplitudes))
    elif isinstance(state, DensityOperator):
        val = complex(np.trace(op @ state.matrix))
    else:
        raise InvalidArgumentError(f"state must be KetVector or DensityOperator")
    scale = max(1.0, abs(val))
    if abs(val.imag) > 1e-9 * scale:
        raise InconsistencyError(
            f"expectation has imaginary part {val.imag:.3e}; "
            "operator or state is not Hermitian enough")
    return val.real


def witness_lower_value(expectation, witness: Witness):
    """Lemma-style lower bound: witness expectation over its free bound."""
    if expectation < -1e-12:
        raise InvalidArgumentError(f"witness expectation {expectation} negative")
    return max(0.0, expectation) / witness.free_value_bound


def witness_lower(state, witness: Witness, override=False):
    """Lower-bound the robustness of ``state`` from a matrix witness."""
    if witness.operator is None:
        raise InvalidArgumentError(
            "matrix-free witness: evaluate its expectation analytically and "
            "use witness_lower_value")
    check_tail(state, override)
    return witness_lower_value(real_expectation(state, witness.operator), witness)


def pure_robustness_upper(psi: KetVector, sigma: DensityOperator,
                          supp_tol=SUPP_TOL, mass_tol=SUPP_MASS_TOL,
                          override=False):
    """Quadratic form <psi| sigma^{-1} |psi> through the spectral route.

    Eigendirections of ``sigma`` below ``supp_tol`` (relative to the largest
    eigenvalue) are treated as outside the support; if ``psi`` carries more
    than ``mass_tol`` probability there, the form is not certifiable at this
    cutoff and a support-error is raised rather than returning an
    ill-conditioned number.
    """
    check_tail(psi, override)
    check_tail(sigma, override)
    if psi.cutoff != sigma.cutoff:
        raise InvalidArgumentError(
            f"cutoff mismatch: ket {psi.cutoff}, operator {sigma.cutoff}")
    lam, vecs = np.linalg.eigh(sigma.matrix)
    lmax = float(lam[-1])
    if lmax <= 0:
        raise InvalidArgumentError("reference operator is zero")
    theta2 = np.abs(vecs.conj().T @ psi.amplitudes) ** 2
    in_support = lam > supp_tol * lmax
    out_mass = float(theta2[~in_support].sum())
    if out_mass > mass_tol:
        raise SupportError(
            f"state mass {out_mass:.3e} outside the reference support "
            f"(floor {supp_tol:.1e} of top eigenvalue); the quadratic form is "
            "not certifiable at this cutoff", out_mass=out_mass)
    return float(np.sum(theta2[in_support] / lam[in_support]))


def _coherent_profile_matrix(op, alphas, cutoff):
    """<alpha|W|alpha> over an array of alphas, via exact truncated amplitudes."""
    vals = np.empty(len(alphas))
    chunk = 8192
    for k in range(0, len(alphas), chunk):
        batch = alphas[k:k + chunk]
        n = np.arange(cutoff)[:, None]
        absa = np.abs(batch)[None, :]
        with np.errstate(divide="ignore"):
            logmag = np.where(absa > 0, n * np.log(np.where(absa > 0, absa, 1.0)), 0.0)
        logmag = logmag - 0.5 * _log_factorials(cutoff)[:, None] - absa ** 2 / 2
        cols = np.exp(logmag) * np.exp(1j * np.angle(batch)[None, :] * n)
        cols[1:, :] = np.where(absa[0:1, :] > 0, cols[1:, :], 0.0)
        vals[k:k + chunk] = np.real(np.einsum("im,im->m", cols.conj(), op @ cols))
    return vals


_log_factorial_cache = {}


def _log_factorials(cutoff):
    if cutoff not in _log_factorial_cache:
        from scipy.special import gammaln
        _log_factorial_cache[cutoff] = gammaln(np.arange(cutoff) + 1.0)
    return _log_factorial_cache[cutoff]


def certify_coherent_witness(operator=None, profile=None, radius=None,
                             coarse_step=0.05, refine_step=GRID_DELTA,
                             inflation=GRID_DELTA, label=""):
    """Certify sup over coherent states of a witness expectation by grid sweep.

    Returns a grid-certified Witness whose ``free_value_bound`` is the swept
    maximum after quadratic refinement, inflated by ``1 + inflation``.  If the
    sweep peaks at the edge of the search disk the supremum may escape it and
    a certification-failure is raised.

    For a diagonal operator (or an explicitly radial ``profile``) the profile
    is phase-invariant and the sweep is a dense radial grid at ``refine_step``.
    """
    if (operator is None) == (profile is None):
        raise InvalidArgumentError("pass exactly one of operator/profile")

    if operator is not None:
        op = np.asarray(operator, dtype=complex)
        cutoff = op.shape[0]
        scale = max(1.0, float(np.max(np.abs(op))))
        if float(np.max(np.abs(op - op.conj().T))) > 1e-10 * scale:
            raise InvalidArgumentError("witness operator must be Hermitian")
        if radius is None:
            radius = float(np.sqrt(cutoff - 1) + 4.0)
        diagonal = float(np.max(np.abs(op - np.diag(np.diag(op))))) <= 1e-14 * scale

        def eval_at(alphas):
            return _coherent_profile_matrix(op, np.asarray(alphas, dtype=complex), cutoff)
    else:
        if radius is None:
            raise InvalidArgumentError("profile witnesses need an explicit radius")
        diagonal = getattr(profile, "radial", False)

        def eval_at(alphas):
            out = np.asarray(profile(np.asarray(alphas, dtype=complex)))
            if np.iscomplexobj(out):
                if np.max(np.abs(out.imag)) > 1e-10 * max(1.0, np.max(np.abs(out))):
                    raise InvalidArgumentError("witness profile must be real")
                out = out.real
            return out

    if diagonal:
        rs = np.arange(0.0, radius + refine_step, refine_step)
        vals = eval_at(rs)
        i = int(np.argmax(vals))
        if rs[i] >= radius - 2 * refine_step:
            raise CertificationError(
                f"radial sweep peaks at the search edge (r={rs[i]:.3f}); "
                "the coherent supremum may escape the disk", radius=radius)
        if 0 < i < len(rs) - 1:
            lo, hi = max(0.0, rs[i] - refine_step), rs[i] + refine_step
            pol = golden_max(lambda x: float(eval_at(np.array([x]))[0]), lo, hi)
            raw = max(float(vals[i]), pol["maximum"])
            arg = pol["argmax"] if pol["maximum"] >= vals[i] else rs[i]
        else:
            raw, arg = float(vals[i]), float(rs[i])
        argmax = complex(arg)
    else:
        xs = np.arange(-radius, radius + coarse_step, coarse_step)
        gx, gy = np.meshgrid(xs, xs)
        pts = (gx + 1j * gy).ravel()
        pts = pts[np.abs(pts) <= radius]
        vals = eval_at(pts)
        i = int(np.argmax(vals))
        peak = pts[i]
        if abs(peak) >= radius - 2 * coarse_step:
            raise CertificationError(
                f"coherent sweep peaks at the search edge (|alpha|={abs(peak):.3f})",
                radius=radius)
        w = 2 * coarse_step
        fx = np.arange(peak.real - w, peak.real + w + refine_step, refine_step)
        fy = np.arange(peak.imag - w, peak.imag + w + refine_step, refine_step)
        hx, hy = np.meshgrid(fx, fy)
        fine = (hx + 1j * hy).ravel()
        fvals = eval_at(fine)
        j = int(np.argmax(fvals))
        raw, argmax = float(fvals[j]), complex(fine[j])

    bound = raw * (1.0 + inflation)
    return Witness(operator=operator if operator is not None else None,
                   profile=profile, free_value_bound=bound,
                   provenance="grid-certified", label=label,
                   certification={"raw_max": raw, "argmax": argmax,
                                  "radius": float(radius),
                                  "inflation": float(inflation)})


def assemble_estimate(contributions, closed_form=None):
    """Combine bound contributions into one certified interval.

    Lower endpoints are floored at 1 (robustness is never smaller); the
    tightest lower and upper win and their methods are recorded first.  A
    crossing pair of bounds raises an inconsistency error that names both
    offending methods.
    """
    contributions = list(contributions)
    lowers = [c for c in contributions if c.side == "lower"]
    uppers = [c for c in contributions if c.side == "upper"]
    lo_val, lo_method = 1.0, "trivial-floor"
    for c in lowers:
        if c.value > lo_val:
            lo_val, lo_method = c.value, c.method
    hi_val, hi_method = np.inf, "none"
    for c in uppers:
        if c.value < hi_val:
            hi_val, hi_method = c.value, c.method
    if hi_val < lo_val - 1e-9 * max(1.0, hi_val):
        raise InconsistencyError(
            f"lower bound {lo_val!r} ({lo_method}) exceeds upper bound "
            f"{hi_val!r} ({hi_method})")
    methods = [f"lower:{lo_method}", f"upper:{hi_method}"]
    methods += sorted({f"{c.side}:{c.method}" for c in contributions}
                      - set(methods))
    return RobustnessEstimate(lower=lo_val, upper=hi_val, closed_form=closed_form,
                              methods=tuple(methods))


# ---------------------------------------------------------------------------
# finite-dimensional conic solver (incoherent free cone)
# ---------------------------------------------------------------------------

def finite_dim_robustness(rho: DensityOperator, free: FreeSetSpec,
                          rel_gap=SOLVER_REL_GAP, t_growth=20.0,
                          max_outer=80, max_newton=60) -> RobustnessEstimate:
    """Certified robustness interval by interior-point path following.

    Solves ``min sum(d) s.t. diag(d) >= rho`` (the conic program whose optimum
    is the generalized robustness for the incoherent free cone) by Newton
    centering on the log-det barrier.  Each centered point yields a feasible
    primal ``d`` and a dual witness ``W = (diag(d) - rho)^{-1}/t`` whose
    rescaled form is PSD with unit diagonal bound, so every reported interval
    is certified independently of convergence.  ``converged=False`` flags a
    gap above target after the iteration budget; the interval is still valid.
    """
    if free.kind != "incoherent":
        raise UnsupportedError(
            f"finite-dimensional solver covers the incoherent free set; "
            f"got {free.kind!r}")
    m = rho.matrix
    dim = rho.cutoff
    eye = np.eye(dim)

    def centered_inverse(d):
        a = np.diag(d) - m
        try:
            cf = sla.cho_factor(a, check_finite=False)
        except np.linalg.LinAlgError:
            return None
        return sla.cho_solve(cf, np.eye(dim, dtype=complex), check_finite=False)

    spectral_norm = float(np.linalg.norm(m, 2))
    d = np.real(np.diag(m)).copy() + spectral_norm + 0.1
    t = dim / max(0.5 * (float(d.sum()) - 1.0), 1e-3)
    best_dual = 1.0          # W = I is always feasible and gives Tr rho = 1
    dual_witness = np.eye(dim, dtype=complex)

    # rank-one phase polish: exact optimum for pure states
    w_top, v_top = np.linalg.eigh(m)
    v = v_top[:, -1]
    phases = np.where(np.abs(v) > 1e-14, v / np.where(np.abs(v) > 1e-14, np.abs(v), 1.0), 1.0)
    w_phase = np.outer(phases, phases.conj())
    val_phase = float(np.real(np.vdot(phases, m @ phases)))
    if val_phase > best_dual:
        best_dual, dual_witness = val_phase, w_phase

    converged = False
    primal = float(d.sum())
    for _ in range(max_outer):
        for _ in range(max_newton):
            minv = centered_inverse(d)
            if minv is None:
                raise InvalidArgumentError("lost strict feasibility (internal)")
            grad = t - np.real(np.diag(minv))
            hess = np.abs(minv) ** 2
            try:
                step = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = -np.linalg.solve(hess + 1e-12 * hess.max() * eye, grad)
            decrement = float(-grad @ step)
            scale = 1.0
            for _ in range(60):
                if centered_inverse(d + scale * step) is not None:
                    break
                scale *= 0.5
            d = d + scale * step
            if decrement / 2 < 1e-13 * max(1.0, t):
                break
        minv = centered_inverse(d)
        w = minv / t
        diag_w = np.real(np.diag(w))
        w_scaled = w / max(1.0, float(diag_w.max()))
        dual = float(np.real(np.trace(w_scaled @ m)))
        if dual > best_dual:
            best_dual, dual_witness = dual, w_scaled
        primal = float(d.sum())
        if primal - best_dual <= rel_gap * max(1.0, primal):
            converged = True
            break
        t *= t_growth

    # harden primal feasibility: push d until diag(d) - rho is PSD in exact terms
    wmin = float(np.linalg.eigvalsh(np.diag(d) - m)[0])
    if wmin < 0:
        d = d + (-wmin) * 1.0000001
        primal = float(d.sum())
    # harden the witness: clip asymmetry, verify PSD within clip tolerance
    wit = 0.5 * (dual_witness + dual_witness.conj().T)
    wit_min = float(np.linalg.eigvalsh(wit)[0])
    if wit_min < -1e-10:
        raise InconsistencyError(f"dual witness lost PSD ({wit_min:.3e})")
    witness = Witness(operator=wit, free_value_bound=1.0, provenance="analytic",
                      label="central-path dual witness (unit diagonal bound)")
    gap = primal - best_dual
    return RobustnessEstimate(
        lower=max(1.0, best_dual), upper=primal,
        methods=("lower:barrier-dual-witness", "upper:barrier-primal-diag"),
        witness=witness, primal_diagonal=d.copy(), gap=gap, converged=converged)


# ---------------------------------------------------------------------------
# monotonicity under free-set-preserving channels
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    verdict: str          # "pass" | "indeterminate" | "violation"
    before: RobustnessEstimate
    after: RobustnessEstimate
    margin: float
    membership_defect: float


def _check_free_preserving(superop, free: FreeSetSpec, dim, tol):
    """Sampled free-set membership of channel outputs; returns worst defect."""
    worst = 0.0
    if free.kind == "incoherent":
        for i in range(dim):
            basis = np.zeros((dim, dim), dtype=complex)
            basis[i, i] = 1.0
            out = ch.apply_channel(superop, basis)
            off = out - np.diag(np.diag(out))
            worst = max(worst, float(np.abs(off).max()))
    elif free.kind == "classical-coherent":
        for a in (0.0, 0.4, 0.9j, -0.7 + 0.5j, 1.3, -1.1j):
            amps = coherent_amplitudes(a, dim)
            out = ch.apply_channel(superop, np.outer(amps, amps.conj()))
            tr = float(np.trace(out).real)
            if tr < 1e-6:
                worst = np.inf
                continue
            out = out / tr
            mean = complex(np.trace(np.diag(np.sqrt(np.arange(1, dim)), 1) @ out))
            ref = coherent_amplitudes(mean, dim)
            ref = ref / np.linalg.norm(ref)
            fid = float(np.real(np.vdot(ref, out @ ref)))
            worst = max(worst, abs(1.0 - fid))
    elif free.kind == "separable":
        idx = free.dims
        rng = np.random.default_rng(11)
        for _ in range(4):
            va = rng.normal(size=idx.dim_a) + 1j * rng.normal(size=idx.dim_a)
            vb = rng.normal(size=idx.dim_b) + 1j * rng.normal(size=idx.dim_b)
            prod = np.kron(va / np.linalg.norm(va), vb / np.linalg.norm(vb))
            out = ch.apply_channel(superop, np.outer(prod, prod.conj()))
            out = out / float(np.trace(out).real)
            # purity + Schmidt-rank-1 test on the dominant eigenvector
            w, vecs = np.linalg.eigh(out)
            sv = schmidt_spectrum(vecs[:, -1], idx)
            defect = max(abs(1.0 - float(w[-1])), float(np.sum(sv[1:] ** 2)))
            worst = max(worst, defect)
    else:
        raise UnsupportedError(
            f"membership sampling not implemented for {free.kind!r}")
    return worst


def monotonicity_check(rho: DensityOperator, superop, free: FreeSetSpec,
                       tol=1e-6, membership_tol=1e-8) -> MonotonicityReport:
    """Compare certified robustness intervals before/after a free channel.

    The verdict is decisive ("pass") only when the after-interval sits at or
    below the before-interval within ``tol``; a certified increase beyond
    ``tol`` is a "violation" (``passed=False``); anything else is reported as
    "indeterminate" rather than coerced.
    """
    cp_ok, tp_ok, defects = ch.is_cptp(superop)
    if not (cp_ok and tp_ok):
        raise InvalidArgumentError(f"channel is not CPTP: {defects}")
    defect = _check_free_preserving(superop, free, rho.cutoff, membership_tol)
    if not defect <= membership_tol:
        raise InvalidArgumentError(
            f"channel does not preserve the {free.kind} free set "
            f"(sampled defect {defect:.3e})")

    out = ch.apply_channel(superop, rho.matrix)
    out_state = DensityOperator(out / float(np.trace(out).real), rho.cutoff,
                                tail_mass=rho.tail_mass, admitted=rho.admitted)

    if free.kind == "incoherent":
        before = finite_dim_robustness(rho, free)
        after = finite_dim_robustness(out_state, free)
    elif free.kind == "classical-coherent":
        from .nonclassicality import generic_pure_interval
        before = generic_pure_interval(rho)
        after = generic_pure_interval(out_state)
    elif free.kind == "separable":
        before = _pure_separable_interval(rho, free.dims)
        after = _pure_separable_interval(out_state, free.dims)
    else:
        raise UnsupportedError(f"monotonicity engine missing for {free.kind!r}")

    if after.upper <= before.lower + tol:
        verdict, passed = "pass", True
    elif after.lower > before.upper + tol:
        verdict, passed = "violation", False
    else:
        verdict, passed = "indeterminate", True
    margin = before.lower - after.upper
    return MonotonicityReport(passed=passed, verdict=verdict, before=before,
                              after=after, margin=float(margin),
                              membership_defect=float(defect))


def _purify(rho: DensityOperator, tol=1e-10) -> KetVector:
    w, vecs = np.linalg.eigh(rho.matrix)
    if 1.0 - float(w[-1]) > tol:
        raise UnsupportedError(
            "interval engine needs a pure state at this free set "
            f"(purity defect {1.0 - float(w[-1]):.3e})")
    return KetVector(vecs[:, -1], rho.cutoff, tail_mass=rho.tail_mass,
                     admitted=rho.admitted)


def _pure_separable_interval(rho: DensityOperator, dims: BipartiteIndex):
    psi = _purify(rho)
    mu = schmidt_spectrum(psi, dims)
    val = float(np.sum(mu)) ** 2
    return RobustnessEstimate(lower=val, upper=val, closed_form=val,
                              methods=("lower:schmidt-sum-closed-form",
                                       "upper:schmidt-sum-closed-form"))
