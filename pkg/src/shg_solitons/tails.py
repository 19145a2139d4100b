"""Tail-orthogonality criterion for locating embedded solitons.

A delocalized soliton carries a small free SH tail b*cos(omega t + psi)
with omega = sqrt((2/delta)(2k - q)).  Projecting the nonlinear part of the
SH stationary equation onto that cosine mode and demanding orthogonality
singles out the wavenumbers where the tail amplitude can vanish, i.e. where
a true embedded soliton sits.  On the sech/sech^2 ansatz the projection
reduces to closed forms built from three sech-power cosine integrals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoRootError, RegionError, DomainTooShortError, ValidationError
from .model import ModelParams, RegionClass, classify_region, tail_wavenumber
from .numerics import ToleranceSpec, quad_adaptive
from .profiles import EsMethod, EsReport, FieldProfile, residual_max, sample_ansatz
from .va import SolitonAnsatz, ansatz_residuals, exact_amplitudes, exact_es_wavenumber

_SECH_MOMENTS = {2: 2.0, 4: 4.0 / 3.0, 6: 16.0 / 15.0}


def sech_cos_integral(n: int, a: float) -> float:
    """Closed form of the full-line integral of sech^n(x) cos(a x).

    Supported powers are n in {2, 4, 6}:

        I2(a) = pi a / sinh(pi a / 2)
        I4(a) = I2(a) (a^2 + 4) / 6
        I6(a) = I4(a) (a^2 + 16) / 20

    with the a -> 0 limits 2, 4/3, 16/15.  For sech^n(b t) cos(w t) use
    I_n(w/b)/b.
    """
    if n not in _SECH_MOMENTS:
        raise ValidationError("sech_cos_integral supports n in {2, 4, 6}")
    if a < 0.0:
        raise ValidationError("sech_cos_integral requires a >= 0")
    if a == 0.0:
        return _SECH_MOMENTS[n]
    try:
        I = math.pi * a / math.sinh(0.5 * math.pi * a)
    except OverflowError:
        return 0.0
    if n >= 4:
        I *= (a * a + 4.0) / 6.0
    if n == 6:
        I *= (a * a + 16.0) / 20.0
    return I


def sech_cos_integral_quadrature(n: int, a: float, high_precision: bool | None = None) -> float:
    """Independent adaptive-quadrature evaluation of the same integral.

    The integrand is split at the cosine zeros so each panel is smooth.
    For large ``a`` the integral is exponentially small while the integrand
    stays O(1), so double precision cannot beat the cancellation; those
    cases run the same adaptive rule in mpmath arithmetic.
    """
    if n not in _SECH_MOMENTS:
        raise ValidationError("sech_cos_integral_quadrature supports n in {2, 4, 6}")
    if a < 0.0:
        raise ValidationError("a must be >= 0")
    if high_precision is None:
        # e^(-pi a / 2) below ~1e-6 leaves too few f64 digits after cancellation
        high_precision = a > 8.0

    if not high_precision:
        T = 26.0
        zeros = ()
        if a > 0.0:
            zeros = tuple((j + 0.5) * math.pi / a for j in range(int(a * T / math.pi)))
            zeros = tuple(z for z in zeros if z < T)
        f = lambda t: math.cos(a * t) / math.cosh(t) ** n
        tol = ToleranceSpec(abs_tol=1e-16, rel_tol=1e-12, max_iter=400_000)
        return 2.0 * quad_adaptive(f, 0.0, T, tol, points=zeros)

    import mpmath as mp

    # the value is ~e^(-pi a/2) from O(1) oscillating lobes, so the sum is
    # done in 30-digit arithmetic with adaptive Gauss-Legendre per lobe
    with mp.workdps(30):
        aa = mp.mpf(a)
        T = mp.mpf(14) + 0.8 * aa
        pts = [mp.mpf(0)]
        if a > 0.0:
            m = int(aa * T / mp.pi)
            pts += [(j + mp.mpf(0.5)) * mp.pi / aa for j in range(m)]
            pts = [z for z in pts if z < T]
        pts.append(T)
        f = lambda t: mp.cos(aa * t) * mp.sech(t) ** n
        val = 2 * mp.quad(f, pts, method="gauss-legendre")
        return float(val)


@dataclass(frozen=True)
class TailAnsatz:
    """Infinitesimal SH tail b*cos(omega t + psi) added to the soliton core.

    The criterion is evaluated in the limit b -> 0, where the phase psi
    drops out (the sine projection vanishes by parity); psi is carried for
    bookkeeping only.
    """

    b: float
    omega: float
    psi: float = 0.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValidationError("tail ansatz requires a real positive omega")


class CriterionMethod(enum.Enum):
    CLOSED_FORM_TRUNCATED = "closed-form-truncated"
    CLOSED_FORM_FULL = "closed-form-full"
    NUMERIC_PROFILE = "numeric-profile"


@dataclass
class CriterionResult:
    """Roots of a tail-orthogonality criterion over a wavenumber bracket."""

    k_candidates: list[float]
    samples: list[tuple[float, float]] = field(default_factory=list)
    method: CriterionMethod = CriterionMethod.CLOSED_FORM_FULL


def _criterion_denominator(params: ModelParams, k: float) -> float:
    den = 2.0 * k * (1.0 + 2.0 * params.delta) - params.q
    if den == 0.0:
        raise ValidationError("criterion singular at 2k(1 + 2 delta) = q")
    return den


def criterion_truncated(params: ModelParams, B: float, k: float) -> float:
    """Truncated-model tail criterion f(k) = 4 g2 B + 3 delta k / (2k(1+2d) - q).

    The fundamental amplitude drops out of the projection, so only B
    enters; a root f = 0 marks an embedded-soliton wavenumber.  The value
    is meaningful as an orthogonality measure only in the
    embedded-permitted region, but the rational form is evaluated for any
    k > 0 away from the pole.
    """
    if k <= 0.0:
        raise ValidationError("criterion requires k > 0")
    return 4.0 * params.gamma2 * B + 3.0 * params.delta * k / _criterion_denominator(params, k)


def criterion_full(params: ModelParams, A: float, B: float, k: float) -> float:
    """Full-model tail criterion; reduces to the truncated one as B^2/A^2 -> 0."""
    if k <= 0.0:
        raise ValidationError("criterion requires k > 0")
    if A == 0.0:
        raise ValidationError("criterion_full requires A != 0")
    ratio = (B * B) / (A * A)
    corr = 1.0 + ratio * (2.0 * (8.0 * params.delta + 1.0) * k - params.q) / (40.0 * params.delta * k)
    return 4.0 * params.gamma2 * B * corr + 3.0 * params.delta * k / _criterion_denominator(params, k)


def _refine_root(f, lo, hi, width: float = 1e-12):
    """Bisection to the requested bracket width, then one secant-slope Newton polish."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    x = 0.5 * (lo + hi)
    h = max(1e-9 * abs(x), 1e-12)
    fx = f(x)
    slope = (f(x + h) - f(x - h)) / (2.0 * h)
    if slope != 0.0:
        x_new = x - fx / slope
        if lo <= x_new <= hi and abs(f(x_new)) <= abs(fx):
            x = x_new
    return x


def default_es_bracket(params: ModelParams, eps: float = 1e-6) -> tuple[float, float]:
    """Default wavenumber bracket for criterion root searches with delta > 0."""
    return (0.5 * params.q + eps, 2.0 * params.q)


def locate_es_full(
    params: ModelParams,
    A: float,
    B: float,
    k_bracket: tuple[float, float],
    n_scan: int = 64,
) -> CriterionResult:
    """All roots of the full-model criterion over ``k_bracket``.

    The bracket is sampled, sign changes are refined by bisection to width
    1e-12 plus a finite-difference Newton polish, and only roots inside the
    embedded-permitted region are kept.
    """
    lo, hi = k_bracket
    if not 0.0 < lo < hi:
        raise ValidationError("k_bracket must satisfy 0 < lo < hi")
    ks = np.linspace(lo, hi, n_scan)
    samples: list[tuple[float, float]] = []
    for k in ks:
        try:
            samples.append((float(k), criterion_full(params, A, B, float(k))))
        except ValidationError:
            samples.append((float(k), math.nan))

    f = lambda k: criterion_full(params, A, B, k)
    roots: list[float] = []
    for (k0, g0), (k1, g1) in zip(samples, samples[1:]):
        if not (math.isfinite(g0) and math.isfinite(g1)):
            continue
        if g0 == 0.0:
            roots.append(k0)
        elif g0 * g1 < 0.0:
            roots.append(_refine_root(f, k0, k1))
    roots = [k for k in roots if classify_region(params, k) is RegionClass.EMBEDDED_PERMITTED]
    if not roots:
        raise NoRootError("no root in bracket")
    return CriterionResult(k_candidates=roots, samples=samples, method=CriterionMethod.CLOSED_FORM_FULL)


def locate_es_truncated(params: ModelParams, profile_points: int = 1601) -> EsReport:
    """Exact-solution chain for the truncated model.

    Combines the closed-form wavenumber with the closed-form amplitudes,
    labels the result ordinary or embedded by its region (the exact
    solution is not always embedded), and attaches substitution residuals
    of the truncated equations as diagnostics.
    """
    k = exact_es_wavenumber(params)
    A2, B = exact_amplitudes(params, k)
    A = math.sqrt(A2)
    ansatz = SolitonAnsatz(A=A, B=B, k=k)
    region = classify_region(params, k)
    t_max = 20.0 / ansatz.beta
    prof = sample_ansatz(params, A, B, k, t_max, profile_points)
    rU, rV = ansatz_residuals(params, ansatz, prof.ts)
    crit = criterion_truncated(params, B, k)
    return EsReport(
        k_es=k,
        method=EsMethod.CRITERION_CLOSED_FORM,
        region=region.value,
        b_at_min=None,
        residual_max=float(max(np.max(np.abs(rU)), np.max(np.abs(rV)))),
        amplitude_a=A,
        amplitude_b=B,
        profile=prof,
        diagnostics={"criterion_value": crit, "a_squared": A2},
    )


def orthogonality_integral(
    params: ModelParams,
    profile: FieldProfile,
    k: float,
    decay_tol: float = 1e-6,
) -> float:
    """Numeric tail-orthogonality integral of a sampled profile.

    Integrates N(t) cos(omega t) over the full line (twice the half-line by
    symmetry), where N is the nonlinear part of the SH stationary equation:
    U^2/2 + 4 g2 U^2 V, plus 2 g2 V^3 in the full model.  Linear terms
    integrate to zero against the free tail and are omitted.  Uses the
    trapezoid rule on the profile's own grid with two Richardson
    refinements from interpolated midpoints.
    """
    omega = tail_wavenumber(params, k)
    if omega is None:
        raise RegionError("no oscillatory tail: k is outside the embedded-permitted region")
    scale_U = profile.max_U
    U_end, Up_end, _, _ = profile.endpoint_state()
    leak = abs(U_end) + abs(Up_end) / math.sqrt(2.0 * k)
    if scale_U > 0.0 and leak > decay_tol * scale_U:
        raise DomainTooShortError(
            f"domain too short: |U| has only decayed to {leak:.3g} at t = {profile.t_end:.3g}"
        )

    def integrand(ts, U, V):
        N = 0.5 * U * U + 4.0 * params.gamma2 * U * U * V
        if params.is_full:
            N = N + 2.0 * params.gamma2 * V**3
        return N * np.cos(omega * ts)

    def grid_value(ts, U, V):
        return float(np.trapezoid(integrand(ts, U, V), ts))

    ts0 = profile.ts
    levels = [grid_value(ts0, profile.Us, profile.Vs)]
    ts = ts0
    for _ in range(2):
        mids = 0.5 * (ts[:-1] + ts[1:])
        ts = np.sort(np.concatenate([ts, mids]))
        U, _, V, _ = profile.state_at(ts)
        levels.append(grid_value(ts, U, V))

    t0, t1, t2 = levels
    r1 = (4.0 * t1 - t0) / 3.0
    r2 = (4.0 * t2 - t1) / 3.0
    return 2.0 * ((16.0 * r2 - r1) / 15.0)


def closed_form_orthogonality(params: ModelParams, A: float, B: float, k: float) -> float:
    """Closed form of :func:`orthogonality_integral` on the ansatz fields."""
    omega = tail_wavenumber(params, k)
    if omega is None:
        raise RegionError("no oscillatory tail at this k")
    beta = math.sqrt(2.0 * k)
    a = omega / beta
    val = A * A * (0.5 * sech_cos_integral(2, a) + 4.0 * params.gamma2 * B * sech_cos_integral(4, a))
    if params.is_full:
        val += 2.0 * params.gamma2 * B**3 * sech_cos_integral(6, a)
    return val / beta
