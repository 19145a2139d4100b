"""Stationary chi2:chi3 second-harmonic-generation model.

The stationary fields ``U`` (fundamental) and ``V`` (second harmonic) of a
soliton with wavenumber ``k`` obey

    -k U + U''/2 + U V + gamma1 U^3 (+ 2 gamma1 V^2 U)            = 0
    -2k V - (delta/2) V'' + q V + U^2/2 + 4 gamma2 U^2 V
                                        (+ 2 gamma2 V^3)          = 0

where the parenthesised cross terms are present only in the full model and
dropped in the truncated one.  All routines here are pure functions; the
residuals accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import ValidationError


class Variant(enum.Enum):
    """Which set of cubic terms the model keeps."""

    FULL = "full"
    TRUNCATED = "truncated"

    @classmethod
    def from_string(cls, s: str) -> "Variant":
        try:
            return cls(s.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown model variant: {s!r}") from None


class RegionClass(enum.Enum):
    """Spectral classification of a wavenumber k for given (delta, q)."""

    ORDINARY = "ordinary"
    EMBEDDED_PERMITTED = "embedded-permitted"
    NEITHER = "neither"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the model.

    Attributes
    ----------
    delta : float
        Relative dispersion coefficient of the second harmonic (nonzero).
    q : float
        Phase mismatch of the second harmonic.
    gamma1, gamma2 : float
        Kerr coefficients of the fundamental and second harmonic.  They
        normally share a sign; a sign clash only triggers a warning since
        the equations stay well posed.
    variant : Variant
        FULL keeps every cubic term, TRUNCATED drops the two cross terms.
    """

    delta: float
    q: float
    gamma1: float = 0.0
    gamma2: float = 0.0
    variant: Variant = Variant.TRUNCATED

    def __post_init__(self):
        if self.delta == 0.0:
            raise ValidationError("delta must be nonzero (SH equation degenerates)")
        if self.gamma1 * self.gamma2 < 0.0:
            warnings.warn(
                "gamma1 and gamma2 have opposite signs; the model is "
                "normally used with Kerr coefficients of one sign",
                stacklevel=2,
            )

    @property
    def is_full(self) -> bool:
        return self.variant is Variant.FULL


@dataclass(frozen=True)
class StationaryState:
    """Point values of the fields and first derivatives at one t.

    Field entries may be numpy arrays of a common shape, in which case the
    residual functions broadcast.
    """

    k: float
    U: float
    Up: float
    V: float
    Vp: float


def residual_U(params: ModelParams, s: StationaryState, Upp) -> float:
    """Pointwise residual of the fundamental-harmonic stationary equation.

    Zero on exact solutions.  ``Upp`` is the second derivative of U supplied
    by the caller (analytic or numerical).
    """
    r = -s.k * s.U + 0.5 * Upp + s.U * s.V + params.gamma1 * s.U**3
    if params.is_full:
        r = r + 2.0 * params.gamma1 * s.V**2 * s.U
    return r


def residual_V(params: ModelParams, s: StationaryState, Vpp) -> float:
    """Pointwise residual of the second-harmonic stationary equation."""
    r = (
        -2.0 * s.k * s.V
        - 0.5 * params.delta * Vpp
        + params.q * s.V
        + 0.5 * s.U**2
        + 4.0 * params.gamma2 * s.U**2 * s.V
    )
    if params.is_full:
        r = r + 2.0 * params.gamma2 * s.V**3
    return r


def second_derivatives(params: ModelParams, k: float, U, V):
    """Second derivatives (U'', V'') solved from the stationary equations."""
    Upp = 2.0 * (k * U - U * V - params.gamma1 * U**3)
    Vpp = (2.0 / params.delta) * (
        (params.q - 2.0 * k) * V + 0.5 * U**2 + 4.0 * params.gamma2 * U**2 * V
    )
    if params.is_full:
        Upp = Upp - 4.0 * params.gamma1 * V**2 * U
        Vpp = Vpp + (4.0 * params.gamma2 / params.delta) * V**3
    return Upp, Vpp


def rhs_first_order(params: ModelParams, k: float, state):
    """First-order form of the stationary system.

    ``state`` is (U, Up, V, Vp); the return value is its t-derivative
    (Up, Upp, Vp, Vpp).  Round-tripping the returned second derivatives
    through :func:`residual_U` / :func:`residual_V` gives exactly zero.
    """
    U, Up, V, Vp = state
    Upp, Vpp = second_derivatives(params, k, U, V)
    return (Up, Upp, Vp, Vpp)


def tail_wavenumber(params: ModelParams, k: float) -> float | None:
    """Wavenumber of the free oscillating SH tail, or None if there is none.

    The linearised SH equation admits a tail cos(omega t + psi) with
    omega = sqrt((2/delta) (2k - q)) whenever that radicand is positive;
    otherwise the caller is in the ordinary-soliton regime.
    """
    if k <= 0.0:
        raise ValidationError("tail_wavenumber requires k > 0")
    w2 = (2.0 / params.delta) * (2.0 * k - params.q)
    if w2 <= 0.0:
        return None
    return math.sqrt(w2)


def classify_region(params: ModelParams, k: float) -> RegionClass:
    """Classify k as ordinary-soliton, embedded-permitted, or neither.

    For delta > 0 ordinary solitons live in 0 < k < q/2 and embedded ones
    may exist for k > max(0, q/2); for delta < 0 the two regions swap.
    Boundary values and k <= 0 classify as NEITHER.
    """
    half_q = 0.5 * params.q
    if params.delta > 0.0:
        if 0.0 < k < half_q:
            return RegionClass.ORDINARY
        if k > max(0.0, half_q):
            return RegionClass.EMBEDDED_PERMITTED
    else:
        if k > max(0.0, half_q):
            return RegionClass.ORDINARY
        if 0.0 < k < half_q:
            return RegionClass.EMBEDDED_PERMITTED
    return RegionClass.NEITHER
