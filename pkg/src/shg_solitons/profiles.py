"""Sampled field profiles and the report types built on top of them.

A :class:`FieldProfile` stores a half-line solution (t >= 0) of the
stationary system together with first derivatives at every node, which is
enough for accurate Hermite interpolation anywhere in the domain.  The
residual diagnostic rebuilds second derivatives from the model equations at
the nodes and measures how far the interpolated profile is from solving the
ODEs between them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .model import ModelParams, StationaryState, residual_U, residual_V, second_derivatives


class EsMethod(enum.Enum):
    """How an embedded-soliton candidate was located."""

    TAIL_SCAN = "tail-scan"
    CRITERION_CLOSED_FORM = "criterion-closed-form"
    CRITERION_FROM_PROFILE = "criterion-from-profile"


class FieldProfile:
    """Sampled (t, U, V, U', V') solution on [0, T] with even symmetry."""

    def __init__(self, ts, Us, Vs, Ups, Vps, params: ModelParams, k: float):
        self.ts = np.asarray(ts, dtype=float)
        self.Us = np.asarray(Us, dtype=float)
        self.Vs = np.asarray(Vs, dtype=float)
        self.Ups = np.asarray(Ups, dtype=float)
        self.Vps = np.asarray(Vps, dtype=float)
        self.params = params
        self.k = float(k)
        n = len(self.ts)
        if n < 2:
            raise ValidationError("profile needs at least two samples")
        if self.ts[0] != 0.0:
            raise ValidationError("profile must start at t = 0")
        if np.any(np.diff(self.ts) <= 0.0):
            raise ValidationError("profile times must be strictly increasing")
        if self.Ups[0] != 0.0 or self.Vps[0] != 0.0:
            raise ValidationError("even symmetry requires U'(0) = V'(0) = 0")
        self._second = None

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    @property
    def max_U(self) -> float:
        return float(np.max(np.abs(self.Us)))

    @property
    def max_V(self) -> float:
        return float(np.max(np.abs(self.Vs)))

    def _second_derivs(self):
        if self._second is None:
            self._second = second_derivatives(self.params, self.k, self.Us, self.Vs)
        return self._second

    def state_at(self, t):
        """Interpolated (U, Up, V, Vp) at times ``t`` (scalar or array).

        U and V come from cubic Hermite interpolation on (value, slope);
        Up and Vp likewise, with their slopes supplied by the model's
        second derivatives at the nodes.
        """
        Upps, Vpps = self._second_derivs()
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, len(self.ts) - 2)
        h = self.ts[idx + 1] - self.ts[idx]
        s = (t - self.ts[idx]) / h
        s2, s3 = s * s, s * s * s
        h00 = 2 * s3 - 3 * s2 + 1
        h10 = s3 - 2 * s2 + s
        h01 = -2 * s3 + 3 * s2
        h11 = s3 - s2

        def herm(vals, slopes):
            return (
                h00 * vals[idx]
                + h10 * h * slopes[idx]
                + h01 * vals[idx + 1]
                + h11 * h * slopes[idx + 1]
            )

        U = herm(self.Us, self.Ups)
        Up = herm(self.Ups, Upps)
        V = herm(self.Vs, self.Vps)
        Vp = herm(self.Vps, Vpps)
        return U, Up, V, Vp

    def endpoint_state(self):
        return self.Us[-1], self.Ups[-1], self.Vs[-1], self.Vps[-1]


def sample_ansatz(params: ModelParams, A: float, B: float, k: float, t_max: float, n: int = 1601) -> FieldProfile:
    """Profile sampled from U = A sech(bt), V = B sech^2(bt), b = sqrt(2k)."""
    if k <= 0.0:
        raise ValidationError("ansatz sampling requires k > 0")
    beta = np.sqrt(2.0 * k)
    ts = np.linspace(0.0, t_max, n)
    sech = 1.0 / np.cosh(beta * ts)
    tanh = np.tanh(beta * ts)
    Us = A * sech
    Ups = -A * beta * sech * tanh
    Vs = B * sech**2
    Vps = -2.0 * B * beta * sech**2 * tanh
    return FieldProfile(ts, Us, Vs, Ups, Vps, params, k)


# quintic two-point Hermite basis on s in [0, 1]; rows multiply
# (f0, h f0', h^2 f0'', f1, h f1', h^2 f1'')
def _quintic_value(s):
    s2, s3, s4, s5 = s * s, s**3, s**4, s**5
    return (
        1 - 10 * s3 + 15 * s4 - 6 * s5,
        s - 6 * s3 + 8 * s4 - 3 * s5,
        0.5 * (s2 - 3 * s3 + 3 * s4 - s5),
        10 * s3 - 15 * s4 + 6 * s5,
        -4 * s3 + 7 * s4 - 3 * s5,
        0.5 * (s3 - 2 * s4 + s5),
    )


def _quintic_second(s):
    s2, s3 = s * s, s**3
    return (
        -60 * s + 180 * s2 - 120 * s3,
        -36 * s + 96 * s2 - 60 * s3,
        1 - 9 * s + 18 * s2 - 10 * s3,
        60 * s - 180 * s2 + 120 * s3,
        -24 * s + 84 * s2 - 60 * s3,
        3 * s - 12 * s2 + 10 * s3,
    )


def residual_max(profile: FieldProfile, interior_points=(0.25, 0.5, 0.75)) -> float:
    """Max-norm ODE residual of the profile between its nodes.

    Each interval gets a quintic Hermite reconstruction of U and V from the
    nodal values, slopes, and model-consistent second derivatives; the
    residuals of both stationary equations are then evaluated at interior
    points using the reconstruction's own second derivative.  Exact
    solutions give values at the interpolation-error level.
    """
    p, k = profile.params, profile.k
    Upps, Vpps = profile._second_derivs()
    h = np.diff(profile.ts)

    def packs(vals, slopes, seconds):
        return (
            vals[:-1], h * slopes[:-1], h * h * seconds[:-1],
            vals[1:], h * slopes[1:], h * h * seconds[1:],
        )

    pu = packs(profile.Us, profile.Ups, Upps)
    pv = packs(profile.Vs, profile.Vps, Vpps)

    worst = 0.0
    for s in interior_points:
        wv = _quintic_value(s)
        ws = _quintic_second(s)
        U = sum(w * c for w, c in zip(wv, pu))
        V = sum(w * c for w, c in zip(wv, pv))
        Upp = sum(w * c for w, c in zip(ws, pu)) / (h * h)
        Vpp = sum(w * c for w, c in zip(ws, pv)) / (h * h)
        st = StationaryState(k=k, U=U, Up=0.0, V=V, Vp=0.0)
        rU = residual_U(p, st, Upp)
        rV = residual_V(p, st, Vpp)
        worst = max(worst, float(np.max(np.abs(rU))), float(np.max(np.abs(rV))))
    return worst


@dataclass(frozen=True)
class TailMeasurement:
    """Oscillating-tail amplitude extracted from a profile window.

    ``b`` is the window average of sqrt(V^2 + (V'/omega)^2), which equals
    the amplitude exactly for a pure cosine tail of any phase.  ``u_leak``
    diagnoses how well the fundamental has decayed at the window end.
    """

    b: float
    omega: float
    T: float
    u_leak: float
    window: tuple[float, float]
    b_coherent: float = 0.0
    psi: float = 0.0


@dataclass
class EsReport:
    """Located embedded-soliton candidate with diagnostics."""

    k_es: float
    method: EsMethod
    region: str
    b_at_min: float | None = None
    residual_max: float | None = None
    amplitude_a: float | None = None
    amplitude_b: float | None = None
    profile: FieldProfile | None = None
    diagnostics: dict = field(default_factory=dict)
