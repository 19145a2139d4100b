"""Variational approximation for the truncated model.

The trial fields are U = A sech(sqrt(2k) t) and V = B sech^2(sqrt(2k) t).
Because the truncated model lacks a complete Lagrangian, the A-variation
must hold the U^2 V^2 cross-phase term fixed; that modified variation gives
B = 2k - gamma1 A^2, and the remaining B-variation collapses to a
biquadratic in A.  At one special wavenumber the same ansatz solves the
truncated equations exactly, and both closed forms for that solution live
here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEquationError,
    InvalidWavenumberError,
    UnphysicalError,
    ValidationError,
)
from .model import ModelParams


@dataclass(frozen=True)
class SolitonAnsatz:
    """Variational triple (A, B, k) for the sech / sech^2 trial fields."""

    A: float
    B: float
    k: float

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValidationError("ansatz requires k > 0")

    @property
    def beta(self) -> float:
        return math.sqrt(2.0 * self.k)

    def U(self, t):
        return self.A / np.cosh(self.beta * np.asarray(t))

    def V(self, t):
        return self.B / np.cosh(self.beta * np.asarray(t)) ** 2

    def Up(self, t):
        bt = self.beta * np.asarray(t)
        return -self.A * self.beta * np.tanh(bt) / np.cosh(bt)

    def Vp(self, t):
        bt = self.beta * np.asarray(t)
        return -2.0 * self.B * self.beta * np.tanh(bt) / np.cosh(bt) ** 2

    def Upp(self, t):
        s = 1.0 / np.cosh(self.beta * np.asarray(t))
        return self.A * self.beta**2 * (s - 2.0 * s**3)

    def Vpp(self, t):
        s = 1.0 / np.cosh(self.beta * np.asarray(t))
        return self.B * self.beta**2 * (4.0 * s**2 - 6.0 * s**4)


@dataclass(frozen=True)
class VaSolution:
    """One root of the amplitude equation, with its Lagrangian value."""

    ansatz: SolitonAnsatz
    branch: int
    leff: float


def _bracket(params: ModelParams, k: float) -> float:
    return 2.0 * (1.0 - 0.4 * params.delta) * k - params.q


def effective_lagrangian(params: ModelParams, a: SolitonAnsatz, include_xpm_term: bool = True) -> float:
    """Effective Lagrangian of the truncated system on the ansatz.

    ``include_xpm_term=False`` drops the (32/5) gamma2 A^2 B^2 cross term,
    the piece that must not be varied with respect to A.
    """
    A2 = a.A * a.A
    B = a.B
    F = (
        -4.0 * a.k * A2
        - 2.0 * _bracket(params, a.k) * B * B
        + 2.0 * A2 * B
        + params.gamma1 * A2 * A2
    )
    if include_xpm_term:
        F += (32.0 / 5.0) * params.gamma2 * A2 * B * B
    return F / (3.0 * a.beta)


def eliminate_B(params: ModelParams, A: float, k: float) -> float:
    """B from the modified A-variation (the cross term held fixed)."""
    if k <= 0.0:
        raise ValidationError("eliminate_B requires k > 0")
    return 2.0 * k - params.gamma1 * A * A


def biquadratic_coeffs(params: ModelParams, k: float):
    """Coefficients (c4, c2, c0) of c4 x^2 - c2 x + c0 = 0 for x = A^2."""
    P = _bracket(params, k)
    c4 = (32.0 / 5.0) * params.gamma1 * params.gamma2
    c2 = 1.0 + (64.0 / 5.0) * k * params.gamma2 + 2.0 * params.gamma1 * P
    c0 = 4.0 * k * P
    return c4, c2, c0


def biquadratic_roots(params: ModelParams, k: float) -> list[float]:
    """All real roots x = A^2 of the amplitude equation, sign unfiltered.

    Uses the cancellation-safe quadratic formula (larger-magnitude root
    first, companion from the root product), which matters when
    gamma1*gamma2 is tiny.
    """
    if k <= 0.0:
        raise ValidationError("solve requires k > 0")
    c4, c2, c0 = biquadratic_coeffs(params, k)
    if c4 == 0.0:
        if c2 == 0.0:
            raise DegenerateEquationError("degenerate quadratic: both leading coefficients vanish")
        return [c0 / c2]
    disc = c2 * c2 - 4.0 * c4 * c0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    if c2 == 0.0:
        x2 = -c0 / c4
        if x2 < 0.0:
            return []
        r = math.sqrt(x2)
        return [-r, r] if r > 0.0 else [0.0]
    qq = 0.5 * (c2 + math.copysign(sq, c2))
    roots = [qq / c4, c0 / qq]
    if disc == 0.0:
        roots = roots[:1]
    return sorted(roots)


def solve_biquadratic(params: ModelParams, k: float) -> list[VaSolution]:
    """Physical (A^2 > 0) solutions of the amplitude equation at fixed k.

    Returns zero, one, or two entries sorted by ascending A^2; the branch
    index records the position in that ordering.
    """
    sols = []
    for i, x in enumerate(sorted(r for r in biquadratic_roots(params, k) if r > 0.0 and math.isfinite(r))):
        a = SolitonAnsatz(A=math.sqrt(x), B=eliminate_B(params, math.sqrt(x), k), k=k)
        sols.append(VaSolution(ansatz=a, branch=i, leff=effective_lagrangian(params, a)))
    return sols


def exact_es_wavenumber(params: ModelParams) -> float:
    """The single wavenumber at which the ansatz solves the truncated model exactly."""
    d1 = 4.0 * params.gamma2 + 3.0 * params.delta * params.gamma1
    d2 = 1.0 + 2.0 * params.delta
    if d1 == 0.0 or d2 == 0.0:
        raise InvalidWavenumberError("closed-form wavenumber has a singular denominator")
    k = 0.5 / d2 * (params.q - 1.5 * params.delta / d1)
    if not (k > 0.0 and math.isfinite(k)):
        raise InvalidWavenumberError(f"closed-form wavenumber k = {k:.6g} is not positive")
    return k


def exact_amplitudes(params: ModelParams, k: float):
    """Amplitudes (A^2, B) of the exact truncated-model solution at k.

    Requires delta*gamma2 < 0, otherwise A^2 would be negative and the
    solution unphysical.
    """
    if params.gamma2 == 0.0:
        raise ValidationError("exact amplitudes require gamma2 != 0")
    if k <= 0.0:
        raise ValidationError("exact amplitudes require k > 0")
    A2 = -3.0 * params.delta * k / (2.0 * params.gamma2)
    if A2 <= 0.0:
        raise UnphysicalError(f"A^2 = {A2:.6g} <= 0 (needs delta*gamma2 < 0)")
    return A2, 2.0 * k - params.gamma1 * A2


def ansatz_residuals(params: ModelParams, a: SolitonAnsatz, ts):
    """Residuals of both stationary equations on the ansatz, via analytic
    derivatives.  The substitution oracle for the exact-solution chain."""
    from .model import StationaryState, residual_U, residual_V

    ts = np.asarray(ts, dtype=float)
    st = StationaryState(k=a.k, U=a.U(ts), Up=a.Up(ts), V=a.V(ts), Vp=a.Vp(ts))
    return residual_U(params, st, a.Upp(ts)), residual_V(params, st, a.Vpp(ts))
