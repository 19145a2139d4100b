"""Shared numeric kernel: quadrature, root finding, minimization, ODE stepping.

Everything here is deterministic and stateless.  The quadrature and root
routines use plain Python arithmetic so they also work with ``mpmath``
scalars when an oracle needs more than double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BlowUpError,
    BracketError,
    NoConvergenceError,
    StepUnderflowError,
    ValidationError,
)


@dataclass(frozen=True)
class ToleranceSpec:
    """Absolute/relative tolerance pair plus an iteration budget."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 100_000

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValidationError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")


DEFAULT_QUAD_TOL = ToleranceSpec(abs_tol=1e-13, rel_tol=1e-11, max_iter=200_000)
DEFAULT_ROOT_TOL = ToleranceSpec(abs_tol=1e-13, rel_tol=1e-13, max_iter=200)
DEFAULT_ODE_TOL = ToleranceSpec(abs_tol=1e-10, rel_tol=1e-10, max_iter=2_000_000)

# largest |u| < 1 that atanh maps to a finite time; clipping the transformed
# interval here loses measure ~2e-16 of a bounded integrand
_U_CLIP = 1.0 - 2.0**-52


def _as_tol(tol, default):
    if tol is None:
        return default
    if isinstance(tol, ToleranceSpec):
        return tol
    return ToleranceSpec(abs_tol=float(tol), rel_tol=float(tol), max_iter=default.max_iter)


def quad_adaptive(f, a, b, tol=None, points=()) -> float:
    """Adaptive Simpson integral of ``f`` over ``[a, b]``.

    Infinite endpoints are handled by the substitution t = atanh(u), under
    which integrands built from powers of sech become polynomials in u.
    ``points`` lists optional interior breakpoints (useful for oscillatory
    integrands).  The result carries error <= max(abs_tol, rel_tol*|I|)
    up to the usual adaptive-estimator heuristics.

    Raises NoConvergenceError if the subdivision budget is exhausted.
    """
    tol = _as_tol(tol, DEFAULT_QUAD_TOL)
    a_inf = math.isinf(a) and a < 0
    b_inf = math.isinf(b) and b > 0
    if a_inf or b_inf:
        if points:
            raise ValidationError("breakpoints are not supported with infinite endpoints")
        if a_inf and b_inf:
            g = lambda u: f(math.atanh(u)) / (1.0 - u * u)
            return _simpson_adaptive(g, [-_U_CLIP, 0.0, _U_CLIP], tol)
        if b_inf:
            g = lambda u: f(a + math.atanh(u)) / (1.0 - u * u)
            return _simpson_adaptive(g, [0.0, _U_CLIP], tol)
        g = lambda u: f(b - math.atanh(u)) / (1.0 - u * u)
        return _simpson_adaptive(g, [0.0, _U_CLIP], tol)

    if not a < b:
        raise ValidationError("quad_adaptive requires a < b")
    knots = [a] + [p for p in points if a < p < b] + [b]
    for lo, hi in zip(knots, knots[1:]):
        if not lo < hi:
            raise ValidationError("breakpoints must be sorted and interior")
    return _simpson_adaptive(f, knots, tol)


def _simpson(f, x0, x2):
    x1 = 0.5 * (x0 + x2)
    f1 = f(x1)
    return x1, f1, (x2 - x0) * (f(x0) + 4.0 * f1 + f(x2)) / 6.0


def _simpson_adaptive(f, knots, tol):
    # coarse pass fixes the scale used for the relative-error target
    width = knots[-1] - knots[0]
    coarse = 0.0
    panels = []
    for lo, hi in zip(knots, knots[1:]):
        flo, fhi = f(lo), f(hi)
        xm, fm, s = _simpson_3(lo, flo, hi, fhi, xm=None, fm=None, f=f)
        panels.append((lo, flo, hi, fhi, xm, fm, s))
        coarse = coarse + s

    total = None
    for _ in range(2):
        scale = abs(coarse) if total is None else abs(total)
        eps = max(tol.abs_tol, tol.rel_tol * scale)
        budget = [tol.max_iter]
        total = 0.0
        for lo, flo, hi, fhi, xm, fm, s in panels:
            frac = (hi - lo) / width
            total = total + _simpson_recurse(f, lo, flo, hi, fhi, xm, fm, s, eps * frac, budget)
        if abs(total - coarse) <= max(tol.abs_tol, tol.rel_tol * abs(total)) * 1e3:
            break
        coarse = total
    return total


def _simpson_3(x0, f0, x2, f2, xm, fm, f):
    if xm is None:
        xm = 0.5 * (x0 + x2)
        fm = f(xm)
    return xm, fm, (x2 - x0) * (f0 + 4.0 * fm + f2) / 6.0


def _simpson_recurse(f, x0, f0, x2, f2, x1, f1, whole, eps, budget):
    # iterative bisection with the classic |S2 - S1|/15 estimate
    stack = [(x0, f0, x2, f2, x1, f1, whole, eps)]
    acc = 0.0
    while stack:
        x0, f0, x2, f2, x1, f1, whole, eps = stack.pop()
        budget[0] -= 1
        if budget[0] < 0:
            raise NoConvergenceError("quad_adaptive: no convergence within max_iter subdivisions")
        la, lfa, left = _simpson_3(x0, f0, x1, f1, None, None, f)
        ra, rfa, right = _simpson_3(x1, f1, x2, f2, None, None, f)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or (x1 - x0) <= abs(x1) * 2.0**-50 + 5e-324:
            acc = acc + left + right + delta / 15.0
        else:
            stack.append((x0, f0, x1, f1, la, lfa, left, eps * 0.5))
            stack.append((x1, f1, x2, f2, ra, rfa, right, eps * 0.5))
    return acc


def find_root_bracketed(f, a, b, tol=None) -> float:
    """Root of ``f`` inside the sign-changing bracket ``[a, b]``.

    Bisection with a secant candidate each iteration; the returned point
    never leaves the initial bracket.  Raises BracketError when f(a) and
    f(b) do not have opposite signs.
    """
    tol = _as_tol(tol, DEFAULT_ROOT_TOL)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"invalid bracket: f({a!r}) and f({b!r}) have the same sign")

    use_secant = True
    for _ in range(tol.max_iter):
        width = b - a
        if width <= max(tol.abs_tol, tol.rel_tol * max(abs(a), abs(b))):
            break
        x = None
        if use_secant and fb != fa:
            x = b - fb * (b - a) / (fb - fa)
            margin = 0.01 * width
            if not (a + margin < x < b - margin):
                x = None
        if x is None:
            x = a + 0.5 * width
        fx = f(x)
        if fx == 0.0:
            return x
        # alternate secant/bisection so the bracket provably shrinks
        use_secant = not use_secant
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
    else:
        raise NoConvergenceError("find_root_bracketed: iteration budget exhausted")
    return a + 0.5 * (b - a)


def minimize_scalar(f, a, b, tol=None):
    """Golden-section minimum of ``f`` on ``[a, b]``.

    Returns ``(x_min, f_min)``; on flat functions this is simply the best
    sample seen, endpoints included.
    """
    tol = _as_tol(tol, ToleranceSpec(abs_tol=1e-10, rel_tol=1e-10, max_iter=500))
    if not a < b:
        raise ValidationError("minimize_scalar requires a < b")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    best = min((f(a), a), (f(b), b), (f1, x1), (f2, x2))
    for _ in range(tol.max_iter):
        if (b - a) <= max(tol.abs_tol, tol.rel_tol * max(abs(a), abs(b))):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
            best = min(best, (f1, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
            best = min(best, (f2, x2))
    fm, xm = best
    return xm, fm


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class Trajectory:
    """Dense ODE solution: accepted steps plus cubic Hermite interpolation."""

    def __init__(self, ts, ys, fs):
        self.ts = np.asarray(ts, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.fs = np.asarray(fs, dtype=float)

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    @property
    def y_end(self) -> np.ndarray:
        return self.ys[-1]

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, len(self.ts) - 2)
        h = self.ts[idx + 1] - self.ts[idx]
        s = (t - self.ts[idx]) / h
        return idx, h, s

    def __call__(self, t):
        idx, h, s = self._locate(t)
        s = s[..., None] if np.ndim(s) else s
        h_ = h[..., None] if np.ndim(h) else h
        y0, y1 = self.ys[idx], self.ys[idx + 1]
        f0, f1 = self.fs[idx], self.fs[idx + 1]
        s2, s3 = s * s, s * s * s
        return (
            (2 * s3 - 3 * s2 + 1) * y0
            + (s3 - 2 * s2 + s) * h_ * f0
            + (-2 * s3 + 3 * s2) * y1
            + (s3 - s2) * h_ * f1
        )

    def derivative(self, t):
        idx, h, s = self._locate(t)
        s = s[..., None] if np.ndim(s) else s
        h_ = h[..., None] if np.ndim(h) else h
        y0, y1 = self.ys[idx], self.ys[idx + 1]
        f0, f1 = self.fs[idx], self.fs[idx + 1]
        s2 = s * s
        return (
            (6 * s2 - 6 * s) * y0 / h_
            + (3 * s2 - 4 * s + 1) * f0
            + (-6 * s2 + 6 * s) * y1 / h_
            + (3 * s2 - 2 * s) * f1
        )


def ode_adaptive(
    rhs,
    y0,
    t_span,
    tol=None,
    *,
    max_step=math.inf,
    first_step=None,
    fixed_step=None,
    ceiling=None,
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` over ``t_span`` with a DP 5(4) pair.

    Local error per step is kept below abs_tol + rel_tol*|y| componentwise
    (RMS-normed).  ``fixed_step`` disables step control entirely, which the
    order-verification tests use.  ``ceiling`` bounds max|y|; crossing it
    raises BlowUpError carrying the last accepted state.
    """
    tol = _as_tol(tol, DEFAULT_ODE_TOL)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValidationError("ode_adaptive requires t1 > t0")
    y = np.asarray(y0, dtype=float).copy()
    span = t1 - t0

    ts = [t0]
    ys = [y.copy()]
    f = np.asarray(rhs(t0, y), dtype=float)
    fs = [f.copy()]

    if fixed_step is not None:
        h = float(fixed_step)
    elif first_step is not None:
        h = float(first_step)
    else:
        scale = tol.abs_tol + tol.rel_tol * float(np.max(np.abs(y)))
        fnorm = float(np.max(np.abs(f))) + 1e-300
        h = min(span / 50.0, max_step, 0.1 * (scale / fnorm) ** 0.2 + 1e-6 * span)

    t = t0
    k = [None] * 7
    n_steps = 0
    while t < t1:
        n_steps += 1
        if n_steps > tol.max_iter:
            raise NoConvergenceError("ode_adaptive: step budget exhausted")
        h = min(h, max_step)
        if h >= t1 - t:
            h = t1 - t  # final clamped step, exempt from the underflow check
        elif h < 1e-14 * span:
            raise StepUnderflowError("ode_adaptive: step underflow")

        k[0] = f
        for i in range(1, 7):
            yi = y.copy()
            for j, aij in enumerate(_DP_A[i]):
                if aij != 0.0:
                    yi += (h * aij) * k[j]
            k[i] = np.asarray(rhs(t + _DP_C[i] * h, yi), dtype=float)
        y_new = yi  # 7th stage is evaluated at the 5th-order solution (FSAL)

        if fixed_step is None:
            err = np.zeros_like(y)
            for ei, ki in zip(_DP_E, k):
                if ei != 0.0:
                    err += (h * ei) * ki
            sc = tol.abs_tol + tol.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            with np.errstate(invalid="ignore", divide="ignore"):
                enorm = math.sqrt(float(np.mean((err / sc) ** 2)))
            if not math.isfinite(enorm):
                h *= 0.2
                continue
            if enorm > 1.0:
                h *= max(0.2, 0.9 * enorm ** -0.2)
                continue
            factor = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
        else:
            factor = 1.0

        t += h
        y = y_new
        f = k[6]
        if not np.all(np.isfinite(y)) or (ceiling is not None and float(np.max(np.abs(y))) > ceiling):
            raise BlowUpError("state exceeded the blow-up ceiling", t=t, y=y.copy())
        ts.append(t)
        ys.append(y.copy())
        fs.append(f.copy())
        h *= factor

    return Trajectory(ts, ys, fs)
