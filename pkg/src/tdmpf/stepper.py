"""
Long-time simulation by composing one MPF per mesh interval.

The adaptive mesh follows the usual error-splitting argument: if each of the
r steps satisfies max Lambda * dt_i <= cap(r) with

    cap(r) = (1/41) (eps / (0.32 ||a||_1 r))^{1/(2M+1)},

the one-step bound sums to at most eps.
"""
from dataclasses import dataclass
from math import ceil

import numpy as np
from scipy.integrate import quad

from . import operators as ops
from .bounds import step_cap, step_count_bound
from .errors import BudgetInfeasibleError, InvalidInputError
from .mpf import mpf_apply_many

R_MAX = 10 ** 9
_SAMPLES = 33
_UNIT = np.linspace(0.0, 1.0, _SAMPLES)


@dataclass(frozen=True)
class StepPlan:
    mesh: np.ndarray
    eps_budget: float = None
    per_step_caps: np.ndarray = None
    r_bound: float = None

    @property
    def r(self):
        return len(self.mesh) - 1

    @property
    def steps(self):
        return np.diff(self.mesh)


def _sample(lam, ts):
    """Lambda on an array of times; one vectorized call when the callable allows it."""
    try:
        vals = np.asarray(lam(ts), dtype=float)
        if vals.shape == ts.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(lam(t)) for t in ts])


def max_over(lam, a, b):
    """max of Lambda on [a, b].

    33 samples, two zoomed resamplings around the best one, then Lambda at the
    vertex of the parabola through the final best sample and its neighbours.
    """
    lo, hi = a, b
    best = -np.inf
    for _ in range(3):
        ts = lo + (hi - lo) * _UNIT
        vals = _sample(lam, ts)
        i = int(np.argmax(vals))
        best = max(best, vals[i])
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, _SAMPLES - 1)]
    if 0 < i < _SAMPLES - 1:
        f0, f1, f2 = vals[i - 1], vals[i], vals[i + 1]
        curv = f0 - 2 * f1 + f2
        if curv < 0:
            h = ts[1] - ts[0]
            tv = ts[i] + 0.5 * h * (f0 - f2) / curv
            best = max(best, float(_sample(lam, np.array([tv]))[0]))
    return float(best)


def _caps(lam, mesh):
    return np.array([max_over(lam, a, b) * (b - a) for a, b in zip(mesh[:-1], mesh[1:])])


def uniform_plan(t0, t1, r, lam=None):
    """r equal steps; caps are max Lambda * dt per step when a Lambda bound is given."""
    if int(r) != r or r < 1:
        raise InvalidInputError("r must be a positive integer")
    if not t1 > t0:
        raise InvalidInputError("need t1 > t0")
    mesh = np.linspace(t0, t1, int(r) + 1)
    mesh[0], mesh[-1] = t0, t1
    caps = _caps(lam, mesh) if lam is not None else None
    return StepPlan(mesh, None, caps)


def _fits(lam, t, step, cap):
    return max_over(lam, t, t + step) * step <= cap * (1 + 1e-12)


def _largest_step(lam, t, remaining, cap, hint=None):
    """Largest step from t (to 1e-3 relative) whose max Lambda * step stays under cap.

    The search starts from ``hint`` (the previous step) when given, or from
    cap / Lambda(t), and widens geometrically until the answer is bracketed.
    """
    guess = hint if hint else cap / float(lam(t))
    guess = min(guess, remaining)
    rel = 1e-3
    if _fits(lam, t, guess, cap):
        lo = guess
        while lo < remaining:
            cand = min(lo * (1 + rel), remaining)
            if not _fits(lam, t, cand, cap):
                hi = cand
                break
            lo, rel = cand, 2 * rel
        else:
            return lo
    else:
        hi = guess
        while True:
            cand = hi / (1 + rel)
            if _fits(lam, t, cand, cap):
                lo = cand
                break
            hi, rel = cand, 2 * rel
            if hi < 1e-300:
                return 0.0
    while hi - lo > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if _fits(lam, t, mid, cap):
            lo = mid
        else:
            hi = mid
    return lo


def _greedy(lam, t0, t1, cap, limit):
    """Left-to-right mesh with each step as long as the cap allows.

    Returns None as soon as more than ``limit`` steps would be needed.
    """
    mesh = [t0]
    t, step = t0, None
    while t < t1:
        if len(mesh) > limit:
            return None
        step = _largest_step(lam, t, t1 - t, cap, step)
        if step <= 0:
            raise BudgetInfeasibleError("step size collapsed to zero")
        t = t1 if t1 - (t + step) <= 1e-12 * max(1.0, abs(t1)) else t + step
        mesh.append(t)
    return np.array(mesh)


def _constant_count(value, span, M, anorm, eps, r):
    """Fixed point of the greedy count for constant Lambda, starting from r."""
    while True:
        n = max(1, ceil(value * span / step_cap(M, anorm, eps, r) * (1 - 1e-12)))
        if n >= r:
            return r
        r = n


def _equidistributed(lam, t0, t1, r):
    """Mesh splitting the integral of Lambda into r equal parts."""
    grid = np.linspace(t0, t1, max(2049, 8 * r + 1))
    vals = _sample(lam, grid)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))])
    targets = np.linspace(0.0, cum[-1], r + 1)
    mesh = np.interp(targets, cum, grid)
    mesh[0], mesh[-1] = t0, t1
    return mesh


def adaptive_plan(lam, t0, t1, eps, scheme):
    """Lambda-adaptive mesh meeting total error ``eps`` with the one-step bound.

    r is first fixed from the step-count bound (rounded up).  A greedy pass then
    places steps under cap(r); if it finishes with fewer steps, r is lowered to
    that count and the pass repeated, since a smaller r only loosens the cap.
    When the mesh that equidistributes the integral of Lambda also meets the
    caps it is preferred (for constant Lambda this is the uniform mesh).

    Parameters
    ----------
    lam : LambdaBound
    t0, t1 : float
    eps : float
        Total error budget.
    scheme : MpfScheme
    """
    if not eps > 0:
        raise InvalidInputError("eps must be positive")
    if not t1 > t0:
        raise InvalidInputError("need t1 > t0")
    M, anorm, K = scheme.M, scheme.a_norm1, float(getattr(lam, "K", 0.0))
    lam_int = quad(lambda s: float(lam(s)), t0, t1, limit=200)[0]
    lam_bar = lam_int / (t1 - t0)
    bound = step_count_bound(M, anorm, K, lam_bar, t1 - t0, eps)
    if bound > R_MAX:
        raise BudgetInfeasibleError(f"step-count bound {bound:.3g} exceeds {R_MAX}")
    r = max(1, ceil(bound))
    cap = step_cap(M, anorm, eps, r)
    if K > 0 and cap > 1 / K:
        raise BudgetInfeasibleError("eps too large for the K-limited regime")

    if getattr(lam, "value", None) is not None:
        # constant Lambda: the greedy mesh is uniform apart from a short last step,
        # so only the step count is needed
        r = _constant_count(lam.value, t1 - t0, M, anorm, eps, r)
        mesh = np.linspace(t0, t1, r + 1)
        mesh[0], mesh[-1] = t0, t1
        return StepPlan(mesh, float(eps), np.diff(mesh) * lam.value, float(bound))

    mesh = _greedy(lam, t0, t1, cap, r)
    while mesh is None:
        # the max of Lambda over a step can exceed the average used by the bound
        r = ceil(1.05 * r) + 1
        if r > R_MAX:
            raise BudgetInfeasibleError("greedy mesh does not converge")
        cap = step_cap(M, anorm, eps, r)
        mesh = _greedy(lam, t0, t1, cap, r)
    while len(mesh) - 1 < r:
        r = len(mesh) - 1
        cap = step_cap(M, anorm, eps, r)
        trial = _greedy(lam, t0, t1, cap, r)
        if trial is None:
            break
        mesh = trial
    # greedy steps fall short of the cap by up to the 1e-3 bisection tolerance,
    # so an equidistributed mesh with slightly fewer steps may still fit
    r = len(mesh) - 1
    best = None
    lo, hi = max(1, min(r - 2, int(r * (1 - 2e-3)))), r
    while lo <= hi:
        mid = (lo + hi) // 2
        even = _equidistributed(lam, t0, t1, mid)
        even_caps = _caps(lam, even)
        if np.all(even_caps <= step_cap(M, anorm, eps, mid) * (1 + 1e-12)):
            best, hi = (even, even_caps), mid - 1
        else:
            lo = mid + 1
    if best is not None:
        mesh, caps = best
    else:
        caps = _caps(lam, mesh)
    return StepPlan(mesh, float(eps), caps, float(bound))


def simulate_long(model, scheme, plan):
    """Ordered product of per-step MPFs over the plan's mesh, later steps on the left."""
    mesh = np.asarray(plan.mesh, dtype=float)
    if mesh.ndim != 1 or len(mesh) < 2 or np.any(np.diff(mesh) <= 0):
        raise InvalidInputError("plan mesh must be strictly increasing")
    steps = mpf_apply_many(model, scheme, mesh[:-1], np.diff(mesh))
    return ops.ordered_product(steps)
