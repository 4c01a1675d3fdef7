"""Analytic time evolution of the atomic X state in the dispersive regime.

Two atoms couple dispersively to a single damped cavity mode prepared in a
coherent state. The populations p1, p4 are constants of motion, the inner
(2,3) block rotates undamped at the exchange rate, and only the outer
coherence rho14 dephases, toward a non-zero stationary magnitude. All public
times are the dimensionless lam*t; kappa is expressed in units of lam.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .discord import DiscordBreakdown, discord
from .xstate import DEFAULT_TOL, XState, require_valid

TWO_PI = 2.0 * math.pi

# Zero-event kinds.
DISCRETE = "discrete"
PERIODIC_MEMBER = "periodic-member"
ASYMPTOTIC = "asymptotic"

#: Default discord level below which a trajectory point counts as "zero".
DEFAULT_ZERO_THRESHOLD = 5e-3

#: Time resolution of the golden-section refinement of event minima.
REFINE_TIME_TOL = 1e-6


class DispersiveRegimeWarning(UserWarning):
    """The detuning is not large enough for the dispersive approximation."""


@dataclass(frozen=True)
class TCParams:
    """Dispersive-model parameters.

    lam: effective exchange/Stark rate (sets the time unit; lam = 1 makes all
    times dimensionless). kappa: cavity amplitude decay rate in units of lam.
    alpha_sq: mean photon number of the initial coherent field.
    """

    lam: float = 1.0
    kappa: float = 0.0
    alpha_sq: float = 0.0

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError(f"lam = {self.lam!r} must be positive")
        if self.kappa < 0.0:
            raise ValueError(f"kappa = {self.kappa!r} must be nonnegative")
        if self.alpha_sq < 0.0:
            raise ValueError(f"alpha_sq = {self.alpha_sq!r} must be nonnegative")


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Initial-condition constants of the inner-block solution:
    c_plus/c_minus = (p2(0) +- p3(0))/2 and rho23(0) = c1 + i*c2."""

    c_plus: float
    c_minus: float
    c1: float
    c2: float

    @classmethod
    def from_state(cls, state: XState) -> "PropagatorCoefficients":
        rho23 = state.rho23
        return cls(
            c_plus=0.5 * (state.p2 + state.p3),
            c_minus=0.5 * (state.p2 - state.p3),
            c1=rho23.real,
            c2=rho23.imag,
        )


@dataclass(frozen=True)
class ZeroEvent:
    """A maximal time interval where the discord stays below the threshold."""

    t_center: float
    t_enter: float
    t_exit: float
    min_discord: float
    kind: str

    def as_dict(self) -> dict:
        return {
            "t_center": self.t_center,
            "t_enter": self.t_enter,
            "t_exit": self.t_exit,
            "min_discord": self.min_discord,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled evolution with per-sample correlation breakdowns."""

    times: np.ndarray
    states: tuple[XState, ...]
    breakdowns: tuple[DiscordBreakdown, ...]
    zero_events: tuple[ZeroEvent, ...]
    initial: XState
    params: TCParams


def lambda_from_g_delta(g: float, delta: float) -> float:
    """Effective rate g^2/(2*delta); the sign follows the detuning.

    Warns (DispersiveRegimeWarning) when |delta| < 10*g, where the
    second-order elimination of the cavity is no longer trustworthy.
    """
    if delta == 0.0:
        raise ValueError("detuning must be nonzero")
    if abs(delta) < 10.0 * abs(g):
        warnings.warn(
            f"|delta| = {abs(delta)!r} is below 10*g = {10.0 * abs(g)!r}; "
            "the dispersive result is unreliable here",
            DispersiveRegimeWarning,
            stacklevel=2,
        )
    return g * g / (2.0 * delta)


def _outer_phase_factor(params: TCParams, t: float) -> complex:
    """Damping/phase factor multiplying rho41(0) at time t."""
    lam, kap, asq = params.lam, params.kappa, params.alpha_sq
    z = complex(kap, 2.0 * lam)
    w = -1j * lam * t - (2j * lam * asq / z) * (1.0 - cmath.exp(-z * t))
    return cmath.exp(w)


def evolve(initial: XState, params: TCParams, t: float, tol: float = DEFAULT_TOL) -> XState:
    """Propagate the X state to time t (t >= 0, in units of 1/lam when lam=1).

    p1 and p4 are held at their initial values; p3 closes the trace, so the
    trace is exact by construction. The inner block is a rigid rotation, so
    its positivity is preserved; the outer coherence magnitude only shrinks.
    """
    require_valid(initial, tol)
    if t < 0.0:
        raise ValueError(f"t = {t!r} must be nonnegative")
    lam = params.lam
    co = PropagatorCoefficients.from_state(initial)
    cos_lt = math.cos(lam * t)
    sin_lt = math.sin(lam * t)
    p2_t = co.c_plus + co.c_minus * cos_lt - co.c2 * sin_lt
    p3_t = 1.0 - initial.p1 - p2_t - initial.p4
    rho23_t = complex(co.c1, co.c2 * cos_lt + co.c_minus * sin_lt)
    rho41_t = initial.rho14.conjugate() * _outer_phase_factor(params, t)
    return XState.from_coherences(
        initial.p1, p2_t, p3_t, initial.p4, rho14=rho41_t.conjugate(), rho23=rho23_t
    )


def steady_coherence(initial_r14: float, params: TCParams) -> float:
    """Long-time magnitude of the outer coherence:
    r14(0) * exp(-4*lam^2*|alpha|^2 / (kappa^2 + 4*lam^2))."""
    lam, kap = params.lam, params.kappa
    return initial_r14 * math.exp(-4.0 * lam**2 * params.alpha_sq / (kap**2 + 4.0 * lam**2))


def steady_coherence_as_printed(initial_r14: float, params: TCParams) -> float:
    """Variant with the denominator kappa^2 + (4*lam)^2 instead of
    kappa^2 + (2*lam)^2. It does NOT agree with the long-time limit of
    evolve(); verify reports both numbers so the difference stays visible."""
    lam, kap = params.lam, params.kappa
    return initial_r14 * math.exp(-4.0 * lam**2 * params.alpha_sq / (kap**2 + 16.0 * lam**2))


def trajectory(
    initial: XState,
    params: TCParams,
    t_max: float,
    n_samples: int,
    zero_threshold: float | None = DEFAULT_ZERO_THRESHOLD,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """Sample the evolution on a uniform grid over [0, t_max] and attach the
    detected zero-discord events (skipped when zero_threshold is None)."""
    require_valid(initial, tol)
    if n_samples < 2:
        raise ValueError(f"n_samples = {n_samples!r} must be at least 2")
    if not t_max > 0.0:
        raise ValueError(f"t_max = {t_max!r} must be positive")
    times = np.linspace(0.0, t_max, n_samples)
    states = tuple(evolve(initial, params, float(t), tol) for t in times)
    breakdowns = tuple(discord(s, tol) for s in states)
    traj = Trajectory(
        times=times,
        states=states,
        breakdowns=breakdowns,
        zero_events=(),
        initial=initial,
        params=params,
    )
    if zero_threshold is None:
        return traj
    return replace(traj, zero_events=tuple(find_zeros(traj, zero_threshold)))


def _discord_at(initial: XState, params: TCParams, t: float) -> float:
    return discord(evolve(initial, params, t)).discord


def _golden_min(fn, a: float, b: float, tol: float):
    """Golden-section minimum of fn on [a, b] to within tol in the argument."""
    gr = (1.0 + math.sqrt(5.0)) / 2.0
    c = b - (b - a) / gr
    d = a + (b - a) / gr
    fc, fd = fn(c), fn(d)
    while abs(c - d) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) / gr
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) / gr
            fd = fn(d)
    m = 0.5 * (a + b)
    return m, fn(m)


def _crossing(t0, t1, d0, d1, threshold):
    """Linear interpolation of the time where the discord crosses threshold."""
    if d1 == d0:
        return t0
    return t0 + (threshold - d0) * (t1 - t0) / (d1 - d0)


def find_zeros(traj: Trajectory, threshold: float = DEFAULT_ZERO_THRESHOLD) -> list[ZeroEvent]:
    """Locate and classify the below-threshold excursions of the discord.

    Each maximal run of below-threshold samples becomes one event; its minimum
    is refined by golden-section search on discord(evolve(.)) to a time
    resolution of 1e-6. Kinds: an event whose excursion reaches t_max is
    `asymptotic`; events recurring with near-constant spacing (at least three
    of them, spacing within 25% of their median) are `periodic-member`;
    anything else is `discrete`.
    """
    if len(traj.times) == 0:
        raise ValueError("trajectory is empty")
    times = np.asarray(traj.times, dtype=float)
    disc = np.array([b.discord for b in traj.breakdowns])
    below = disc < threshold

    events = []
    idx = 0
    n = len(times)
    while idx < n:
        if not below[idx]:
            idx += 1
            continue
        start = idx
        while idx + 1 < n and below[idx + 1]:
            idx += 1
        stop = idx
        idx += 1

        if start == 0:
            t_enter = float(times[0])
        else:
            t_enter = _crossing(times[start - 1], times[start], disc[start - 1], disc[start], threshold)
        reaches_end = stop == n - 1
        if reaches_end:
            t_exit = float(times[-1])
        else:
            t_exit = _crossing(times[stop], times[stop + 1], disc[stop], disc[stop + 1], threshold)

        k = start + int(np.argmin(disc[start : stop + 1]))
        lo = times[max(k - 1, 0)]
        hi = times[min(k + 1, n - 1)]
        if hi > lo:
            t_center, refined = _golden_min(
                lambda t: _discord_at(traj.initial, traj.params, t), lo, hi, REFINE_TIME_TOL
            )
        else:
            t_center, refined = float(times[k]), float(disc[k])
        min_discord = min(refined, float(disc[start : stop + 1].min()))
        t_center = min(max(t_center, t_enter), t_exit)
        kind = ASYMPTOTIC if reaches_end else DISCRETE
        events.append(
            ZeroEvent(float(t_center), float(t_enter), float(t_exit), float(min_discord), kind)
        )

    _mark_periodic(events)
    return events


def _mark_periodic(events: list[ZeroEvent]) -> None:
    """Upgrade `discrete` events that recur with near-constant spacing."""
    idx = [i for i, e in enumerate(events) if e.kind == DISCRETE]
    if len(idx) < 3:
        return
    centers = np.array([events[i].t_center for i in idx])
    gaps = np.diff(centers)
    period = float(np.median(gaps))
    if period <= 0.0:
        return
    regular = np.abs(gaps - period) <= 0.25 * period
    for j, i in enumerate(idx):
        left_ok = j > 0 and regular[j - 1]
        right_ok = j < len(gaps) and regular[j]
        if left_ok or right_ok:
            events[i] = replace(events[i], kind=PERIODIC_MEMBER)
