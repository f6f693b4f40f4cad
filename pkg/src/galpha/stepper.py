"""Time stepping for the scalar oscillator u'' + lambda*u = 0.

The integrator carries the 3k time derivatives u, u', u'', ..., up to
order 3k-1 (physical, unscaled values).  One step solves k scalar
implicit equations -- one per 3x3 block -- and then updates all 3k
entries explicitly from step-n values plus the block residuals.  Every
divisor has the form alpha_j + lambda*tau^2*c_j*beta_j with c_j = 1 for
the leading blocks and c_k = alpha_f for the last one.

Two Taylor-span variants exist for k >= 3.  FULL_TAYLOR (the default)
extends each block's Taylor predictors over every higher derivative in
the state, which reproduces the k = 2 scheme exactly and attains order
2k.  AS_PRINTED truncates the predictors of the leading blocks (three
terms for middle blocks, order 3k-3 for the first); it is kept as a
comparison mode and tops out near order 3 for k = 3.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from enum import Enum
from math import factorial

from .errors import SingularStepError
from .params import SchemeParameters, check_stability_conditions


class Variant(str, Enum):
    FULL_TAYLOR = "full"
    AS_PRINTED = "printed"


@dataclass(frozen=True)
class OscillatorMode:
    """One modal stiffness lambda of u'' + lambda*u = 0 (units 1/time^2)."""

    lam: float


@dataclass(frozen=True)
class StepConfig:
    tau: float
    variant: Variant = Variant.FULL_TAYLOR
    allow_negative_lambda: bool = False

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class ModalState:
    """Derivatives d[j] ~ u^(j)(t) for j = 0..3k-1 at one time level."""

    k: int
    t: float
    d: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(float(x) for x in self.d))
        if len(self.d) != 3 * self.k:
            raise ValueError(f"state must hold 3k = {3 * self.k} entries")


@dataclass(frozen=True)
class Trajectory:
    times: tuple[float, ...]
    states: tuple[ModalState, ...]

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        for a, b in zip(self.times, self.times[1:]):
            if not b > a:
                raise ValueError("times must be strictly increasing")

    def write_csv(self, fh) -> None:
        """Columns t, d0..d{3k-1}; full double precision."""
        k = self.states[0].k
        w = csv.writer(fh)
        w.writerow(["t"] + [f"d{j}" for j in range(3 * k)])
        for t, s in zip(self.times, self.states):
            w.writerow([repr(t)] + [repr(x) for x in s.d])


def _check_lambda(mode: OscillatorMode, cfg: StepConfig) -> None:
    if mode.lam < 0.0 and not cfg.allow_negative_lambda:
        raise ValueError(
            f"lambda = {mode.lam} < 0 rejected; set allow_negative_lambda"
        )


def init_state(mode: OscillatorMode, u0: float, v0: float, k: int) -> ModalState:
    """Exact initial derivatives via repeated differentiation of
    u'' = -lambda*u: d[2m] = (-lambda)^m u0, d[2m+1] = (-lambda)^m v0."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    lam = mode.lam
    d = []
    for j in range(3 * k):
        base = u0 if j % 2 == 0 else v0
        d.append((-lam) ** (j // 2) * base + 0.0)  # + 0.0 drops negative zero
    return ModalState(k=k, t=0.0, d=tuple(d))


def _solve_divisor(alpha: float, shift: float, rhs: float) -> float:
    div = alpha + shift
    if abs(div) < 1e-14 * max(abs(alpha), abs(shift), 1e-300):
        raise SingularStepError(
            f"scalar divisor alpha + lambda*tau^2*c*beta = {div} "
            f"(alpha = {alpha}, shift = {shift})"
        )
    return rhs / div


def step_k1(
    p: SchemeParameters, mode: OscillatorMode, cfg: StepConfig, s: ModalState
) -> ModalState:
    """One second-order step: d = [U, V, A], alpha[0] is alpha_m."""
    if p.k != 1 or s.k != 1:
        raise ValueError("step_k1 requires k = 1 parameters and state")
    _check_lambda(mode, cfg)
    lam, tau = mode.lam, cfg.tau
    u, v, a = s.d
    am, af, b1, g1 = p.alpha[0], p.alpha_f, p.beta[0], p.gamma[0]
    rhs = -lam * u - lam * af * (tau * v + 0.5 * tau * tau * a) - a
    jump = _solve_divisor(am, lam * tau * tau * af * b1, rhs)
    u1 = u + tau * v + 0.5 * tau * tau * a + tau * tau * b1 * jump
    v1 = v + tau * a + tau * g1 * jump
    a1 = a + jump
    return ModalState(k=1, t=s.t + tau, d=(u1, v1, a1))


def _taylor(d, tau, i, end):
    """Taylor predictor of derivative i over state entries i..end."""
    acc = 0.0
    for m in range(end, i - 1, -1):
        acc += tau ** (m - i) / factorial(m - i) * d[m]
    return acc


def step_high_order(
    p: SchemeParameters, mode: OscillatorMode, cfg: StepConfig, s: ModalState
) -> ModalState:
    """One 2k-order step for k >= 2.

    Residuals for all k blocks are computed first, from step-n values
    only, then every entry is updated; runs are therefore reproducible
    regardless of evaluation order.
    """
    k = p.k
    if k < 2:
        raise ValueError("step_high_order requires k >= 2; use step_k1")
    if s.k != k:
        raise ValueError(f"state has k = {s.k}, parameters have k = {k}")
    _check_lambda(mode, cfg)
    report = check_stability_conditions(p)
    if not report.passed:
        warnings.warn(
            "parameters violate the unconditional-stability conditions: "
            + ", ".join(report.violations),
            stacklevel=2,
        )
    lam, tau = mode.lam, cfg.tau
    d = s.d
    n = 3 * k
    top = n - 1
    full = cfg.variant is Variant.FULL_TAYLOR

    # Residual solves, one scalar division per block.
    res = []
    for j in range(1, k):
        b = 3 * (j - 1)
        if full:
            rhs = -lam * _taylor(d, tau, b, top) - _taylor(d, tau, b + 2, top)
        elif j == 1:
            u_pred = _taylor(d, tau, 0, n - 3)
            rhs = -lam * u_pred - _taylor(d, tau, 2, top)
        else:
            pred = d[b] + tau * d[b + 1] + 0.5 * tau * tau * d[b + 2]
            rhs = -lam * pred - _taylor(d, tau, b + 2, b + 5)
        res.append(_solve_divisor(p.alpha[j - 1], lam * tau * tau * p.beta[j - 1], rhs))
    b = 3 * (k - 1)
    rhs = (
        -lam * (d[b] + p.alpha_f * (tau * d[b + 1] + 0.5 * tau * tau * d[b + 2]))
        - d[b + 2]
    )
    res.append(
        _solve_divisor(p.alpha[k - 1], lam * tau * tau * p.alpha_f * p.beta[k - 1], rhs)
    )

    # Explicit updates from step-n values plus residuals.
    new = [0.0] * n
    for j in range(1, k):
        b = 3 * (j - 1)
        r = res[j - 1]
        bj, gj = p.beta[j - 1], p.gamma[j - 1]
        if full:
            new[b] = _taylor(d, tau, b, top) + bj * tau * tau * r
            new[b + 1] = _taylor(d, tau, b + 1, top) + gj * tau * r
            new[b + 2] = _taylor(d, tau, b + 2, top) + r
        elif j == 1:
            end = n - 3
            new[0] = _taylor(d, tau, 0, end) + bj * tau * tau * r
            new[1] = _taylor(d, tau, 1, end) + gj * tau * r
            new[2] = _taylor(d, tau, 2, end) + r
        else:
            new[b] = d[b] + tau * d[b + 1] + 0.5 * tau * tau * d[b + 2] + bj * tau * tau * r
            new[b + 1] = d[b + 1] + tau * d[b + 2] + gj * tau * r
            new[b + 2] = _taylor(d, tau, b + 2, b + 5) + r
    b = 3 * (k - 1)
    r = res[k - 1]
    new[b] = d[b] + tau * d[b + 1] + 0.5 * tau * tau * d[b + 2] + p.beta[k - 1] * tau * tau * r
    new[b + 1] = d[b + 1] + tau * d[b + 2] + p.gamma[k - 1] * tau * r
    new[b + 2] = d[b + 2] + r
    return ModalState(k=k, t=s.t + tau, d=tuple(new))


def step(
    p: SchemeParameters, mode: OscillatorMode, cfg: StepConfig, s: ModalState
) -> ModalState:
    return step_k1(p, mode, cfg, s) if p.k == 1 else step_high_order(p, mode, cfg, s)


def integrate(
    p: SchemeParameters,
    mode: OscillatorMode,
    cfg: StepConfig,
    u0: float,
    v0: float,
    n_steps: int,
) -> Trajectory:
    """n_steps uniform steps from the exact initial state; n_steps+1
    snapshots at t_i = i*tau."""
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    s = init_state(mode, u0, v0, p.k)
    states = [s]
    for i in range(n_steps):
        s = step(p, mode, cfg, s)
        # keep times exactly i*tau to avoid drift in long runs
        s = ModalState(k=s.k, t=(i + 1) * cfg.tau, d=s.d)
        states.append(s)
    return Trajectory(
        times=tuple(st.t for st in states), states=tuple(states)
    )
