"""Scheme coefficients for the 2k-order generalized-alpha family.

The user-facing knobs are the high-frequency dissipation controls
rho_inf (one per 3x3 block, each in [0, 1]).  Everything else -- the
alpha shifts, the gamma accuracy conditions and the beta values that
make the block spectra real in the stiff limit -- is derived here in
closed form:

    k = 1:   alpha_f = 1/(1+rho),  alpha_m = (2-rho)/(1+rho),
             gamma_1 = 1/2 + alpha_m - alpha_f,
             beta_1  = (1 + alpha_m - alpha_f)^2 / 4.

    k >= 2:  alpha_i = 2/(1+rho_i)            for i < k,
             alpha_k = (2-rho_k)/(1+rho_k),   alpha_f = 1/(1+rho_k),
             gamma_i = alpha_i - 1/2          for i < k,
             gamma_k = 1/2 - alpha_f + alpha_k,
             beta_i  = (1 + 4*gamma_i + 4*gamma_i^2) / 16.

Note beta_i = ((2*gamma_i + 1)/4)^2 identically, including the k=1 case.
All objects are immutable value types; the functions are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class DissipationSpec:
    """Half-order k (accuracy 2k) plus one dissipation control per block."""

    k: int
    rho: tuple[float, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "rho", tuple(float(r) for r in self.rho))
        if len(self.rho) != self.k:
            raise ValueError(f"expected {self.k} rho values, got {len(self.rho)}")
        for i, r in enumerate(self.rho):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"rho[{i}] = {r} outside [0, 1]")


@dataclass(frozen=True)
class SchemeParameters:
    """All coefficients of one 2k-order scheme.

    ``alpha`` holds alpha_1..alpha_k; for k = 1 the single entry is the
    acceleration shift alpha_m (one type serves every order).  ``rho`` is
    the originating dissipation spec, or None when the alphas were set
    directly (e.g. for stability-map scans).
    """

    k: int
    alpha: tuple[float, ...]
    alpha_f: float
    beta: tuple[float, ...]
    gamma: tuple[float, ...]
    rho: DissipationSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        for name in ("alpha", "beta", "gamma"):
            if len(getattr(self, name)) != self.k:
                raise ValueError(f"{name} must have length k = {self.k}")

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "rho": list(self.rho.rho) if self.rho is not None else None,
            "alpha": list(self.alpha),
            "alpha_f": self.alpha_f,
            "beta": list(self.beta),
            "gamma": list(self.gamma),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class StabilityReport:
    passed: bool
    violations: tuple[str, ...]


def _beta_from_gamma(gamma: float) -> float:
    # (1 + 4g + 4g^2)/16 == ((2g + 1)/4)^2; zeroes the imaginary part of
    # the block eigenvalues in the stiff limit.
    return ((2.0 * gamma + 1.0) / 4.0) ** 2


def derive_k1(rho_inf: float) -> SchemeParameters:
    """Classic second-order parameters from a single dissipation control."""
    spec = DissipationSpec(1, (rho_inf,))
    r = spec.rho[0]
    alpha_f = 1.0 / (1.0 + r)
    alpha_m = (2.0 - r) / (1.0 + r)
    gamma1 = 0.5 + alpha_m - alpha_f
    beta1 = 0.25 * (1.0 + alpha_m - alpha_f) ** 2
    return SchemeParameters(
        k=1,
        alpha=(alpha_m,),
        alpha_f=alpha_f,
        beta=(beta1,),
        gamma=(gamma1,),
        rho=spec,
    )


def derive_high_order(spec: DissipationSpec) -> SchemeParameters:
    """Coefficients for k >= 2; alpha_f comes from the last control."""
    if spec.k < 2:
        raise ValueError("derive_high_order requires k >= 2; use derive_k1")
    k = spec.k
    rho = spec.rho
    alpha = [2.0 / (1.0 + rho[i]) for i in range(k - 1)]
    alpha.append((2.0 - rho[-1]) / (1.0 + rho[-1]))
    alpha_f = 1.0 / (1.0 + rho[-1])
    gamma = [alpha[i] - 0.5 for i in range(k - 1)]
    gamma.append(0.5 - alpha_f + alpha[-1])
    beta = [_beta_from_gamma(g) for g in gamma]
    return SchemeParameters(
        k=k,
        alpha=tuple(alpha),
        alpha_f=alpha_f,
        beta=tuple(beta),
        gamma=tuple(gamma),
        rho=spec,
    )


def derive(spec: DissipationSpec) -> SchemeParameters:
    """Dispatch on k; convenience wrapper used by the CLI."""
    if spec.k == 1:
        return derive_k1(spec.rho[0])
    return derive_high_order(spec)


def check_stability_conditions(p: SchemeParameters) -> StabilityReport:
    """Closed-form sufficient conditions for unconditional stability.

    For k >= 2: alpha_i >= 1 for i < k and 1/2 <= alpha_f <= alpha_k.
    For k = 1 only the second pair applies (with alpha_k = alpha_m).
    Exact comparisons on the stored values; no tolerance.
    """
    violations = []
    for i in range(p.k - 1):
        if not p.alpha[i] >= 1.0:
            violations.append(f"alpha_{i + 1} >= 1")
    if not p.alpha_f >= 0.5:
        violations.append("alpha_f >= 1/2")
    if not p.alpha_f <= p.alpha[-1]:
        violations.append(f"alpha_f <= alpha_{p.k}")
    return StabilityReport(passed=not violations, violations=tuple(violations))


def from_alphas(
    k: int, alpha: Sequence[float], alpha_f: float
) -> SchemeParameters:
    """Build parameters from raw alpha values, recomputing gamma and beta
    from the order conditions.  Used by stability-map scans; the result
    carries no dissipation spec."""
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != k:
        raise ValueError(f"expected {k} alpha values, got {len(alpha)}")
    gamma = [alpha[i] - 0.5 for i in range(k - 1)]
    # For k=1 this is the classic 1/2 + alpha_m - alpha_f.
    gamma.append(0.5 - alpha_f + alpha[-1])
    beta = [_beta_from_gamma(g) for g in gamma]
    return SchemeParameters(
        k=k, alpha=alpha, alpha_f=float(alpha_f),
        beta=tuple(beta), gamma=tuple(gamma), rho=None,
    )
