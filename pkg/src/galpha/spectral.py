"""Eigenvalue analysis of the amplification matrix.

Because G is block upper triangular with 3x3 diagonal blocks, its
spectrum is the union of k cubic spectra.  Each block is reduced to the
invariants of its characteristic polynomial

    x^3 - G1*x^2 + G2*x - G3,

with G1 the trace, G2 the sum of principal 2x2 minors and G3 the
determinant, and the cubic is solved in closed form: trigonometric when
the discriminant indicates three real roots, Cardano (one real plus a
conjugate pair) otherwise.  The closed form is ill-conditioned when the
roots cluster (the coefficients forget the splitting), so clustered
blocks fall back to a direct 3x3 eigensolver.  Conjugate pairs whose
imaginary part is negligible are then flattened onto the real axis with
their magnitude kept exact: in the stiff limit each block collapses
onto a double or triple real root at rho_inf and the O(sigma^-1/2)
splitting at large finite sigma must not surface as spurious imaginary
parts, while spectral radii stay accurate to round-off.

Sigma convention: sigma = lambda*tau^2 >= 0 everywhere; sweeps use a
positive log axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import acos, cos, pi, sqrt

import numpy as np

from .params import SchemeParameters, from_alphas
from .errors import UnsupportedParametersError
from .amplification import amplification_matrix, diagonal_blocks
from .stepper import Variant


@dataclass(frozen=True)
class CubicCoefficients:
    """Invariants (trace, minor sum, determinant) of a 3x3 matrix."""

    G1: float
    G2: float
    G3: float


@dataclass(frozen=True)
class EigenSet:
    """3k eigenvalues grouped by block, 3 per block; within each block
    sorted by descending magnitude, ties by descending real part."""

    k: int
    values: tuple[complex, ...]

    def blocks(self) -> list[tuple[complex, complex, complex]]:
        return [tuple(self.values[3 * j : 3 * j + 3]) for j in range(self.k)]


@dataclass(frozen=True)
class SpectrumSample:
    sigma: float
    eigs: EigenSet
    radius: float


@dataclass(frozen=True)
class SweepConfig:
    sigma_min: float = 1e-6
    sigma_max: float = 1e8
    n_points: int = 60
    log_spacing: bool = True

    def grid(self) -> np.ndarray:
        if not (0.0 < self.sigma_min < self.sigma_max):
            raise ValueError("need 0 < sigma_min < sigma_max")
        if self.n_points < 2:
            raise ValueError("need at least 2 sweep points")
        if self.log_spacing:
            return np.logspace(
                np.log10(self.sigma_min), np.log10(self.sigma_max), self.n_points
            )
        return np.linspace(self.sigma_min, self.sigma_max, self.n_points)


@dataclass(frozen=True)
class ParameterAxis:
    name: str  # "alpha1".."alphaK" or "alpha_f"
    lo: float
    hi: float
    n: int


@dataclass(frozen=True)
class StabilityMapPoint:
    x: float
    y: float
    max_radius: float
    stable: bool


@dataclass(frozen=True)
class StabilityMap:
    k: int
    x_axis: ParameterAxis
    y_axis: ParameterAxis
    fixed: dict
    points: tuple[StabilityMapPoint, ...]


# Grid-based stability proxy: radii up to 1 + this slack count as stable,
# absorbing round-off for spectra sitting exactly on the unit circle.
STABILITY_TOL = 1e-9


def char_coeffs_3x3(M) -> CubicCoefficients:
    """Exact trace / principal-minor sum / determinant of a 3x3 matrix."""
    M = np.asarray(M, dtype=float)
    g1 = M[0, 0] + M[1, 1] + M[2, 2]
    g2 = (
        M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
        + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]
    )
    g3 = (
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )
    return CubicCoefficients(G1=g1, G2=g2, G3=g3)


# A conjugate pair this close to the real axis (relative to its
# magnitude) is flattened onto it with |z| kept exact.  In the stiff
# limit each block collapses onto double or triple real roots whose
# O(sigma^-1/2) complex splitting would otherwise surface as spurious
# imaginary parts; preserving the magnitude keeps spectral radii
# unaffected by the flattening.
FLATTEN_TOL = 1e-3

# Closed-form roots computed from the characteristic coefficients lose
# accuracy once the roots cluster (the coefficients forget the
# splitting); below this relative separation the block eigenvalues are
# recomputed directly from the matrix.
CLUSTER_TOL = 1e-2


def cubic_roots(c: CubicCoefficients) -> tuple[complex, complex, complex]:
    """Roots of x^3 - G1*x^2 + G2*x - G3 in closed form.

    The sign of the depressed-cubic discriminant decides the branch:
    trigonometric for three real roots, Cardano for one real root plus
    a conjugate pair (pairing exact by construction).
    """
    b, cc, d = -c.G1, c.G2, -c.G3
    shift = -b / 3.0
    p = cc - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * cc / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc <= 0.0:
        if p >= 0.0:
            # disc <= 0 forces p, q ~ 0 within round-off: triple root
            return (complex(shift), complex(shift), complex(shift))
        m = 2.0 * sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        theta = acos(arg) / 3.0
        roots = [m * cos(theta - 2.0 * pi * i / 3.0) + shift for i in range(3)]
        return tuple(complex(r) for r in roots)
    sq = sqrt(disc)
    # pick the cube root that avoids cancellation, recover the other from
    # the product u*v = -p/3
    u3 = -q / 2.0 - sq if q > 0.0 else -q / 2.0 + sq
    u = float(np.cbrt(u3))
    v = -p / (3.0 * u)
    real = u + v + shift
    re = -(u + v) / 2.0 + shift
    im = abs(u - v) * sqrt(3.0) / 2.0
    return (complex(real), complex(re, im), complex(re, -im))


def _flatten_near_real(roots) -> list[complex]:
    """Replace conjugate pairs with |Im| <= FLATTEN_TOL * max(1, |z|)
    by two real values of the same magnitude (sign from the real part)."""
    out = []
    for z in roots:
        mag = abs(z)
        if z.imag != 0.0 and abs(z.imag) <= FLATTEN_TOL * max(1.0, mag):
            out.append(complex(mag if z.real >= 0.0 else -mag))
        else:
            out.append(complex(z))
    return out


def _block_eigs(blk) -> list[complex]:
    """Eigenvalues of one 3x3 block.

    Well-separated roots come from the closed-form cubic.  A fully
    clustered triple splits from its limit in a cube-root-of-unity
    pattern, so the individual magnitudes drift as O(split) while their
    product stays put; the cluster is collapsed to three real values of
    magnitude |G3|^(1/3), which recovers the limit to round-off.  A
    clustered pair (third root apart) is recomputed with a direct
    eigensolver, then near-real pairs are flattened
    magnitude-preservingly."""
    c = char_coeffs_3x3(blk)
    roots = list(cubic_roots(c))
    scale = max(1.0, max(abs(z) for z in roots))
    seps = (
        abs(roots[0] - roots[1]),
        abs(roots[0] - roots[2]),
        abs(roots[1] - roots[2]),
    )
    if max(seps) < CLUSTER_TOL * scale:
        mag = abs(c.G3) ** (1.0 / 3.0)
        val = complex(mag if c.G1 >= 0.0 else -mag)
        return [val, val, val]
    if min(seps) < CLUSTER_TOL * scale:
        roots = [complex(z) for z in np.linalg.eigvals(np.asarray(blk))]
    return _flatten_near_real(roots)


def _sort_block(roots) -> list[complex]:
    return sorted(roots, key=lambda z: (-abs(z), -z.real, -z.imag))


def eigvals(
    p: SchemeParameters, sigma: float, variant: Variant = Variant.FULL_TAYLOR
) -> EigenSet:
    """Spectrum of G(sigma) as the union of the k block cubics."""
    G = amplification_matrix(p, sigma, variant)
    values: list[complex] = []
    for blk in diagonal_blocks(G):
        values.extend(_sort_block(_block_eigs(blk)))
    return EigenSet(k=p.k, values=tuple(values))


def limit_eigs_sigma_zero(p: SchemeParameters) -> list[float]:
    """Closed-form sigma -> 0 eigenvalues: each block contributes
    {1, 1, (alpha_j - 1)/alpha_j}."""
    out = []
    for j, aj in enumerate(p.alpha):
        if aj == 0.0:
            raise ValueError(f"alpha_{j + 1} = 0 has no sigma->0 limit")
        out.extend([1.0, 1.0, (aj - 1.0) / aj])
    return out


def limit_eigs_sigma_inf(p: SchemeParameters) -> list[float]:
    """Closed-form sigma -> infinity magnitudes for rho-derived schemes:
    leading blocks give {rho_j, rho_j, 0}, the last block {rho_k}^3."""
    if p.rho is None:
        raise UnsupportedParametersError(
            "sigma->infinity limits require rho-derived parameters"
        )
    rho = p.rho.rho
    out: list[float] = []
    for j in range(p.k - 1):
        out.extend([rho[j], rho[j], 0.0])
    out.extend([rho[-1]] * 3)
    return out


def spectral_radius(
    p: SchemeParameters, sigma: float, variant: Variant = Variant.FULL_TAYLOR
) -> float:
    return max(abs(z) for z in eigvals(p, sigma, variant).values)


def sweep_spectrum(
    p: SchemeParameters,
    sigma_min: float,
    sigma_max: float,
    n_points: int,
    log_spacing: bool = True,
    variant: Variant = Variant.FULL_TAYLOR,
) -> list[SpectrumSample]:
    cfg = SweepConfig(sigma_min, sigma_max, n_points, log_spacing)
    samples = []
    for s in cfg.grid():
        es = eigvals(p, float(s), variant)
        samples.append(
            SpectrumSample(
                sigma=float(s), eigs=es, radius=max(abs(z) for z in es.values)
            )
        )
    return samples


def classify_stability(
    p: SchemeParameters,
    sweep: SweepConfig = SweepConfig(),
    variant: Variant = Variant.FULL_TAYLOR,
) -> tuple[bool, float, float]:
    """(stable, max radius, argmax sigma) over the sweep grid.

    Grid-based proxy for unconditional stability; a singular assembly at
    any grid point counts as unstable.
    """
    max_r = -1.0
    arg = float("nan")
    for s in sweep.grid():
        try:
            r = spectral_radius(p, float(s), variant)
        except ArithmeticError:
            return (False, float("inf"), float(s))
        if r > max_r:
            max_r, arg = r, float(s)
    return (max_r <= 1.0 + STABILITY_TOL, max_r, arg)


def _axis_value(name: str, fixed: dict, ax_vals: dict) -> float:
    if name in ax_vals:
        return ax_vals[name]
    if name in fixed:
        return float(fixed[name])
    raise ValueError(f"parameter {name} is neither fixed nor varied")


def stability_map(
    k: int,
    fixed: dict,
    x_axis: ParameterAxis,
    y_axis: ParameterAxis,
    sweep: SweepConfig = SweepConfig(),
) -> StabilityMap:
    """Classify a 2-D grid of raw alpha parameters.

    Parameter names are "alpha1".."alpha{k}" and "alpha_f"; gamma and
    beta are recomputed from the order-condition laws at every point.
    """
    if x_axis.name == y_axis.name:
        raise ValueError("axes must vary distinct parameters")
    if x_axis.n < 2 or y_axis.n < 2:
        raise ValueError("axis resolution must be >= 2")
    names = [f"alpha{i + 1}" for i in range(k)] + ["alpha_f"]
    for ax in (x_axis, y_axis):
        if ax.name not in names:
            raise ValueError(f"unknown parameter axis {ax.name!r}")
    points = []
    for y in np.linspace(y_axis.lo, y_axis.hi, y_axis.n):
        for x in np.linspace(x_axis.lo, x_axis.hi, x_axis.n):
            ax_vals = {x_axis.name: float(x), y_axis.name: float(y)}
            alpha = [_axis_value(f"alpha{i + 1}", fixed, ax_vals) for i in range(k)]
            alpha_f = _axis_value("alpha_f", fixed, ax_vals)
            try:
                p = from_alphas(k, alpha, alpha_f)
                stable, max_r, _ = classify_stability(p, sweep)
            except (ArithmeticError, np.linalg.LinAlgError):
                stable, max_r = False, float("inf")
            points.append(
                StabilityMapPoint(
                    x=float(x), y=float(y), max_radius=max_r, stable=stable
                )
            )
    return StabilityMap(
        k=k, x_axis=x_axis, y_axis=y_axis, fixed=dict(fixed), points=tuple(points)
    )
