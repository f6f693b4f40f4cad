"""Modal front-end for symmetric systems u'' + K u = 0 (unit mass).

A cyclic-by-rows Jacobi eigensolver diagonalizes K; each mode is then an
independent scalar oscillator handled by the scalar integrators, and the
results are rotated back to physical coordinates.  Modes are mutually
independent, so a run parallelizes trivially if ever needed; here they
are integrated sequentially.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import JacobiConvergenceError
from .params import SchemeParameters
from .stepper import OscillatorMode, StepConfig, integrate


@dataclass(frozen=True)
class SymmetricSystem:
    K: np.ndarray
    u0: np.ndarray
    v0: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.K, dtype=float)
        u0 = np.asarray(self.u0, dtype=float)
        v0 = np.asarray(self.v0, dtype=float)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValueError("K must be a square matrix")
        n = K.shape[0]
        if u0.shape != (n,) or v0.shape != (n,):
            raise ValueError("u0 and v0 must be length-n vectors")
        scale = np.max(np.abs(K)) or 1.0
        if np.max(np.abs(K - K.T)) > 1e-12 * scale:
            raise ValueError("K is not symmetric")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "v0", v0)

    @property
    def n(self) -> int:
        return self.K.shape[0]


@dataclass(frozen=True)
class ModalDecomposition:
    lambdas: np.ndarray  # ascending
    Q: np.ndarray  # orthogonal, columns are eigenvectors


@dataclass(frozen=True)
class SystemTrajectory:
    times: np.ndarray
    displacements: np.ndarray  # shape (n_steps+1, n_dof)
    velocities: np.ndarray

    def write_csv(self, fh) -> None:
        n = self.displacements.shape[1]
        w = csv.writer(fh)
        w.writerow(["t"] + [f"u{i}" for i in range(n)] + [f"v{i}" for i in range(n)])
        for i, t in enumerate(self.times):
            w.writerow(
                [repr(float(t))]
                + [repr(float(x)) for x in self.displacements[i]]
                + [repr(float(x)) for x in self.velocities[i]]
            )


def load_system(path) -> SymmetricSystem:
    """Read the JSON schema {"K": [[...]], "u0": [...], "v0": [...]}."""
    with open(path) as fh:
        data = json.load(fh)
    return SymmetricSystem(
        K=np.array(data["K"], dtype=float),
        u0=np.array(data["u0"], dtype=float),
        v0=np.array(data["v0"], dtype=float),
    )


def jacobi_eig(K, tol: float = 1e-12, max_sweeps: int = 100) -> ModalDecomposition:
    """Cyclic-by-rows Jacobi rotations until the off-diagonal Frobenius
    norm drops below tol * ||K||_F.  Adequate and robust at desk scale."""
    A = np.array(K, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("K must be a square matrix")
    scale = np.max(np.abs(A)) or 1.0
    if np.max(np.abs(A - A.T)) > 1e-12 * scale:
        raise ValueError("K is not symmetric")
    n = A.shape[0]
    Q = np.eye(n)
    norm = np.linalg.norm(A, "fro") or 1.0

    def off(M):
        # norm of the strictly off-diagonal part, computed directly
        # (subtracting diagonal sums of squares cancels catastrophically)
        return np.linalg.norm(M - np.diag(np.diag(M)))

    sweeps = 0
    while off(A) > tol * norm:
        if sweeps >= max_sweeps:
            raise JacobiConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal {off(A):.3e}, target {tol * norm:.3e})"
            )
        for i in range(n - 1):
            for j in range(i + 1, n):
                if A[i, j] == 0.0:
                    continue
                theta = 0.5 * (A[j, j] - A[i, i]) / A[i, j]
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    # theta^2 would overflow; use the asymptotic root
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[i, i] = rot[j, j] = c
                rot[i, j] = s
                rot[j, i] = -s
                A = rot.T @ A @ rot
                Q = Q @ rot
        sweeps += 1
    lam = np.diag(A).copy()
    order = np.argsort(lam)
    return ModalDecomposition(lambdas=lam[order], Q=Q[:, order])


def integrate_system(
    sys: SymmetricSystem,
    p: SchemeParameters,
    cfg: StepConfig,
    n_steps: int,
) -> SystemTrajectory:
    """Transform to modal coordinates, integrate each mode with the
    scalar scheme, transform back."""
    dec = jacobi_eig(sys.K)
    y0 = dec.Q.T @ sys.u0
    w0 = dec.Q.T @ sys.v0
    n = sys.n
    U = np.zeros((n_steps + 1, n))
    V = np.zeros((n_steps + 1, n))
    times = None
    for m in range(n):
        mode = OscillatorMode(lam=float(dec.lambdas[m]))
        traj = integrate(p, mode, cfg, float(y0[m]), float(w0[m]), n_steps)
        U[:, m] = [s.d[0] for s in traj.states]
        V[:, m] = [s.d[1] for s in traj.states]
        times = np.asarray(traj.times)
    return SystemTrajectory(
        times=times,
        displacements=U @ dec.Q.T,
        velocities=V @ dec.Q.T,
    )
