"""Steady-state solver, RK4 time evolution, and truncation adequacy checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .errors import (
    CorruptedStateError,
    CutoffTooSmallError,
    DivergenceError,
    NonUniqueSteadyStateError,
    SolverError,
    StepTooLargeError,
)
from .liouvillian import Superoperator, trace_row, unvec, vec
from .operators import FieldSpace, Space, SpaceDims

DEFAULT_EPSILON = 1e-8
TRACE_TOL = 1e-10
HERM_TOL = 1e-10
MIN_EIG_TOL = -1e-8
RESIDUAL_TOL = 1e-8


def default_guard(fock_cutoff: int) -> int:
    return max(4, fock_cutoff // 5)


@dataclass(frozen=True)
class StateDiagnostics:
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float
    tail_mass: float


@dataclass(frozen=True)
class TailReport:
    tail_mass: float
    guard: int
    adequate: bool


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix with its space tag and solve diagnostics."""

    space: Space
    matrix: np.ndarray = field(repr=False)
    diagnostics: StateDiagnostics = StateDiagnostics(0.0, 0.0, 0.0, 0.0)

    @property
    def fock_cutoff(self) -> int:
        return self.space.fock_cutoff


def photon_populations(rho: DensityMatrix) -> np.ndarray:
    """Photon-number populations P(n), tracing over the atom if present."""
    diag = rho.matrix.diagonal().real
    if isinstance(rho.space, SpaceDims):
        return diag.reshape(rho.space.atom_dim, rho.space.fock_cutoff).sum(axis=0)
    return diag


def check_truncation(rho: DensityMatrix, guard: int | None = None,
                     epsilon: float = DEFAULT_EPSILON) -> TailReport:
    """Sum the populations of the top `guard` Fock levels and compare
    against the adequacy threshold."""
    n = rho.fock_cutoff
    if guard is None:
        guard = default_guard(n)
    if guard >= n:
        raise ValueError(f"guard ({guard}) must be smaller than the cutoff ({n})")
    tail = float(photon_populations(rho)[n - guard:].sum())
    return TailReport(tail_mass=tail, guard=guard, adequate=tail < epsilon)


def make_density_matrix(space: Space, raw: np.ndarray, guard: int | None = None) -> DensityMatrix:
    """Hermitize, renormalize, and validate a raw solver output.

    Negative eigenvalues below the tolerance abort the run: they signal a
    cutoff or solver failure that must not leak into results.
    """
    raw = np.asarray(raw, dtype=complex)
    herm_err = float(np.abs(raw - raw.conj().T).max())
    m = 0.5 * (raw + raw.conj().T)
    tr = m.trace()
    if abs(tr) < 1e-300:
        raise CorruptedStateError("state has zero trace")
    trace_err = float(abs(tr - 1.0))
    m = m / tr.real
    eigs = np.linalg.eigvalsh(m)
    min_eig = float(eigs[0])
    if min_eig < MIN_EIG_TOL:
        raise CorruptedStateError(
            f"minimum eigenvalue {min_eig:.3e} below tolerance {MIN_EIG_TOL:.0e}"
        )
    probe = DensityMatrix(space, m)
    tail = float(photon_populations(probe)[-(guard or default_guard(space.fock_cutoff)):].sum())
    diags = StateDiagnostics(trace_err, herm_err, min_eig, tail)
    return DensityMatrix(space, m, diags)


def suggest_fock_cutoff(r: float, epsilon: float = DEFAULT_EPSILON,
                        guard_frac: float = 0.2, n_min: int = 40, n_max: int = 400) -> int:
    """Conservative cutoff estimate from the squeezed-vacuum photon tail.

    The empty-cavity distribution P(2m) ∝ tanh(r)^{2m} C(2m, m) / 4^m upper
    bounds the atom-present one, so a cutoff adequate for the bare squeezed
    state is adequate for the full model at the same r.
    """
    if r <= 0:
        return n_min
    t2 = math.tanh(r) ** 2
    p = 1.0 / math.cosh(r)
    target = epsilon / 10.0
    n_star = 2
    for m in range(1, n_max):
        p *= t2 * (2 * m - 1) / (2 * m)
        # remaining tail bounded by geometric series with ratio tanh²r
        if p / (1.0 - t2) < target:
            n_star = 2 * m
            break
    else:
        n_star = 2 * n_max
    n = int(math.ceil(n_star / (1.0 - guard_frac)))
    n = int(math.ceil(n / 10.0) * 10)
    return max(n_min, min(n, n_max))


def steady_state(L: Superoperator, guard: int | None = None,
                 epsilon: float = DEFAULT_EPSILON, check_tail: bool = True) -> DensityMatrix:
    """Solve L vec(rho) = 0 with the unit-trace constraint.

    The first row of L is replaced by vec(I)^T and the right-hand side by
    the first unit vector, keeping the system square; the solution is then
    hermitized, renormalized, and validated. The residual of the original
    generator must stay below RESIDUAL_TOL, otherwise the kernel is
    considered degenerate.
    """
    if L.trace_residual() > 1e-10:
        raise SolverError("generator is not trace-preserving; refusing to solve")
    d = L.dim
    n = d * d
    tr = sp.csr_matrix(
        (np.ones(d), (np.zeros(d, dtype=int), np.arange(d) * (d + 1))), shape=(1, n)
    )
    system = sp.vstack([tr, L.matrix[1:, :]], format="csc")
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    try:
        sol = spsolve(system, rhs)
    except Exception as exc:  # pragma: no cover - solver backend failure
        raise NonUniqueSteadyStateError(f"sparse LU solve failed: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise NonUniqueSteadyStateError("sparse LU solve returned non-finite entries")
    rho = make_density_matrix(L.space, unvec(sol, d), guard)
    residual = float(np.abs(L.matrix @ vec(rho.matrix)).max())
    if residual > RESIDUAL_TOL:
        raise NonUniqueSteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}; "
            "the kernel may be degenerate"
        )
    if check_tail and L.space is not None:
        report = check_truncation(rho, guard, epsilon)
        if not report.adequate:
            current = rho.fock_cutoff
            suggested = int(math.ceil(current * 1.5 / 10.0) * 10)
            raise CutoffTooSmallError(
                f"tail mass {report.tail_mass:.3e} over the top {report.guard} Fock "
                f"levels exceeds {epsilon:.0e} at cutoff {current}; retry with "
                f"cutoff >= {suggested}",
                suggested_cutoff=suggested,
                tail_mass=report.tail_mass,
            )
    return rho


def evolve(L: Superoperator, rho0: DensityMatrix, t_end: float, dt: float,
           sample_times=None):
    """Integrate dvec(rho)/dt = L vec(rho) with classical RK4.

    Samples are snapped to the underlying step grid; each sampled state is
    hermitized and validated. The step must satisfy dt <= 0.05 / rate_scale,
    where rate_scale is attached to the generator by its builder (a sparse
    infinity-norm bound is used as a conservative fallback).

    Returns a list of (t, DensityMatrix) pairs.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    scale = L.rate_scale
    if scale is None:
        scale = float(np.abs(L.matrix).sum(axis=1).max())
    if scale > 0 and dt > 0.05 / scale * (1 + 1e-12):
        raise StepTooLargeError(
            f"dt = {dt:g} exceeds the stability guard 0.05/rate = {0.05 / scale:g}"
        )
    n_steps = max(1, int(round(t_end / dt)))
    h = t_end / n_steps
    if sample_times is None:
        sample_times = np.linspace(0.0, t_end, 11)
    sample_steps = sorted({min(n_steps, max(0, int(round(t / h)))) for t in sample_times})

    mat = L.matrix
    v = vec(rho0.matrix).astype(complex)
    out = []

    def record(step, state):
        if not np.all(np.isfinite(state)):
            raise DivergenceError(f"non-finite state at t = {step * h:g}")
        rho = unvec(state, L.dim)
        drift = abs(rho.trace() - 1.0)
        if drift > 1e-8:
            raise DivergenceError(
                f"trace drift {drift:.3e} exceeds 1e-8 at t = {step * h:g}"
            )
        out.append((step * h, make_density_matrix(L.space, rho)))

    targets = iter(sample_steps)
    next_target = next(targets, None)
    if next_target == 0:
        record(0, v)
        next_target = next(targets, None)
    for step in range(1, n_steps + 1):
        k1 = mat @ v
        k2 = mat @ (v + 0.5 * h * k1)
        k3 = mat @ (v + 0.5 * h * k2)
        k4 = mat @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step == next_target:
            record(step, v)
            next_target = next(targets, None)
    return out
