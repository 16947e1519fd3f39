"""Observables extracted from a density matrix: moments, photon statistics,
atomic population, purity, and the Wigner function.

Quadrature convention: alpha = (q + i p) / sqrt(2), Wigner normalized so
that the grid integral over dq dp is 1 and the vacuum has variance 1/2 in
each quadrature. Squeezing then reads directly as variances e^{±2r}/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CorruptedStateError, CutoffTooSmallError, InvalidDimensionError
from .operators import (
    FieldSpace,
    Operator,
    SpaceDims,
    annihilation,
    atom_sigma,
    lift,
    number_operator,
)
from .solvers import (
    DEFAULT_EPSILON,
    DensityMatrix,
    check_truncation,
    make_density_matrix,
    photon_populations,
)

IMAG_TOL = 1e-8


@dataclass(frozen=True)
class PhotonDistribution:
    probabilities: np.ndarray = field(repr=False)
    tail_mass: float = 0.0


@dataclass(frozen=True)
class WignerGrid:
    q_axis: np.ndarray = field(repr=False)
    p_axis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)


def expectation(rho: DensityMatrix, op: Operator) -> complex:
    """Tr(rho op)."""
    if rho.space != op.space:
        raise InvalidDimensionError(
            f"state space {rho.space} does not match operator space {op.space}"
        )
    return complex(np.einsum("ij,ji->", rho.matrix, op.matrix))


def _real_expectation(rho: DensityMatrix, op: Operator, what: str) -> float:
    value = expectation(rho, op)
    if abs(value.imag) > IMAG_TOL:
        raise CorruptedStateError(
            f"{what} has imaginary part {value.imag:.3e}; state is corrupted"
        )
    return float(value.real)


def _field_op(space, op_field: Operator) -> Operator:
    if isinstance(space, SpaceDims):
        return lift(op_field, "field", space)
    return op_field


def mean_photon_number(rho: DensityMatrix) -> float:
    """<a†a>, valid on composite and field-only states."""
    n_op = _field_op(rho.space, number_operator(rho.fock_cutoff))
    return _real_expectation(rho, n_op, "mean photon number")


def pair_amplitude(rho: DensityMatrix) -> complex:
    """<aa>; its magnitude is the phase-sensitive two-photon moment."""
    a = annihilation(rho.fock_cutoff)
    return expectation(rho, _field_op(rho.space, a @ a))


def atom_excited_population(rho: DensityMatrix) -> float:
    """Excited-state population rho_ee of the atom."""
    if not isinstance(rho.space, SpaceDims):
        raise InvalidDimensionError("atom population requires a composite state")
    s_ee = lift(atom_sigma("e", "e"), "atom", rho.space)
    return _real_expectation(rho, s_ee, "excited-state population")


def photon_distribution(rho: DensityMatrix, guard: int | None = None) -> PhotonDistribution:
    """Diagonal of the field-reduced state, with the guard-band mass."""
    probs = photon_populations(rho)
    if probs.min() < -1e-8:
        raise CorruptedStateError(
            f"photon population P({int(probs.argmin())}) = {probs.min():.3e} is negative"
        )
    report = check_truncation(rho, guard, epsilon=np.inf)
    return PhotonDistribution(probabilities=probs, tail_mass=report.tail_mass)


def partial_trace_atom(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the atom: sum of the two atom-diagonal blocks."""
    if not isinstance(rho.space, SpaceDims):
        raise InvalidDimensionError("partial trace requires a composite state")
    n = rho.space.fock_cutoff
    blocks = rho.matrix.reshape(2, n, 2, n)
    reduced = blocks[0, :, 0, :] + blocks[1, :, 1, :]
    return make_density_matrix(FieldSpace(n), reduced)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho²)."""
    return float(np.einsum("ij,ji->", rho.matrix, rho.matrix).real)


@lru_cache(maxsize=8)
class _DisplacementBasis:
    """Eigenbasis of the displacement generator on a padded space.

    D(s e^{i theta}) = e^{i theta n} expm(s (a† - a)) e^{-i theta n}, and
    expm(s (a† - a)) = V e^{i s w} V† from one Hermitian diagonalization,
    so every grid point costs two small matrix products.
    """

    def __init__(self, dim: int):
        a = annihilation(dim).matrix
        herm = 1j * (a - a.conj().T)  # a† - a = i * herm
        w, v = np.linalg.eigh(herm)
        self.dim = dim
        self.w = w
        self.v = v
        self.n_levels = np.arange(dim)

    def build(self, alpha: complex) -> np.ndarray:
        s = abs(alpha)
        core = (self.v * np.exp(1j * s * self.w)) @ self.v.conj().T
        if alpha != 0 and s > 0:
            phases = np.exp(1j * np.angle(alpha) * self.n_levels)
            core = phases[:, None] * core * phases.conj()[None, :]
        return core


def wigner(rho_field: DensityMatrix, q_axis, p_axis, pad: int = 20,
           epsilon: float = DEFAULT_EPSILON) -> WignerGrid:
    """Wigner function via displaced parity on a padded Fock space.

    values[i, j] = W(q_axis[i], p_axis[j]). The state must pass the
    truncation check first: the Wigner function at large |alpha| is
    meaningless once population has leaked into the guard band.
    """
    if not isinstance(rho_field.space, FieldSpace):
        raise InvalidDimensionError("wigner expects a field-only state; trace out the atom first")
    report = check_truncation(rho_field, epsilon=epsilon)
    if not report.adequate:
        raise CutoffTooSmallError(
            f"tail mass {report.tail_mass:.3e} exceeds {epsilon:.0e}; "
            "increase the Fock cutoff before evaluating the Wigner function",
            tail_mass=report.tail_mass,
        )
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    n = rho_field.fock_cutoff
    basis = _DisplacementBasis(n + pad)
    signs = np.where(np.arange(n + pad) % 2 == 0, 1.0, -1.0)
    rho_m = rho_field.matrix
    values = np.empty((q_axis.size, p_axis.size))
    worst_imag = 0.0
    for i, q in enumerate(q_axis):
        for j, p in enumerate(p_axis):
            d_op = basis.build((q + 1j * p) / np.sqrt(2.0))
            block = d_op[:n, :]
            # Tr[rho D Pi D†] = sum_k (-1)^k (D† rho D)_{kk}
            diag = np.einsum("ik,ik->k", block.conj(), rho_m @ block)
            val = signs @ diag
            worst_imag = max(worst_imag, abs(val.imag))
            values[i, j] = val.real / np.pi
    if worst_imag > IMAG_TOL:
        raise CorruptedStateError(
            f"Wigner trace acquired imaginary part {worst_imag:.3e}"
        )
    return WignerGrid(q_axis=q_axis, p_axis=p_axis, values=values)


def wigner_integral(grid: WignerGrid) -> float:
    """Trapezoidal integral of W over the grid."""
    return float(np.trapezoid(np.trapezoid(grid.values, grid.p_axis, axis=1), grid.q_axis))


def quadrature_moments(grid: WignerGrid):
    """Means and variances (q, p) of the Wigner quasi-distribution."""
    w = grid.values
    q, p = grid.q_axis, grid.p_axis
    norm = wigner_integral(grid)

    def integrate(f):
        return float(np.trapezoid(np.trapezoid(f, p, axis=1), q)) / norm

    mean_q = integrate(w * q[:, None])
    mean_p = integrate(w * p[None, :])
    var_q = integrate(w * (q[:, None] - mean_q) ** 2)
    var_p = integrate(w * (p[None, :] - mean_p) ** 2)
    return (mean_q, mean_p, var_q, var_p)
