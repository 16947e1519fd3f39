"""Hamiltonian, dissipators, and Liouvillian assembly.

The model is a two-level atom coupled to a single lossy cavity mode that
is driven by a broadband squeezed vacuum. In the rotating frame of the
squeeze central frequency

    H = delta_A sigma_ee + delta_C a†a + g0 (sigma_eg a + sigma_ge a†),

and the state evolves as drho/dt = -i[H, rho] + L_atom(rho) + L_cav(rho)
with

    L_atom = gamma (2 sigma_ge rho sigma_eg - sigma_ee rho - rho sigma_ee)
    L_cav  = -kappa (1+N)(a†a rho - 2 a rho a† + rho a†a)
             -kappa N    (a a† rho - 2 a† rho a + rho a a†)
             +kappa M    (a†a† rho - 2 a† rho a† + rho a†a†)
             +kappa M*   (a a rho - 2 a rho a + rho a a)

where N = sinh²(r) and M = cosh(r) sinh(r) e^{i phi} characterise the
squeezed bath. Superoperators act on column-stacked density matrices:
vec stacks columns, so A rho B maps to (B^T ⊗ A) vec(rho). With these
forms kappa and gamma are amplitude rates: photon energy decays at
2 kappa and the excited-state population at 2 gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import InvalidDimensionError, UnsupportedFrameError
from .operators import (
    FieldSpace,
    Operator,
    Space,
    SpaceDims,
    annihilation,
    atom_sigma,
    bogoliubov_b,
    lift,
)


@dataclass(frozen=True)
class SystemParams:
    """Model parameters, all in units of kappa.

    delta_A and delta_C are the atom and cavity detunings from the squeeze
    central frequency. atom_present=False drops the atomic terms entirely
    (empty-cavity model); the builders then also accept a field-only space.
    """

    delta_A: float = 0.0
    delta_C: float = 0.0
    g0: float = 0.0
    gamma: float = 0.0
    kappa: float = 1.0
    atom_present: bool = True

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma < 0 or self.g0 < 0:
            raise ValueError("gamma and g0 must be >= 0")


@dataclass(frozen=True)
class SqueezedBath:
    """Broadband squeezed vacuum with strength r and phase phi."""

    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeezing strength must be >= 0, got {self.r}")

    @property
    def n_th(self) -> float:
        """Effective thermal occupation sinh²(r)."""
        return float(np.sinh(self.r) ** 2)

    @property
    def m_corr(self) -> complex:
        """Two-photon correlation cosh(r) sinh(r) e^{i phi}."""
        return complex(np.cosh(self.r) * np.sinh(self.r) * np.exp(1j * self.phi))


@dataclass(frozen=True)
class Superoperator:
    """Sparse d²×d² generator acting on column-stacked density matrices."""

    dim: int
    matrix: sp.csr_matrix = field(repr=False)
    space: Space | None = None
    rate_scale: float | None = None

    def __post_init__(self):
        m = self.matrix.tocsr()
        if m.shape != (self.dim**2, self.dim**2):
            raise InvalidDimensionError(
                f"superoperator matrix shape {m.shape} does not match dim {self.dim}"
            )
        object.__setattr__(self, "matrix", m)

    def trace_residual(self) -> float:
        """max |vec(I)^T L|; zero for any trace-preserving generator."""
        return float(np.abs(trace_row(self.dim) @ self.matrix).max())

    def __add__(self, other: "Superoperator") -> "Superoperator":
        if self.dim != other.dim:
            raise InvalidDimensionError("adding superoperators of different dimension")
        scale = max(
            (s for s in (self.rate_scale, other.rate_scale) if s is not None),
            default=None,
        )
        return Superoperator(self.dim, self.matrix + other.matrix, self.space or other.space, scale)


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def trace_row(dim: int) -> np.ndarray:
    """Row vector vec(I)^T: left null vector of any trace-preserving generator."""
    row = np.zeros(dim * dim)
    row[:: dim + 1] = 1.0
    return row


def sandwich(left: np.ndarray, right: np.ndarray) -> sp.csr_matrix:
    """Superoperator of rho -> left @ rho @ right under column stacking."""
    return sp.kron(sp.csr_matrix(right.T), sp.csr_matrix(left), format="csr")


def spre(op: np.ndarray) -> sp.csr_matrix:
    d = op.shape[0]
    return sp.kron(sp.identity(d, format="csr"), sp.csr_matrix(op), format="csr")


def spost(op: np.ndarray) -> sp.csr_matrix:
    d = op.shape[0]
    return sp.kron(sp.csr_matrix(op.T), sp.identity(d, format="csr"), format="csr")


def _field_annihilation(space: Space) -> Operator:
    """Annihilation operator embedded in the requested space."""
    if isinstance(space, SpaceDims):
        return lift(annihilation(space.fock_cutoff), "field", space)
    if isinstance(space, FieldSpace):
        return annihilation(space.fock_cutoff)
    raise InvalidDimensionError(f"expected a field or composite space, got {space}")


def _rate_scale(params: SystemParams, n_th: float, m_abs: float) -> float:
    return max(
        abs(params.delta_A),
        abs(params.delta_C),
        params.g0,
        params.gamma,
        params.kappa * (1.0 + 2.0 * n_th + 2.0 * m_abs),
    )


def build_hamiltonian(params: SystemParams, space: Space) -> Operator:
    """Rotating-frame Hamiltonian on a composite or (atom-free) field space."""
    if isinstance(space, FieldSpace):
        if params.atom_present:
            raise InvalidDimensionError("field-only space requires atom_present=False")
        a = annihilation(space.fock_cutoff)
        return params.delta_C * (a.dag() @ a)
    if not isinstance(space, SpaceDims):
        raise InvalidDimensionError(f"cannot build a Hamiltonian on {space}")
    a = _field_annihilation(space)
    h = params.delta_C * (a.dag() @ a)
    if params.atom_present:
        s_ee = lift(atom_sigma("e", "e"), "atom", space)
        s_eg = lift(atom_sigma("e", "g"), "atom", space)
        coupling = s_eg @ a
        h = h + params.delta_A * s_ee + params.g0 * (coupling + coupling.dag())
    return h


def atom_dissipator(gamma: float, dims: SpaceDims) -> Superoperator:
    """Spontaneous-emission term gamma (2 s_ge rho s_eg - s_ee rho - rho s_ee)."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    s_ge = lift(atom_sigma("g", "e"), "atom", dims).matrix
    s_ee = lift(atom_sigma("e", "e"), "atom", dims).matrix
    m = gamma * (2.0 * sandwich(s_ge, s_ge.conj().T) - spre(s_ee) - spost(s_ee))
    return Superoperator(dims.dim, m, dims, rate_scale=gamma)


def cavity_squeezed_dissipator(kappa: float, bath: SqueezedBath, space: Space) -> Superoperator:
    """Cavity damping into the broadband squeezed bath (all four lines)."""
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    a = _field_annihilation(space).matrix
    ad = a.conj().T
    n_th, m_corr = bath.n_th, bath.m_corr
    m = -kappa * (1.0 + n_th) * (spre(ad @ a) - 2.0 * sandwich(a, ad) + spost(ad @ a))
    m = m - kappa * n_th * (spre(a @ ad) - 2.0 * sandwich(ad, a) + spost(a @ ad))
    m = m + kappa * m_corr * (spre(ad @ ad) - 2.0 * sandwich(ad, ad) + spost(ad @ ad))
    m = m + kappa * np.conj(m_corr) * (spre(a @ a) - 2.0 * sandwich(a, a) + spost(a @ a))
    rate = kappa * (1.0 + 2.0 * n_th + 2.0 * abs(m_corr))
    return Superoperator(space.dim, m, space, rate_scale=rate)


def hamiltonian_superoperator(h: Operator) -> Superoperator:
    """Coherent part -i[H, .] as a superoperator."""
    m = -1j * (spre(h.matrix) - spost(h.matrix))
    return Superoperator(h.space.dim, m, h.space)


def build_liouvillian(params: SystemParams, bath: SqueezedBath, space: Space) -> Superoperator:
    """Full generator: coherent part plus atomic and cavity dissipators."""
    h = build_hamiltonian(params, space)
    total = hamiltonian_superoperator(h) + cavity_squeezed_dissipator(params.kappa, bath, space)
    if params.atom_present:
        if not isinstance(space, SpaceDims):
            raise InvalidDimensionError("atom_present=True requires a composite space")
        total = total + atom_dissipator(params.gamma, space)
    return Superoperator(
        total.dim,
        total.matrix,
        space,
        rate_scale=_rate_scale(params, bath.n_th, abs(bath.m_corr)),
    )


def build_bogoliubov_liouvillian(params: SystemParams, r: float, space: Space) -> Superoperator:
    """Generator rewritten in the squeezed-frame mode b = cosh(r) a - sinh(r) a†.

    Valid only at zero detunings and zero squeezing phase. The cavity sees
    an ordinary vacuum bath in b, the atom couples through
    g0 sigma_eg (cosh(r) b + sinh(r) b†) + h.c., and the atomic dissipator
    is kept unchanged since the frame change acts on the field alone.
    """
    if params.delta_A != 0.0 or params.delta_C != 0.0:
        raise UnsupportedFrameError(
            "the squeezed-frame generator is only defined at delta_A = delta_C = 0"
        )
    ch, sh = float(np.cosh(r)), float(np.sinh(r))
    if isinstance(space, SpaceDims):
        b = lift(bogoliubov_b(r, space.fock_cutoff), "field", space).matrix
    elif isinstance(space, FieldSpace):
        if params.atom_present:
            raise InvalidDimensionError("field-only space requires atom_present=False")
        b = bogoliubov_b(r, space.fock_cutoff).matrix
    else:
        raise InvalidDimensionError(f"expected a field or composite space, got {space}")
    bd = b.conj().T
    kappa = params.kappa
    m = -kappa * (spre(bd @ b) - 2.0 * sandwich(b, bd) + spost(bd @ b))
    total = Superoperator(space.dim, m, space)
    if params.atom_present:
        s_eg = lift(atom_sigma("e", "g"), "atom", space).matrix
        h_int = params.g0 * (s_eg @ (ch * b + sh * bd))
        h_int = h_int + h_int.conj().T
        total = total + Superoperator(
            space.dim, -1j * (spre(h_int) - spost(h_int)), space
        )
        total = total + atom_dissipator(params.gamma, space)
    return Superoperator(
        total.dim,
        total.matrix,
        space,
        rate_scale=_rate_scale(params, sh * sh, ch * sh),
    )
