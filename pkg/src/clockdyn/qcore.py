"""Dense complex linear algebra and quantum-state primitives.

Everything downstream works with plain ``numpy`` complex arrays; the classes
here only certify structure (hermiticity, unit trace, positivity, spectral
decomposition) and freeze the arrays so instances can be shared across
workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

MAX_DIM = 4096


@dataclass(frozen=True)
class Tolerances:
    """Numerical acceptance thresholds; override per call where needed."""

    hermiticity: float = 1e-12
    unitarity: float = 1e-10
    reconstruction: float = 1e-10   # per unit dimension
    trace: float = 1e-10
    negativity: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


def as_square_complex(matrix) -> np.ndarray:
    """Coerce to a square complex128 array with finite entries."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValidationError("matrix has non-finite entries")
    return m


def hermiticity_defect(matrix: np.ndarray) -> float:
    """max |M_ij - conj(M_ji)|."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def eigh(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(energies, basis)`` with energies ascending and the columns of
    ``basis`` the corresponding orthonormal eigenvectors, so that
    ``basis @ diag(energies) @ basis.conj().T`` reconstructs the input.

    Raises ``ValidationError`` for non-Hermitian input (reporting the max
    asymmetry) or dimensions above ``MAX_DIM``.
    """
    m = as_square_complex(matrix)
    if m.shape[0] > MAX_DIM:
        raise ValidationError(f"dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")
    defect = hermiticity_defect(m)
    if defect > tol.hermiticity:
        raise ValidationError(
            f"matrix is not Hermitian: max |M_ij - conj(M_ji)| = {defect:.3e} "
            f"exceeds {tol.hermiticity:.1e}"
        )
    energies, basis = np.linalg.eigh(m)
    residual = np.max(np.abs(basis @ np.diag(energies.astype(np.complex128)) @ basis.conj().T - m))
    if residual > tol.reconstruction * m.shape[0]:
        raise ValidationError(f"eigendecomposition residual {residual:.3e} out of tolerance")
    return energies, basis


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian generator with cached spectral data (units 1/time, hbar = 1)."""

    matrix: np.ndarray
    energies: np.ndarray
    basis: np.ndarray

    @classmethod
    def from_matrix(cls, matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> "Hamiltonian":
        m = as_square_complex(np.array(matrix, dtype=np.complex128))
        energies, basis = eigh(m, tol)
        uu = basis.conj().T @ basis
        if np.max(np.abs(uu - np.eye(m.shape[0]))) > tol.unitarity:
            raise ValidationError("eigenbasis failed the unitarity check")
        return cls(_freeze(m), _freeze(energies), _freeze(basis))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.energies))) if self.dim else 0.0

    def gap_matrix(self) -> np.ndarray:
        """G[n, m] = E_m - E_n, the Liouvillean eigenvalue attached to |n><m|."""
        e = self.energies
        return e[None, :] - e[:, None]

    def to_energy_basis(self, rho: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ rho @ self.basis

    def from_energy_basis(self, rho: np.ndarray) -> np.ndarray:
        return self.basis @ rho @ self.basis.conj().T


def _as_matrix(operator) -> np.ndarray:
    return operator.matrix if isinstance(operator, (Hamiltonian, DensityMatrix)) else as_square_complex(operator)


def liouvillean_apply(hamiltonian, rho) -> np.ndarray:
    """Commutator action L rho = [H, rho]."""
    h = _as_matrix(hamiltonian)
    r = _as_matrix(rho)
    if h.shape != r.shape:
        raise ValidationError(f"dimension mismatch: H is {h.shape}, rho is {r.shape}")
    return h @ r - r @ h


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Certified Hermitian, unit-trace, positive-semidefinite state."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def pure(cls, vector, tol: Tolerances = DEFAULT_TOLERANCES) -> "DensityMatrix":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("cannot build a state from the zero vector")
        v = v / norm
        return validate_density(np.outer(v, v.conj()), tol)


def validate_density(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Certify a matrix as a density matrix or raise with the violation size."""
    m = as_square_complex(np.array(matrix, dtype=np.complex128))
    defect = hermiticity_defect(m)
    if defect > tol.hermiticity:
        raise ValidationError(f"not Hermitian: asymmetry {defect:.3e} exceeds {tol.hermiticity:.1e}")
    trace_dev = abs(np.trace(m) - 1.0)
    if trace_dev > tol.trace:
        raise ValidationError(f"trace deviates from 1 by {trace_dev:.3e} (tolerance {tol.trace:.1e})")
    lowest = float(np.min(np.linalg.eigvalsh(m)))
    if lowest < -tol.negativity:
        raise ValidationError(f"negative eigenvalue {lowest:.3e} below -{tol.negativity:.1e}")
    return DensityMatrix(_freeze(m))
