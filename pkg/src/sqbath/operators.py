"""Labeled Hilbert spaces, dense operators and density matrices.

Every matrix in the library is a dense ``complex128`` array whose row/column
order is the label order of the :class:`HilbertSpace` it lives on. Values are
immutable: arrays are copied on construction and flagged read-only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantError, UnknownLabelError

HERMITIAN_TOL = 1e-12
DENSITY_HERMITIAN_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-10
POSITIVITY_FLOOR = -1e-8


def _frozen(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HilbertSpace:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise InvariantError(f"Hilbert space needs dim >= 2, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise InvariantError(f"level labels must be unique, got {labels}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"unknown label {label}") from None

    def identity(self) -> "Operator":
        return Operator(self, np.eye(self.dim), hermitian=True)

    def zero(self) -> "Operator":
        return Operator(self, np.zeros((self.dim, self.dim)), hermitian=True)


@dataclass(frozen=True, eq=False)
class Operator:
    space: HilbertSpace
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvariantError(f"operator shape {m.shape} does not match space dim {d}")
        if self.hermitian and not self.is_hermitian():
            err = np.max(np.abs(m - m.conj().T))
            raise InvariantError(f"operator flagged Hermitian deviates from A = A† by {err:.3e}")

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T, hermitian=self.hermitian)

    def _check(self, other: "Operator"):
        if other.space != self.space:
            raise InvariantError(
                f"space mismatch: {self.space.labels} vs {other.space.labels}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix, hermitian=self.hermitian)

    def __mul__(self, scalar) -> "Operator":
        scalar = complex(scalar)
        keep = self.hermitian and scalar.imag == 0.0
        return Operator(self.space, scalar * self.matrix, hermitian=keep)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Operator":
        return self * (1.0 / complex(scalar))

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __repr__(self) -> str:
        return f"Operator(labels={self.space.labels}, matrix=\n{self.matrix})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvariantError(f"density matrix shape {m.shape} does not match dim {d}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > DENSITY_HERMITIAN_TOL:
            raise InvariantError(f"density matrix not Hermitian: deviation {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > DENSITY_TRACE_TOL:
            raise InvariantError(f"density matrix trace must be 1, got {tr:.12g}")
        lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
        if lam < POSITIVITY_FLOOR:
            raise InvariantError(f"density matrix not positive: min eigenvalue {lam:.3e}")

    @classmethod
    def pure(cls, space: HilbertSpace, amplitudes: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(amplitudes, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(space, np.outer(psi, psi.conj()))

    @classmethod
    def basis_state(cls, space: HilbertSpace, label: str) -> "DensityMatrix":
        m = np.zeros((space.dim, space.dim), complex)
        i = space.index(label)
        m[i, i] = 1.0
        return cls(space, m)

    @classmethod
    def maximally_mixed(cls, space: HilbertSpace) -> "DensityMatrix":
        return cls(space, np.eye(space.dim) / space.dim)

    @classmethod
    def from_matrix(cls, space: HilbertSpace, matrix) -> "DensityMatrix":
        """Hermitize and trace-normalize ``matrix`` before validation."""
        m = np.asarray(matrix, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        return cls(space, m / np.trace(m).real)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def populations(self) -> dict[str, float]:
        return dict(zip(self.space.labels, np.real(np.diag(self.matrix)).tolist()))


def basis_operator(space: HilbertSpace, ket: str, bra: str) -> Operator:
    """Return ``|ket><bra|`` on ``space``."""
    m = np.zeros((space.dim, space.dim), complex)
    m[space.index(ket), space.index(bra)] = 1.0
    return Operator(space, m)


def projector(space: HilbertSpace, labels: Iterable[str]) -> Operator:
    m = np.zeros((space.dim, space.dim), complex)
    for lab in labels:
        i = space.index(lab)
        m[i, i] = 1.0
    return Operator(space, m, hermitian=True)


def expectation(rho: DensityMatrix, A: Operator) -> complex:
    """``Tr(A rho)``; for Hermitian ``A`` the result is real to round-off."""
    if rho.space != A.space:
        raise InvariantError(
            f"space mismatch: state on {rho.space.labels}, operator on {A.space.labels}")
    return complex(np.trace(A.matrix @ rho.matrix))


def bloch_vector(rho: DensityMatrix, lower: str, upper: str) -> tuple[float, float, float]:
    """Bloch components of the two-level subspace spanned by ``lower``, ``upper``.

    With ``sigma = |lower><upper|``: S_x = <sigma + sigma†>,
    S_y = <(sigma - sigma†)/i> = 2 Im<sigma>, S_z = <P_upper - P_lower>.
    This S_y orientation is the one under which the driven Bloch equations in
    :mod:`sqbath.analytics` hold for the models in :mod:`sqbath.models`.
    """
    space = rho.space
    i, j = space.index(lower), space.index(upper)
    m = rho.matrix
    coh = m[j, i]  # <sigma> = Tr(|i><j| rho) = rho_ji
    sx = 2.0 * coh.real
    sy = 2.0 * coh.imag
    sz = (m[j, j] - m[i, i]).real
    return float(sx), float(sy), float(sz)
