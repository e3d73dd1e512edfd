"""Exact propagation through the spectral decomposition of the Hamiltonian."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np

from .lattice import ExcitationHamiltonian

NORM_TOL = 1e-12


class NotHermitianError(ValueError):
    """Raised when a Hamiltonian handed to :func:`diagonalize` is not Hermitian."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuantumState:
    basis: tuple[Hashable, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise ValueError(f"{amps.shape[0] if amps.ndim else 0} amplitudes for a basis of {len(self.basis)}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state is not normalised: |psi| = {norm!r}")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def localized(cls, basis: Sequence[Hashable], label: Hashable) -> "QuantumState":
        basis = tuple(basis)
        if label not in basis:
            raise ValueError(f"{label!r} is not in the basis")
        amps = np.zeros(len(basis), dtype=complex)
        amps[basis.index(label)] = 1
        return cls(basis, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def probability(self, label: Hashable) -> float:
        return float(abs(self.amplitudes[self.basis.index(label)]) ** 2)


@dataclass(frozen=True, eq=False)
class Propagator:
    """Eigen-decomposition H = V diag(lambda) V^dagger, ready for exp(-iHt)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis: tuple[Hashable, ...]
    source_hash: str
    hamiltonian: ExcitationHamiltonian = field(repr=False)

    def unitary(self, t: float) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    times: np.ndarray
    probabilities: np.ndarray
    basis: tuple[Hashable, ...]
    provenance: Any = None

    def column(self, label: Hashable) -> np.ndarray:
        return self.probabilities[:, self.basis.index(label)]


def matrix_hash(matrix: np.ndarray) -> str:
    a = np.ascontiguousarray(matrix)
    return hashlib.sha256(a.dtype.str.encode() + repr(a.shape).encode() + a.tobytes()).hexdigest()


def diagonalize(h: ExcitationHamiltonian) -> Propagator:
    matrix = h.matrix
    if not np.array_equal(matrix, matrix.conj().T):
        raise NotHermitianError(f"{h.builder} produced a matrix that is not Hermitian")
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return Propagator(_frozen(eigenvalues), _frozen(eigenvectors), h.basis,
                      matrix_hash(matrix), h)


def _check_basis(p: Propagator, psi: QuantumState) -> None:
    if psi.basis != p.basis:
        raise ValueError("state and propagator are defined on different bases")


def evolve(p: Propagator, psi0: QuantumState, t: float) -> QuantumState:
    _check_basis(p, psi0)
    v = p.eigenvectors
    coeffs = v.conj().T @ psi0.amplitudes
    amps = v @ (np.exp(-1j * p.eigenvalues * t) * coeffs)
    return QuantumState(p.basis, amps)


def trace(p: Propagator, psi0: QuantumState, t_max: float, steps: int) -> EvolutionTrace:
    """Occupation probabilities on ``steps`` uniformly spaced times in [0, t_max]."""
    _check_basis(p, psi0)
    if steps < 2:
        raise ValueError(f"need at least 2 time samples, got {steps}")
    if not (np.isfinite(t_max) and t_max > 0):
        raise ValueError(f"t_max must be positive and finite, got {t_max}")
    times = np.linspace(0.0, t_max, steps)
    v = p.eigenvectors
    coeffs = v.conj().T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(times, p.eigenvalues))
    amps = (phases * coeffs) @ v.T
    probs = np.abs(amps) ** 2
    return EvolutionTrace(_frozen(times), _frozen(probs), p.basis, p.hamiltonian.config)


def transfer_fidelity(p: Propagator, source: Hashable, target: Hashable, t: float) -> float:
    """|<target| exp(-iHt) |source>|^2, insensitive to any global phase."""
    h = p.hamiltonian
    a, b = h.index(source), h.index(target)
    v = p.eigenvectors
    amp = np.sum(v[b] * np.exp(-1j * p.eigenvalues * t) * v[a].conj())
    return float(min(abs(amp) ** 2, 1.0))
