"""Asymmetric universal cloning machine for n-qubit inputs (d = 2^n).

The machine turns a d-level basis state |j> into a normalized state on
three n-qubit registers — clone B, clone C, ancilla — in which weight p
sits on the terms where C is shifted away from j and weight q = 1 - p on
the terms where B is shifted.  Superposing these basis outputs clones an
arbitrary input with input-independent fidelities F_B(p) and F_C(p).
"""

import math
from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, StateVector


@dataclass(frozen=True)
class CloneParams:
    """Asymmetry weight p (q = 1 - p derived) and register size n (d = 2^n)."""

    p: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"asymmetry weight p={self.p} outside [0, 1]")
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def d(self) -> int:
        return 1 << self.n

    @property
    def normalization(self) -> float:
        """The common factor 1 + (d-1)(p^2 + q^2)."""
        return 1.0 + (self.d - 1) * (self.p**2 + self.q**2)


def cloner_basis_state(j: int, params: CloneParams) -> StateVector:
    """Machine output for basis input |j>, on 3n qubits (B, C, ancilla).

    Each register holds a d-level value expanded into n qubits
    (big-endian).  The terms are |j,j,j>, p|j, j+r, j+r> and
    q|j+r, j, j+r> for r = 1..d-1 (shifts mod d), divided by
    sqrt(1 + (d-1)(p^2 + q^2)).

    The d outputs are mutually orthonormal for every p: their
    computational-basis supports are pairwise disjoint.
    """
    d = params.d
    if not 0 <= j < d:
        raise ValueError(f"basis index {j} out of range for d={d}")
    amps = np.zeros(d**3, dtype=complex)
    amps[(j * d + j) * d + j] = 1.0
    for r in range(1, d):
        k = (j + r) % d
        amps[(j * d + k) * d + k] = params.p
        amps[(k * d + j) * d + k] = params.q
    amps /= math.sqrt(params.normalization)
    return StateVector(amps, 3 * params.n)


def target_state(alphas, params: CloneParams) -> StateVector:
    """Superposition sum_j alphas[j] * cloner_basis_state(j) on 3n qubits.

    This is the state the telecloning protocol delivers to the receivers;
    tracing it down to either clone register gives the closed-form clones.
    """
    alphas = np.asarray(alphas, dtype=complex)
    if alphas.size != params.d:
        raise ValueError(f"expected {params.d} amplitudes, got {alphas.size}")
    amps = np.zeros(params.d**3, dtype=complex)
    for j, alpha in enumerate(alphas):
        if alpha != 0:
            amps += alpha * cloner_basis_state(j, params).amplitudes
    return StateVector(amps, 3 * params.n)


def clone_pair(psi: StateVector, params: CloneParams) -> tuple[DensityMatrix, DensityMatrix]:
    """Closed-form clone density operators (rho_B, rho_C) for a pure input.

    rho_B = {[1 - q^2 + (d-1)p^2] |psi><psi| + q^2 I} / normalization,
    and rho_C is the same with p and q exchanged.
    """
    if psi.num_qubits != params.n:
        raise ValueError("input register size does not match params.n")
    d, p, q = params.d, params.p, params.q
    projector = np.outer(psi.amplitudes, psi.amplitudes.conj())
    eye = np.eye(d)
    norm = params.normalization
    rho_b = ((1 - q**2 + (d - 1) * p**2) * projector + q**2 * eye) / norm
    rho_c = ((1 - p**2 + (d - 1) * q**2) * projector + p**2 * eye) / norm
    return DensityMatrix(rho_b, params.n), DensityMatrix(rho_c, params.n)


def fidelity_curve(p, d: int) -> tuple:
    """Vectorized clone fidelities (F_B, F_C) as functions of p for given d.

    F_B = [1 + (d-1)p^2] / [1 + (d-1)(p^2 + q^2)] with q = 1 - p; F_C is
    the p <-> q mirror.  F_B rises from 1/d at p=0 to 1 at p=1 while F_C
    falls; both equal the optimal universal symmetric cloning fidelity
    (d+3)/(2(d+1)) at p = 1/2.
    """
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    norm = 1.0 + (d - 1) * (p**2 + q**2)
    return (1.0 + (d - 1) * p**2) / norm, (1.0 + (d - 1) * q**2) / norm


def clone_fidelities(params: CloneParams) -> tuple[float, float]:
    """Closed-form (F_B, F_C) for the given asymmetry and dimension."""
    f_b, f_c = fidelity_curve(params.p, params.d)
    return float(f_b), float(f_c)
