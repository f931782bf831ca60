"""Dense state-vector and density-matrix primitives for qubit registers.

Convention used throughout the package: qubit 0 is the *most significant*
bit of a basis label, so |q0 q1 ... q_{m-1}> sits at integer index
q0*2^(m-1) + q1*2^(m-2) + ... + q_{m-1}.  Registers listed first in a
tensor product therefore occupy the high bits.

All operations are pure: they return new values and never mutate their
inputs.  States and density matrices are safe to share across threads.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# 2^20 complex doubles = 16 MiB per state; everything here is desk-scale.
MAX_QUBITS = 20

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: tolerance below which a forced measurement outcome counts as impossible
IMPOSSIBLE_PROB = 1e-15

#: eigenvalues below this are treated as exact zeros in entropy sums
ENTROPY_EIG_FLOOR = 1e-12


class ImpossibleOutcomeError(ValueError):
    """A projection was requested onto an outcome of (numerically) zero probability."""


def _check_position(position: int, num_qubits: int) -> None:
    if not 0 <= position < num_qubits:
        raise ValueError(
            f"qubit position {position} out of range for {num_qubits} qubits"
        )


def _num_qubits_for(length: int) -> int:
    m = max(length.bit_length() - 1, 0)
    if length != 1 << m:
        raise ValueError(f"amplitude count {length} is not a power of two")
    return m


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over an ordered register of qubits."""

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be one-dimensional")
        if self.num_qubits < 0 or self.num_qubits > MAX_QUBITS:
            raise ValueError(
                f"register size {self.num_qubits} outside supported range [0, {MAX_QUBITS}]"
            )
        if amps.size != 1 << self.num_qubits:
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for "
                f"{self.num_qubits} qubits, got {amps.size}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        m = _num_qubits_for(amps.size)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm < 1e-12:
                raise ValueError("cannot normalize a zero vector")
            amps = amps / norm
        return cls(amps, m)

    @classmethod
    def basis(cls, index: int, num_qubits: int) -> "StateVector":
        """Computational basis state |index> on the given register size."""
        dim = 1 << num_qubits
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def random(cls, num_qubits: int, rng: np.random.Generator) -> "StateVector":
        """Normalized state with i.i.d. complex-Gaussian amplitudes."""
        dim = 1 << num_qubits
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return cls(amps / np.linalg.norm(amps), num_qubits)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.amplitudes / self.norm, self.num_qubits)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("register size mismatch")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity_with(self, other: "StateVector") -> float:
        """|<self|other>|^2 — the phase-insensitive equality measure."""
        return abs(self.overlap(other)) ** 2

    def _tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.num_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on a qubit register."""

    entries: np.ndarray
    num_qubits: int

    def __post_init__(self):
        mat = np.array(self.entries, dtype=complex)
        dim = 1 << self.num_qubits
        if mat.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, atol=1e-9, rtol=0):
            raise ValueError("density matrix is not Hermitian within 1e-9")
        trace = mat.trace()
        if abs(trace - 1.0) > 1e-9:
            raise ValueError(f"density matrix trace {trace} differs from 1 beyond 1e-9")
        if np.linalg.eigvalsh(mat).min() < -1e-9:
            raise ValueError("density matrix has an eigenvalue below -1e-9")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        amps = state.amplitudes
        return cls(np.outer(amps, amps.conj()), state.num_qubits)


class BellElement(Enum):
    """One of the four maximally entangled two-qubit basis states.

    PHI elements live on |00>,|11>, PSI elements on |01>,|10>; the sign is
    the relative phase ("parity") between the two kets.
    """

    PHI_PLUS = ("PHI", 1)
    PHI_MINUS = ("PHI", -1)
    PSI_PLUS = ("PSI", 1)
    PSI_MINUS = ("PSI", -1)

    @property
    def kind(self) -> str:
        return self.value[0]

    @property
    def sign(self) -> int:
        return self.value[1]

    @property
    def label(self) -> str:
        return self.kind + ("+" if self.sign > 0 else "-")

    def tensor(self) -> np.ndarray:
        """Amplitudes as a 2x2 tensor T[a, b] over the pair's basis values."""
        t = np.zeros((2, 2), dtype=complex)
        if self.kind == "PHI":
            t[0, 0] = 1.0
            t[1, 1] = self.sign
        else:
            t[0, 1] = 1.0
            t[1, 0] = self.sign
        return t / math.sqrt(2)

    @classmethod
    def parse(cls, label: str) -> "BellElement":
        for element in cls:
            if element.label == label.strip().upper():
                return element
        raise ValueError(f"unknown Bell element {label!r}; expected PHI+/PHI-/PSI+/PSI-")


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; `a`'s register occupies the high bits of the result."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.num_qubits + b.num_qubits)


def apply_local(state: StateVector, op: np.ndarray, target: int) -> StateVector:
    """Apply a one-qubit operator to the target qubit, identity elsewhere."""
    _check_position(target, state.num_qubits)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError("operator must be a 2x2 matrix")
    psi = state._tensor_view()
    out = np.tensordot(op, psi, axes=([1], [target]))
    out = np.moveaxis(out, 0, target)
    return StateVector(out.reshape(-1), state.num_qubits)


def bell_project(
    state: StateVector, pair: tuple[int, int], element: BellElement
) -> tuple[StateVector, float]:
    """Project a qubit pair onto one Bell element.

    Returns the renormalized post-measurement state on the remaining
    qubits (original relative order preserved) and the outcome
    probability.  Raises ImpossibleOutcomeError when the probability is
    below IMPOSSIBLE_PROB, in which case there is no state to renormalize.
    """
    i, j = pair
    _check_position(i, state.num_qubits)
    _check_position(j, state.num_qubits)
    if i == j:
        raise ValueError("the two pair positions must be distinct")
    psi = state._tensor_view()
    residual = np.tensordot(element.tensor().conj(), psi, axes=([0, 1], [i, j]))
    prob = float(np.vdot(residual, residual).real)
    if prob < IMPOSSIBLE_PROB:
        raise ImpossibleOutcomeError(
            f"outcome {element.label} on pair {pair} has probability {prob:.3e}"
        )
    collapsed = StateVector(residual.reshape(-1) / math.sqrt(prob), state.num_qubits - 2)
    return collapsed, prob


def bell_probabilities(state: StateVector, pair: tuple[int, int]) -> dict:
    """Probabilities of all four Bell outcomes on a qubit pair (sums to 1)."""
    i, j = pair
    _check_position(i, state.num_qubits)
    _check_position(j, state.num_qubits)
    psi = state._tensor_view()
    probs = {}
    for element in BellElement:
        residual = np.tensordot(element.tensor().conj(), psi, axes=([0, 1], [i, j]))
        probs[element] = float(np.vdot(residual, residual).real)
    return probs


def _split_keep(num_qubits: int, keep) -> tuple[list, list]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    for k in keep:
        _check_position(k, num_qubits)
    rest = [i for i in range(num_qubits) if i not in keep]
    return keep, rest


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every qubit not in `keep` (kept qubits keep their order)."""
    keep, rest = _split_keep(rho.num_qubits, keep)
    if not rest:
        return rho
    m = rho.num_qubits
    perm = keep + rest
    t = rho.entries.reshape([2] * (2 * m))
    t = t.transpose(perm + [m + ax for ax in perm])
    k_dim, r_dim = 1 << len(keep), 1 << len(rest)
    t = t.reshape(k_dim, r_dim, k_dim, r_dim)
    return DensityMatrix(np.einsum("abcb->ac", t), len(keep))


def reduced_density(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix of a pure state on the kept qubits."""
    keep, rest = _split_keep(state.num_qubits, keep)
    mat = state._tensor_view().transpose(keep + rest).reshape(1 << len(keep), -1)
    return DensityMatrix(mat @ mat.conj().T, len(keep))


def _entropy_from_eigs(eigs: np.ndarray) -> float:
    eigs = eigs[eigs > ENTROPY_EIG_FLOOR]
    return float(-(eigs * np.log2(eigs)).sum()) if eigs.size else 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum(lam * log2(lam)) in ebits, with 0*log(0) := 0."""
    return _entropy_from_eigs(np.linalg.eigvalsh(rho.entries))


def entanglement_entropy(state: StateVector, subsystem) -> float:
    """Entropy of the reduced state on `subsystem`, via singular values.

    Equivalent to von_neumann_entropy(reduced_density(...)) but avoids
    forming the density matrix, so it scales to large complements.
    """
    keep, rest = _split_keep(state.num_qubits, subsystem)
    if not rest:
        return 0.0
    mat = state._tensor_view().transpose(keep + rest).reshape(1 << len(keep), -1)
    singular = np.linalg.svd(mat, compute_uv=False)
    return _entropy_from_eigs(singular**2)


def _sqrt_spectrum(eigvals: np.ndarray, what: str) -> np.ndarray:
    # sqrt amplifies eigenvalue noise (sqrt(1e-16) = 1e-8), so anything
    # within the 1e-12 noise floor is treated as an exact zero; genuinely
    # negative spectra are invalid inputs
    if eigvals.min() < -1e-12:
        raise ValueError(f"{what} is not PSD: eigenvalue {eigvals.min():.3e}")
    return np.sqrt(np.where(eigvals < ENTROPY_EIG_FLOOR, 0.0, eigvals))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix via eigendecomposition."""
    eigvals, eigvecs = np.linalg.eigh(mat)
    roots = _sqrt_spectrum(eigvals, "matrix")
    return (eigvecs * roots) @ eigvecs.conj().T


def uhlmann_fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Mixed-state fidelity [Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2 in [0, 1]."""
    if rho1.num_qubits != rho2.num_qubits:
        raise ValueError("density matrices have different dimensions")
    root = _psd_sqrt(rho1.entries)
    inner = root @ rho2.entries @ root
    inner = (inner + inner.conj().T) / 2
    roots = _sqrt_spectrum(np.linalg.eigvalsh(inner), "fidelity kernel")
    value = float(roots.sum() ** 2)
    return min(max(value, 0.0), 1.0)


def state_fidelity(psi: StateVector, rho: DensityMatrix) -> float:
    """Pure-vs-mixed fidelity <psi|rho|psi>."""
    if psi.num_qubits != rho.num_qubits:
        raise ValueError("state and density matrix have different dimensions")
    amps = psi.amplitudes
    return float(np.real(amps.conj() @ rho.entries @ amps))
