"""End-to-end LOCC telecloning of n-qubit pure states.

The senders share an entangled channel with the receivers, Bell-measure
their qubit pairs, broadcast 2n classical bits, and the receivers apply
local Pauli triples to land on the target superposition of cloning-machine
states — for every one of the 4^n (uniformly likely) outcomes.

Register layouts (big-endian blocks of n qubits each):
  channel      (A', B, C, anc)           4n qubits
  total state  (A, A', B, C, anc)        5n qubits, pairs (A_i, A'_i)
  final state  (B, C, anc)               3n qubits
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cloning import CloneParams, cloner_basis_state, target_state
from .qstate import (
    PAULI_X,
    PAULI_Z,
    BellElement,
    StateVector,
    apply_local,
    bell_probabilities,
    bell_project,
    entanglement_entropy,
    reduced_density,
    state_fidelity,
    tensor,
)

_BELL_ORDER = (
    BellElement.PHI_PLUS,
    BellElement.PHI_MINUS,
    BellElement.PSI_PLUS,
    BellElement.PSI_MINUS,
)


@dataclass(frozen=True)
class BellOutcome:
    """Joint Bell-measurement result, one element per sender pair."""

    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("outcome needs at least one element")

    @property
    def num_pairs(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return ",".join(e.label for e in self.elements)

    @classmethod
    def parse(cls, text: str) -> "BellOutcome":
        return cls(tuple(BellElement.parse(part) for part in text.split(",")))

    @classmethod
    def all_phi_plus(cls, n: int) -> "BellOutcome":
        return cls((BellElement.PHI_PLUS,) * n)

    @classmethod
    def all_outcomes(cls, n: int):
        """All 4^n joint outcomes, in a fixed deterministic order."""
        for combo in itertools.product(_BELL_ORDER, repeat=n):
            yield cls(combo)

    def classical_bits(self) -> tuple:
        """The 2n broadcast bits: per pair, (kind, parity) with PSI/- = 1."""
        bits = []
        for element in self.elements:
            bits.append(1 if element.kind == "PSI" else 0)
            bits.append(1 if element.sign < 0 else 0)
        return tuple(bits)


@dataclass(frozen=True)
class Correction:
    """One local Pauli triple acting on (B_i, C_i, a_i) for a single pair i."""

    op: str  # "x" or "z"
    pair: int  # 0-based pair index
    targets: tuple  # positions inside the (B, C, anc) register

    def to_json_dict(self) -> dict:
        return {"op": self.op, "pair": self.pair, "targets": list(self.targets)}


@dataclass(frozen=True)
class ChannelState:
    """The pre-shared channel 2^(-n/2) sum_k |k>_{A'} (x) machine_state_k."""

    state: StateVector
    params: CloneParams


def build_channel(params: CloneParams) -> ChannelState:
    """Assemble the channel on 4n qubits (A', B, C, anc).

    The prefactor 2^(-n/2) is forced by normalization; the reduced state
    on the A' block is maximally mixed, so the channel carries exactly
    n ebits across the (A' | receivers) cut for every p.
    """
    d = params.d
    blocks = [cloner_basis_state(k, params).amplitudes for k in range(d)]
    amps = np.concatenate(blocks) / math.sqrt(d)
    return ChannelState(StateVector(amps, 4 * params.n), params)


def attach_input(psi: StateVector, channel: ChannelState) -> StateVector:
    """Join the unknown input with the channel: (A, A', B, C, anc)."""
    if psi.num_qubits != channel.params.n:
        raise ValueError(
            f"input has {psi.num_qubits} qubits but the channel expects {channel.params.n}"
        )
    return tensor(psi, channel.state)


def project_pairs(
    state: StateVector,
    pairs,
    *,
    outcome: BellOutcome | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[BellOutcome, StateVector, float]:
    """Bell-project the given qubit pairs (positions refer to `state`).

    Exactly one of `outcome` (forced) or `rng` (sampled) must be given.
    Projections on disjoint pairs commute, so the order of `pairs` does
    not change the result.  Returns the joint outcome, the collapsed
    renormalized state on the remaining qubits (original relative order),
    and the joint probability.
    """
    pairs = list(pairs)
    if (outcome is None) == (rng is None):
        raise ValueError("pass exactly one of outcome= (forced) or rng= (sampled)")
    if outcome is not None and outcome.num_pairs != len(pairs):
        raise ValueError("outcome length does not match the number of pairs")
    remaining = list(range(state.num_qubits))
    current = state
    elements = []
    joint_prob = 1.0
    for step, (qa, qb) in enumerate(pairs):
        ia, ib = remaining.index(qa), remaining.index(qb)
        if outcome is not None:
            element = outcome.elements[step]
        else:
            probs = bell_probabilities(current, (ia, ib))
            draw = rng.random()
            acc = 0.0
            element = _BELL_ORDER[-1]
            for candidate in _BELL_ORDER:
                acc += probs[candidate]
                if draw < acc:
                    element = candidate
                    break
        current, prob = bell_project(current, (ia, ib), element)
        elements.append(element)
        joint_prob *= prob
        remaining.remove(qa)
        remaining.remove(qb)
    return BellOutcome(tuple(elements)), current, joint_prob


def measure_senders(
    total: StateVector,
    params: CloneParams,
    *,
    outcome: BellOutcome | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[BellOutcome, StateVector, float]:
    """Measure every sender pair (A_i, A'_i) of an attach_input state."""
    if total.num_qubits != 5 * params.n:
        raise ValueError("total state was not built by attach_input")
    pairs = [(i, params.n + i) for i in range(params.n)]
    return project_pairs(total, pairs, outcome=outcome, rng=rng)


def correction_plan(outcome: BellOutcome) -> tuple:
    """Local corrections recovering the target state from a measured outcome.

    For every pair with a PSI-type element: a sigma_x triple on
    (B_i, C_i, a_i); then for every pair with parity "-": a sigma_z triple
    on the same positions.  The plan is a function of the 2n broadcast
    bits alone, and each triple touches one qubit per receiver register.
    """
    n = outcome.num_pairs
    plan = []
    for i, element in enumerate(outcome.elements):
        if element.kind == "PSI":
            plan.append(Correction("x", i, (i, n + i, 2 * n + i)))
    for i, element in enumerate(outcome.elements):
        if element.sign < 0:
            plan.append(Correction("z", i, (i, n + i, 2 * n + i)))
    return tuple(plan)


_CORRECTION_OPS = {"x": PAULI_X, "z": PAULI_Z}


def apply_corrections(state: StateVector, plan, offset: int = 0) -> StateVector:
    """Apply a correction plan; `offset` shifts targets past spectator qubits."""
    for correction in plan:
        op = _CORRECTION_OPS[correction.op]
        for position in correction.targets:
            state = apply_local(state, op, offset + position)
    return state


@dataclass(frozen=True)
class ProtocolTranscript:
    """Everything one protocol run produced."""

    params: CloneParams
    outcome: BellOutcome
    probability: float
    classical_bits: tuple
    corrections: tuple
    final_state: StateVector
    fidelity_b: float
    fidelity_c: float
    target_overlap: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "p": self.params.p,
            "outcome": str(self.outcome),
            "probability": self.probability,
            "classical_bits": list(self.classical_bits),
            "corrections": [c.to_json_dict() for c in self.corrections],
            "fidelity_b": self.fidelity_b,
            "fidelity_c": self.fidelity_c,
            "target_overlap": self.target_overlap,
        }


def run(
    psi: StateVector,
    params: CloneParams,
    *,
    outcome: BellOutcome | None = None,
    seed: int | None = None,
    channel: ChannelState | None = None,
) -> ProtocolTranscript:
    """Full telecloning round: attach, measure, broadcast, correct, verify.

    Pass either a forced `outcome` (deterministic, for tests) or an
    explicit `seed` for sampled mode.  A prebuilt `channel` may be reused
    across runs with the same params.
    """
    if psi.num_qubits != params.n:
        raise ValueError("input register size does not match params.n")
    if abs(psi.norm - 1.0) > 1e-6:
        raise ValueError(f"input state norm {psi.norm} is not 1 within 1e-6")
    psi = psi.normalized()
    if channel is None:
        channel = build_channel(params)
    elif channel.params != params:
        raise ValueError("channel was built for different params")
    total = attach_input(psi, channel)
    rng = np.random.default_rng(seed) if seed is not None else None
    measured, collapsed, probability = measure_senders(
        total, params, outcome=outcome, rng=rng
    )
    plan = correction_plan(measured)
    final = apply_corrections(collapsed, plan)
    n = params.n
    rho_b = reduced_density(final, range(n))
    rho_c = reduced_density(final, range(n, 2 * n))
    fidelity_b = state_fidelity(psi, rho_b)
    fidelity_c = state_fidelity(psi, rho_c)
    overlap = target_state(psi.amplitudes, params).fidelity_with(final)
    return ProtocolTranscript(
        params=params,
        outcome=measured,
        probability=probability,
        classical_bits=measured.classical_bits(),
        corrections=plan,
        final_state=final,
        fidelity_b=fidelity_b,
        fidelity_c=fidelity_c,
        target_overlap=overlap,
    )


def outcome_probabilities(psi: StateVector, params: CloneParams) -> dict:
    """Exact joint probability of every one of the 4^n outcomes.

    Computed by walking the projection tree (conditional probabilities
    multiply along each branch).  For any normalized input the
    distribution comes out uniform at 4^(-n).
    """
    total = attach_input(psi.normalized(), build_channel(params))
    n = params.n
    probs: dict[BellOutcome, float] = {}

    def descend(state: StateVector, step: int, prefix: tuple, acc: float) -> None:
        if step == n:
            probs[BellOutcome(prefix)] = acc
            return
        # pair (A_step, A'_step): earlier projections removed qubits
        # {0..step-1} and {n..n+step-1}, so the pair now sits at (0, n-step)
        position = (0, n - step)
        branch = bell_probabilities(state, position)
        for element in _BELL_ORDER:
            prob = branch[element]
            if prob < 1e-18:
                for tail in itertools.product(_BELL_ORDER, repeat=n - step - 1):
                    probs[BellOutcome(prefix + (element,) + tail)] = 0.0
                continue
            collapsed, _ = bell_project(state, position, element)
            descend(collapsed, step + 1, prefix + (element,), acc * prob)

    descend(total, 0, (), 1.0)
    return probs


def sample_outcomes(
    psi: StateVector, params: CloneParams, num_samples: int, seed: int
) -> dict:
    """Seeded outcome counts drawn from the exact joint distribution."""
    probs = outcome_probabilities(psi, params)
    outcomes = list(probs)
    weights = np.array([probs[o] for o in outcomes])
    weights = weights / weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(outcomes), size=num_samples, p=weights)
    counts = np.bincount(draws, minlength=len(outcomes))
    return {outcome: int(count) for outcome, count in zip(outcomes, counts)}


# Maximally entangled 2-qubit-vs-qudit reference input: pairing each input
# qubit with one reference qubit, 1/2 sum_j |j>_{A} |j>_{ref}.
def entangled_reference_input() -> StateVector:
    amps = np.zeros(16, dtype=complex)
    for j in range(4):
        amps[(j << 2) | j] = 0.5
    return StateVector(amps, 4)


def entanglement_cost_check(
    params: CloneParams,
    *,
    input_state: StateVector | None = None,
    outcome: BellOutcome | None = None,
    seed: int | None = None,
) -> float:
    """Ebits the protocol delivers across the (reference | receivers) cut.

    Telecloning the two input qubits of a 4-qubit state whose other half
    is a reference qudit no party touches.  With the maximally entangled
    reference input the final state carries exactly 2 ebits between the
    reference and the receiver side, for every p — which is why 2 ebits
    of channel entanglement are necessary.  A product input yields 0.
    """
    if params.n != 2:
        raise ValueError("the entanglement-cost check is defined for n=2")
    if input_state is None:
        input_state = entangled_reference_input()
    n_ref = input_state.num_qubits - params.n
    if n_ref < 1:
        raise ValueError("input must carry at least one reference qubit")
    if outcome is None and seed is None:
        outcome = BellOutcome.all_phi_plus(params.n)
    rng = np.random.default_rng(seed) if seed is not None else None
    channel = build_channel(params)
    total = tensor(input_state, channel.state)
    offset = params.n + n_ref
    pairs = [(i, offset + i) for i in range(params.n)]
    measured, collapsed, _ = project_pairs(total, pairs, outcome=outcome, rng=rng)
    final = apply_corrections(collapsed, correction_plan(measured), offset=n_ref)
    return entanglement_entropy(final, range(n_ref))
