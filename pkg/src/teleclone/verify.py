"""Executable invariant suite behind the CLI `verify` command.

Each group bundles related invariants into named checks with a recorded
worst-case deviation, so a regression points at the broken property
rather than a generic failure.
"""

from dataclasses import dataclass, field

import numpy as np

from . import entanglement as ent
from . import mixed as mx
from . import protocol as pt
from . import qstate as qs
from .cloning import CloneParams, clone_fidelities, clone_pair, cloner_basis_state

DEFAULT_SEED = 20240811

_P_VALUES = (0.0, 0.3, 0.5, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class GroupResult:
    name: str
    checks: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def _check(name: str, deviation: float, tolerance: float) -> CheckResult:
    return CheckResult(
        name,
        bool(deviation <= tolerance),
        f"max deviation {deviation:.3e} (tolerance {tolerance:.0e})",
    )


def channel_checks(channel: pt.ChannelState) -> list:
    """Validity checks for one channel state; reusable as a negative control."""
    n = channel.params.n
    norm_dev = abs(channel.state.norm - 1.0)
    entropy = qs.entanglement_entropy(channel.state, range(n))
    return [
        _check(f"channel-norm n={n} p={channel.params.p}", norm_dev, 1e-9),
        _check(
            f"channel-entropy n={n} p={channel.params.p}", abs(entropy - n), 1e-6
        ),
    ]


def _group_qstate(seed: int) -> GroupResult:
    rng = np.random.default_rng(seed)
    checks = []

    dev = 0.0
    for _ in range(20):
        state = qs.StateVector.random(4, rng)
        op = [qs.PAULI_X, qs.PAULI_Y, qs.PAULI_Z, qs.IDENTITY][rng.integers(4)]
        out = qs.apply_local(state, op, int(rng.integers(4)))
        dev = max(dev, abs(out.norm - 1.0))
        other = qs.StateVector.random(2, rng)
        dev = max(dev, abs(qs.tensor(state, other).norm - 1.0))
    checks.append(_check("norm-preservation", dev, 1e-9))

    dev = 0.0
    for _ in range(10):
        state = qs.StateVector.random(4, rng)
        pair = tuple(rng.choice(4, size=2, replace=False))
        total = sum(qs.bell_probabilities(state, pair).values())
        dev = max(dev, abs(total - 1.0))
    checks.append(_check("bell-completeness", dev, 1e-9))

    dev = 0.0
    for _ in range(5):
        rho = qs.reduced_density(qs.StateVector.random(5, rng), range(4))
        joint = qs.partial_trace(rho, [0, 2])
        stepwise = qs.partial_trace(qs.partial_trace(rho, [0, 1, 2]), [0, 2])
        dev = max(dev, float(np.abs(joint.entries - stepwise.entries).max()))
    checks.append(_check("partial-trace-two-step", dev, 1e-10))

    ok = True
    for _ in range(10):
        rho = qs.reduced_density(qs.StateVector.random(6, rng), range(3))
        entropy = qs.von_neumann_entropy(rho)
        ok = ok and -1e-9 <= entropy <= 3 + 1e-9
    checks.append(CheckResult("entropy-bounds", ok, "0 <= S <= num_qubits"))

    dev = 0.0
    for _ in range(10):
        psi = qs.StateVector.random(2, rng)
        rho = qs.reduced_density(qs.StateVector.random(4, rng), range(2))
        pure = qs.DensityMatrix.from_state(psi)
        dev = max(dev, abs(qs.uhlmann_fidelity(pure, pure) - 1.0))
        dev = max(
            dev,
            abs(qs.uhlmann_fidelity(pure, rho) - qs.state_fidelity(psi, rho)),
        )
    checks.append(_check("uhlmann-properties", dev, 1e-9))

    dev = 0.0
    for _ in range(10):
        r1 = qs.reduced_density(qs.StateVector.random(4, rng), range(2))
        r2 = qs.reduced_density(qs.StateVector.random(4, rng), range(2))
        dev = max(dev, abs(qs.uhlmann_fidelity(r1, r2) - qs.uhlmann_fidelity(r2, r1)))
    checks.append(_check("uhlmann-symmetry", dev, 1e-8))

    return GroupResult("qstate", tuple(checks))


def _group_transformations(seed: int) -> GroupResult:
    checks = []
    for p in _P_VALUES:
        params = CloneParams(p=p, n=2)
        states = [cloner_basis_state(j, params) for j in range(4)]

        dev = 0.0
        # sign flips: sigma_z triple at pair position i flips states whose
        # index has bit (n-1-i) set
        for pos, flipped in ((0, {2, 3}), (1, {1, 3})):
            for j, state in enumerate(states):
                out = state
                for offset in (0, 2, 4):
                    out = qs.apply_local(out, qs.PAULI_Z, offset + pos)
                expected = -1.0 if j in flipped else 1.0
                dev = max(
                    dev,
                    float(
                        np.abs(out.amplitudes - expected * state.amplitudes).max()
                    ),
                )
        checks.append(_check(f"parity-triples p={p}", dev, 1e-12))

        dev = 0.0
        # index maps: sigma_x triple at pair position i sends j to j XOR 2^(n-1-i)
        for pos, mask in ((0, 2), (1, 1)):
            for j, state in enumerate(states):
                out = state
                for offset in (0, 2, 4):
                    out = qs.apply_local(out, qs.PAULI_X, offset + pos)
                dev = max(
                    dev,
                    float(np.abs(out.amplitudes - states[j ^ mask].amplitudes).max()),
                )
        checks.append(_check(f"state-triples p={p}", dev, 1e-12))

    dev = 0.0
    for n in (1, 2, 3):
        params = CloneParams(p=0.3, n=n)
        states = [cloner_basis_state(j, params) for j in range(params.d)]
        for pos in range(n):
            mask = 1 << (n - 1 - pos)
            for j, state in enumerate(states):
                z_out = state
                x_out = state
                for offset in (0, n, 2 * n):
                    z_out = qs.apply_local(z_out, qs.PAULI_Z, offset + pos)
                    x_out = qs.apply_local(x_out, qs.PAULI_X, offset + pos)
                sign = -1.0 if j & mask else 1.0
                dev = max(
                    dev, float(np.abs(z_out.amplitudes - sign * state.amplitudes).max())
                )
                dev = max(
                    dev,
                    float(np.abs(x_out.amplitudes - states[j ^ mask].amplitudes).max()),
                )
    checks.append(_check("generalized-triples n=1..3", dev, 1e-12))
    return GroupResult("transformations", tuple(checks))


def _group_channel(seed: int) -> GroupResult:
    checks = []
    for n in (1, 2, 3):
        for p in _P_VALUES:
            checks.extend(channel_checks(pt.build_channel(CloneParams(p=p, n=n))))

    # independent assembly at n=2: half the sum over basis labels of
    # |k> (x) machine_state_k
    params = CloneParams(p=0.3, n=2)
    expected = np.zeros(1 << 8, dtype=complex)
    for k in range(4):
        basis = np.zeros(4, dtype=complex)
        basis[k] = 1.0
        expected += 0.5 * np.kron(basis, cloner_basis_state(k, params).amplitudes)
    dev = float(np.abs(pt.build_channel(params).state.amplitudes - expected).max())
    checks.append(_check("channel-amplitudes n=2", dev, 1e-12))
    return GroupResult("channel", tuple(checks))


def _group_protocol(seed: int) -> GroupResult:
    rng = np.random.default_rng(seed)
    checks = []

    overlap_dev = 0.0
    fid_dev = 0.0
    for n, inputs in ((2, 5), (3, 2)):
        params = CloneParams(p=0.35, n=n)
        channel = pt.build_channel(params)
        f_b, f_c = clone_fidelities(params)
        for _ in range(inputs):
            psi = qs.StateVector.random(n, rng)
            for outcome in pt.BellOutcome.all_outcomes(n):
                tr = pt.run(psi, params, outcome=outcome, channel=channel)
                overlap_dev = max(overlap_dev, 1.0 - tr.target_overlap)
                fid_dev = max(
                    fid_dev, abs(tr.fidelity_b - f_b), abs(tr.fidelity_c - f_c)
                )
    checks.append(_check("all-outcomes-reach-target n=2,3", overlap_dev, 1e-9))
    checks.append(_check("fidelities-match-formula", fid_dev, 1e-9))

    dev = 0.0
    for n in (2, 3):
        psi = qs.StateVector.random(n, rng)
        probs = pt.outcome_probabilities(psi, CloneParams(p=0.5, n=n))
        dev = max(dev, max(abs(v - 0.25**n) for v in probs.values()))
    checks.append(_check("uniform-outcome-probabilities", dev, 1e-9))

    params = CloneParams(p=0.25, n=2)
    channel = pt.build_channel(params)
    fids = [
        pt.run(qs.StateVector.random(2, rng), params, channel=channel,
               outcome=pt.BellOutcome.all_phi_plus(2)).fidelity_b
        for _ in range(20)
    ]
    checks.append(_check("universality-input-independence", float(np.std(fids)), 1e-9))

    ok = True
    for outcome in pt.BellOutcome.all_outcomes(2):
        for c in pt.correction_plan(outcome):
            blocks = {t // 2 for t in c.targets}
            ok = ok and blocks == {0, 1, 2} and len(set(c.targets)) == 3
        ok = ok and len(outcome.classical_bits()) == 4
    checks.append(
        CheckResult("locc-discipline", ok, "one target per receiver register; 2n bits")
    )

    # measurement order must not matter
    psi = qs.StateVector.random(2, rng)
    total = pt.attach_input(psi, channel)
    outcome = pt.BellOutcome.parse("PSI-,PHI-")
    _, fwd, p_fwd = pt.project_pairs(total, [(0, 2), (1, 3)], outcome=outcome)
    rev_outcome = pt.BellOutcome(outcome.elements[::-1])
    _, rev, p_rev = pt.project_pairs(total, [(1, 3), (0, 2)], outcome=rev_outcome)
    dev = max(abs(p_fwd - p_rev), 1.0 - fwd.fidelity_with(rev))
    checks.append(_check("measurement-order-invariance", dev, 1e-9))

    dev = 0.0
    for p in (0.2, 0.5):
        cost = pt.entanglement_cost_check(CloneParams(p=p, n=2))
        dev = max(dev, abs(cost - 2.0))
    product = qs.tensor(qs.StateVector.random(2, rng), qs.StateVector.basis(0, 2))
    dev = max(
        dev,
        abs(pt.entanglement_cost_check(CloneParams(p=0.5, n=2), input_state=product)),
    )
    checks.append(_check("entanglement-cost", dev, 1e-6))
    return GroupResult("protocol", tuple(checks))


def _group_entanglement(seed: int) -> GroupResult:
    rng = np.random.default_rng(seed)
    checks = []

    dev = 0.0
    for _ in range(50):
        psi = qs.StateVector.random(2, rng)
        p = float(rng.uniform())
        params = CloneParams(p=p, n=2)
        rho_b, rho_c = clone_pair(psi, params)
        f_b, f_c = clone_fidelities(params)
        mu_value = ent.mu(psi.amplitudes)
        dev = max(
            dev,
            abs(ent.wootters_concurrence(rho_b) - ent.clone_concurrence(mu_value, f_b)),
            abs(ent.wootters_concurrence(rho_c) - ent.clone_concurrence(mu_value, f_c)),
        )
    checks.append(_check("concurrence-oracle-equivalence", dev, 1e-9))

    dev = 0.0
    for _ in range(20):
        psi = qs.StateVector.random(2, rng)
        reduced = qs.reduced_density(psi, [0])
        dev = max(
            dev,
            abs(ent.input_entanglement(psi.amplitudes) - qs.von_neumann_entropy(reduced)),
        )
    checks.append(_check("input-eof-vs-reduced-entropy", dev, 1e-8))

    grid = ent.SweepGrid(mu_step=0.01, p_step=0.005)
    report = ent.sweep_delta(grid)
    checks.append(
        CheckResult(
            "delta-nonnegative",
            report.violations == 0 and report.min_delta >= -grid.tolerance,
            f"min delta {report.min_delta:.3e}",
        )
    )
    checks.append(
        CheckResult(
            "combined-eof-monotone", report.monotone_ok, "nondecreasing on [1/2, p_hi]"
        )
    )
    checks.append(
        CheckResult(
            "inflection-above-0.56",
            report.inflection_ok,
            f"min estimate {report.min_inflection_p}",
        )
    )
    checks.append(
        CheckResult(
            "gap-minimized-on-region-boundary",
            report.boundary_ok,
            "argmin at a concurrence zero",
        )
    )

    dev = 0.0
    ok = True
    for mu_value in (0.2, 0.25, 0.3, 0.4, 0.45):
        lo, hi = ent.physical_region(mu_value)
        dev = max(dev, abs(lo + hi - 1.0))
        f_lo = ent._fidelities_d4(lo + 1e-6)
        inside = (
            ent.clone_concurrence(mu_value, f_lo[0]) > 0
            and ent.clone_concurrence(mu_value, f_lo[1]) > 0
        )
        f_out = ent._fidelities_d4(lo - 1e-6)
        outside = (
            ent.clone_concurrence(mu_value, f_out[0]) == 0.0
            or ent.clone_concurrence(mu_value, f_out[1]) == 0.0
        )
        ok = ok and inside and outside
    checks.append(_check("physical-region-symmetry", dev, 1e-12))
    checks.append(CheckResult("physical-region-boundaries", ok, "positivity flips at edges"))

    xs = np.linspace(0.0, 1.0, 1001)
    hs = ent.eof_from_concurrence(xs)
    checks.append(
        CheckResult(
            "eof-monotone", bool(np.all(np.diff(hs) > 0)), "strict on the unit grid"
        )
    )
    return GroupResult("entanglement", tuple(checks))


def _group_mixed(seed: int) -> GroupResult:
    rng = np.random.default_rng(seed)
    checks = []

    dev = 0.0
    for alphas in mx.sample_simplex(4, 5, rng):
        mixed = mx.MixedInput(alphas, 2)
        back = qs.reduced_density(mx.purify(mixed), range(2))
        dev = max(dev, float(np.abs(back.entries - np.diag(alphas)).max()))
    checks.append(_check("purification-round-trip", dev, 1e-12))

    dev = 0.0
    for p in (0.2, 0.5, 0.8):
        mixed = mx.MixedInput(np.array([0.6, 0.4]), 1)
        params = mixed.protocol_params(p)
        rho_b, rho_c, rho_b2, rho_c2 = mx.teleclone_mixed(mixed, params)
        formula_b = mx.mixed_clone_formula(mixed, params)
        formula_c = mx.mixed_clone_formula(mixed, CloneParams(p=params.q, n=params.n))
        dev = max(
            dev,
            float(np.abs(rho_b.entries - formula_b.entries).max()),
            float(np.abs(rho_c.entries - formula_c.entries).max()),
            float(np.abs(rho_b.entries - rho_b2.entries).max()),
            float(np.abs(rho_c.entries - rho_c2.entries).max()),
        )
    checks.append(_check("clone-formula-vs-simulation", dev, 1e-9))

    dev = 0.0
    ok = True
    for alphas in mx.sample_simplex(2, 20, rng):
        mixed = mx.MixedInput(alphas, 1)
        params = mixed.protocol_params(0.5)
        formula = mx.mixed_fidelity(mixed, params)
        oracle = qs.uhlmann_fidelity(
            mixed.density(), mx.mixed_clone_formula(mixed, params)
        )
        dev = max(dev, abs(formula - oracle))
        lower, _ = mx.fidelity_bounds(params)
        ok = ok and lower - 1e-9 <= formula <= 1.0 + 1e-9
    checks.append(_check("fidelity-formula-vs-uhlmann", dev, 1e-8))
    checks.append(CheckResult("fidelity-bound-containment", ok, "20 simplex samples"))

    ok = True
    for alphas in ([1.0, 0.0], [0.5, 0.5], [0.7, 0.3]):
        mixed = mx.MixedInput(np.array(alphas), 1)
        f_mixed, f_pure = mx.monotonicity_check(mixed, mixed.protocol_params(0.5))
        ok = ok and f_mixed >= f_pure - 1e-9
    checks.append(CheckResult("trace-monotonicity", ok, "F_mixed >= F_pure"))
    return GroupResult("mixed", tuple(checks))


def _group_outcomes(seed: int) -> GroupResult:
    rng = np.random.default_rng(seed)
    checks = []
    params = CloneParams(p=0.5, n=2)
    psi = qs.StateVector.random(2, rng)

    probs = pt.outcome_probabilities(psi, params)
    dev = max(abs(v - 1 / 16) for v in probs.values())
    checks.append(_check("exact-uniform-1/16", dev, 1e-9))

    samples = 20000
    counts = pt.sample_outcomes(psi, params, samples, seed)
    sigma = (samples * (1 / 16) * (15 / 16)) ** 0.5
    worst = max(abs(c - samples / 16) for c in counts.values())
    checks.append(
        CheckResult(
            "sampled-frequencies-3sigma",
            worst <= 3 * sigma,
            f"worst count deviation {worst:.0f} vs 3 sigma {3 * sigma:.0f}",
        )
    )
    return GroupResult("outcomes", tuple(checks))


GROUPS = {
    "qstate": _group_qstate,
    "transformations": _group_transformations,
    "channel": _group_channel,
    "protocol": _group_protocol,
    "entanglement": _group_entanglement,
    "mixed": _group_mixed,
    "outcomes": _group_outcomes,
}


def run_verification(groups=None, seed: int = DEFAULT_SEED) -> list:
    """Run the requested groups (all by default), in declaration order."""
    names = list(GROUPS) if groups is None else list(groups)
    results = []
    for name in names:
        if name not in GROUPS:
            raise ValueError(f"unknown group {name!r}; choose from {sorted(GROUPS)}")
        results.append(GROUPS[name](seed))
    return results
