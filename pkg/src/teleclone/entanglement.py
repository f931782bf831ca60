"""Entanglement accounting for two-qubit inputs and their clones.

Closed forms for the input entanglement H(2*mu), the clone concurrences,
and the budget gap delta = input EoF minus the two clones' EoF, plus a
dense numerical sweep certifying that the gap never goes negative — the
protocol cannot create entanglement.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cloning import fidelity_curve
from .qstate import PAULI_Y, DensityMatrix

#: below this input-entanglement level one clone concurrence always vanishes
MU_THRESHOLD = 1.0 / 6.0


def _as_float_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _maybe_scalar(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def mu(alphas) -> float:
    """Entanglement parameter |a0*a3 - a1*a2| of a two-qubit pure state.

    Equals half the concurrence of the input; ranges over [0, 1/2] for
    normalized amplitudes, hitting 1/2 exactly on maximally entangled
    states.
    """
    a = np.asarray(alphas, dtype=complex)
    if a.size != 4:
        raise ValueError("expected 4 amplitudes for a two-qubit state")
    if abs(np.linalg.norm(a) - 1.0) > 1e-9:
        raise ValueError("input amplitudes are not normalized")
    return float(abs(a[0] * a[3] - a[1] * a[2]))


def _binary_entropy(lam: np.ndarray) -> np.ndarray:
    out = np.zeros_like(lam)
    for part in (lam, 1.0 - lam):
        inner = part > 1e-300
        out = out - np.where(inner, part * np.log2(np.where(inner, part, 1.0)), 0.0)
    return out


def eof_from_concurrence(x) -> float:
    """Entanglement of formation (ebits) of a two-qubit state of concurrence x.

    The binary entropy of (1 + sqrt(1 - x^2))/2; monotonically increasing
    from 0 at x=0 to 1 at x=1.  Accepts scalars or arrays; values within
    1e-12 outside [0, 1] are clamped, anything further raises.
    """
    arr, scalar = _as_float_array(x)
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise ValueError("concurrence outside [0, 1]")
    arr = np.clip(arr, 0.0, 1.0)
    lam = (1.0 + np.sqrt(1.0 - arr**2)) / 2.0
    return _maybe_scalar(_binary_entropy(lam), scalar)


def input_entanglement(alphas) -> float:
    """EoF of the pure two-qubit input: eof_from_concurrence(2*mu)."""
    return eof_from_concurrence(min(2.0 * mu(alphas), 1.0))


def clone_concurrence(mu_value, fidelity) -> float:
    """Closed-form clone concurrence max{0, (8F/3 - 2/3)*mu - 2(1-F)/3}.

    `fidelity` is the clone's own fidelity (F_B or F_C); the expression
    is the same for either side.  Vectorized over mu and/or fidelity.
    """
    mu_arr, mu_scalar = _as_float_array(mu_value)
    f_arr, f_scalar = _as_float_array(fidelity)
    if np.any(mu_arr < -1e-12) or np.any(mu_arr > 0.5 + 1e-12):
        raise ValueError("mu outside [0, 1/2]")
    if np.any(f_arr < -1e-12) or np.any(f_arr > 1.0 + 1e-12):
        raise ValueError("fidelity outside [0, 1]")
    value = (8.0 * f_arr / 3.0 - 2.0 / 3.0) * mu_arr - 2.0 / 3.0 * (1.0 - f_arr)
    return _maybe_scalar(np.maximum(0.0, value), mu_scalar and f_scalar)


def wootters_concurrence(rho) -> float:
    """Concurrence of a two-qubit density matrix from the spin-flip spectrum.

    Eigenvalues lam_i of rho (sy (x) sy) rho* (sy (x) sy), decreasingly
    ordered: max{0, sqrt(lam_0) - sqrt(lam_1) - sqrt(lam_2) - sqrt(lam_3)}.
    Conjugation is taken in the computational basis.
    """
    if isinstance(rho, DensityMatrix):
        if rho.num_qubits != 2:
            raise ValueError("concurrence is defined for two-qubit states")
        mat = rho.entries
    else:
        mat = np.asarray(rho, dtype=complex)
        if mat.shape != (4, 4):
            raise ValueError("expected a 4x4 density matrix")
        if not np.allclose(mat, mat.conj().T, atol=1e-9, rtol=0):
            raise ValueError("density matrix is not Hermitian")
    flip = np.kron(PAULI_Y, PAULI_Y)
    spectrum = np.linalg.eigvals(mat @ flip @ mat.conj() @ flip)
    spectrum = np.real(spectrum)
    if spectrum.min() < -1e-10:
        raise ValueError(f"spin-flip spectrum has eigenvalue {spectrum.min():.3e}")
    roots = np.sqrt(np.sort(np.maximum(spectrum, 0.0))[::-1])
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def _fidelities_d4(p):
    return fidelity_curve(p, 4)


def delta(mu_value, p) -> float:
    """Input EoF minus both clones' EoF at asymmetry p (two-qubit clones).

    delta = H(2 mu) - H(C_B(mu, p)) - H(C_C(mu, p)); nonnegative
    everywhere on [0, 1/2] x [0, 1].  Vectorized over mu and/or p.
    """
    mu_arr, mu_scalar = _as_float_array(mu_value)
    p_arr, p_scalar = _as_float_array(p)
    if np.any(p_arr < -1e-12) or np.any(p_arr > 1.0 + 1e-12):
        raise ValueError("p outside [0, 1]")
    f_b, f_c = _fidelities_d4(np.clip(p_arr, 0.0, 1.0))
    value = (
        eof_from_concurrence(np.minimum(2.0 * mu_arr, 1.0))
        - eof_from_concurrence(clone_concurrence(mu_arr, f_b))
        - eof_from_concurrence(clone_concurrence(mu_arr, f_c))
    )
    return _maybe_scalar(np.asarray(value), mu_scalar and p_scalar)


def physical_region(mu_value: float) -> tuple[float, float]:
    """The open p-interval on which both clone concurrences are positive.

    Defined for mu strictly inside (1/6, 1/2): endpoints
    (1 + mu - sqrt(4 mu + mu^2)) / (1 - 2 mu) and
    (-3 mu + sqrt(4 mu + mu^2)) / (1 - 2 mu), which sum to 1 exactly.
    C_B vanishes at the lower endpoint and C_C at the upper; for
    mu <= 1/6 the interval is empty and at mu = 1/2 the expression is
    singular.
    """
    if not MU_THRESHOLD < mu_value < 0.5:
        raise ValueError(f"mu={mu_value} outside the open interval (1/6, 1/2)")
    root = math.sqrt(4.0 * mu_value + mu_value**2)
    denom = 1.0 - 2.0 * mu_value
    return (1.0 + mu_value - root) / denom, (-3.0 * mu_value + root) / denom


@dataclass(frozen=True)
class SweepGrid:
    """Grid resolution for the delta-nonnegativity sweep."""

    mu_step: float = 0.005
    p_step: float = 0.001
    mu_min: float = 0.0
    mu_max: float = 0.5
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.mu_step <= 0 or self.p_step <= 0:
            raise ValueError("grid steps must be positive")
        if not 0.0 <= self.mu_min <= self.mu_max <= 0.5:
            raise ValueError("mu range must satisfy 0 <= mu_min <= mu_max <= 0.5")

    def mu_values(self) -> np.ndarray:
        count = int(round((self.mu_max - self.mu_min) / self.mu_step)) + 1
        return np.linspace(self.mu_min, self.mu_max, count)

    def p_values(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, int(round(1.0 / self.p_step)) + 1)


@dataclass(frozen=True)
class MuAnalysis:
    """Per-mu certification results inside the (1/6, 1/2) window."""

    mu: float
    p_lo: float
    p_hi: float
    monotone_violations: int
    inflection_p: float | None  # None: curvature stayed positive through 2/3
    argmin_p: float
    argmin_on_boundary: bool


@dataclass(frozen=True)
class DeltaSweepReport:
    grid: SweepGrid
    mu_values: np.ndarray
    p_values: np.ndarray
    fidelity_b: np.ndarray  # (P,)
    fidelity_c: np.ndarray  # (P,)
    concurrence_b: np.ndarray  # (M, P)
    concurrence_c: np.ndarray  # (M, P)
    delta_values: np.ndarray  # (M, P)
    min_delta: float
    argmin_mu: float
    argmin_p: float
    violations: int
    analyses: tuple = field(default_factory=tuple)

    @property
    def monotone_ok(self) -> bool:
        return all(a.monotone_violations == 0 for a in self.analyses)

    @property
    def inflection_ok(self) -> bool:
        return all(
            a.inflection_p is None or a.inflection_p > 0.56 for a in self.analyses
        )

    @property
    def boundary_ok(self) -> bool:
        return all(a.argmin_on_boundary for a in self.analyses)

    @property
    def min_inflection_p(self) -> float | None:
        estimates = [a.inflection_p for a in self.analyses if a.inflection_p is not None]
        return min(estimates) if estimates else None

    def summary(self) -> dict:
        return {
            "rows": int(self.delta_values.size),
            "min_delta": self.min_delta,
            "argmin": {"mu": self.argmin_mu, "p": self.argmin_p},
            "violations": self.violations,
            "monotone_ok": self.monotone_ok,
            "inflection_ok": self.inflection_ok,
            "min_inflection_p": self.min_inflection_p,
            "argmin_on_region_boundary": self.boundary_ok,
        }


def _sum_eof(mu_value: float, p: np.ndarray) -> np.ndarray:
    f_b, f_c = _fidelities_d4(p)
    return eof_from_concurrence(
        clone_concurrence(mu_value, f_b)
    ) + eof_from_concurrence(clone_concurrence(mu_value, f_c))


def _eof_b(mu_value: float, p: np.ndarray) -> np.ndarray:
    f_b, _ = _fidelities_d4(p)
    return eof_from_concurrence(clone_concurrence(mu_value, f_b))


def _analyze_mu(mu_value: float, grid: SweepGrid) -> MuAnalysis:
    p_lo, p_hi = physical_region(mu_value)
    tol = grid.tolerance

    # the combined clone EoF must be nondecreasing from p = 1/2 to the
    # upper region boundary
    ps = np.arange(0.5, p_hi, grid.p_step)
    ps = np.append(ps, p_hi)
    mono_violations = int(np.sum(np.diff(_sum_eof(mu_value, ps)) < -tol))

    # inflection of the B-clone EoF, scanned where the concurrence is
    # safely positive up to 2/3 (curvature is +inf-like at the crossing
    # and decreases with p); central second difference, h = 1e-4
    h = 1e-4
    scan = np.arange(p_lo + 1e-3, 2.0 / 3.0 + 1e-12, 1e-3)
    second = (
        _eof_b(mu_value, scan + h)
        - 2.0 * _eof_b(mu_value, scan)
        + _eof_b(mu_value, scan - h)
    ) / h**2
    negative = np.nonzero(second < 0)[0]
    if negative.size == 0:
        inflection = None
    else:
        i = int(negative[0])
        if i == 0:
            inflection = float(scan[0])
        else:
            frac = second[i - 1] / (second[i - 1] - second[i])
            inflection = float(scan[i - 1] + frac * (scan[i] - scan[i - 1]))

    # within the physical region the gap bottoms out where a concurrence
    # vanishes, i.e. at the region boundary
    region = np.arange(p_lo, p_hi, grid.p_step)
    region = np.append(region, p_hi)
    values = delta(mu_value, region)
    argmin_p = float(region[int(np.argmin(values))])
    on_boundary = (
        argmin_p <= p_lo + grid.p_step + 1e-12 or argmin_p >= p_hi - grid.p_step - 1e-12
    )
    return MuAnalysis(
        mu=float(mu_value),
        p_lo=p_lo,
        p_hi=p_hi,
        monotone_violations=mono_violations,
        inflection_p=inflection,
        argmin_p=argmin_p,
        argmin_on_boundary=on_boundary,
    )


def _sweep_chunk(args) -> tuple:
    mu_chunk, p_values = args
    f_b, f_c = _fidelities_d4(p_values)
    c_b = clone_concurrence(mu_chunk[:, None], f_b[None, :])
    c_c = clone_concurrence(mu_chunk[:, None], f_c[None, :])
    d = (
        eof_from_concurrence(np.minimum(2.0 * mu_chunk, 1.0))[:, None]
        - eof_from_concurrence(c_b)
        - eof_from_concurrence(c_c)
    )
    return c_b, c_c, d


def sweep_delta(grid: SweepGrid | None = None, jobs: int = 1) -> DeltaSweepReport:
    """Dense delta >= 0 certification over the (mu, p) rectangle.

    Evaluates the gap on the full grid, then for every mu inside
    (1/6, 1/2) checks (a) the combined clone EoF is nondecreasing on
    [1/2, p_hi], (b) the inflection point of the B-clone EoF sits above
    0.56, and (c) the gap's minimizer over the physical region lies on
    the region boundary.  Grid points are independent; `jobs` > 1 fans
    the heavy rectangle out to a process pool with deterministic
    ordering.
    """
    grid = grid or SweepGrid()
    mu_values = grid.mu_values()
    p_values = grid.p_values()

    if jobs > 1:
        chunks = [(c, p_values) for c in np.array_split(mu_values, jobs) if c.size]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, chunks))
        c_b = np.concatenate([part[0] for part in parts])
        c_c = np.concatenate([part[1] for part in parts])
        delta_grid = np.concatenate([part[2] for part in parts])
    else:
        c_b, c_c, delta_grid = _sweep_chunk((mu_values, p_values))

    flat = int(np.argmin(delta_grid))
    mi, pi = np.unravel_index(flat, delta_grid.shape)
    f_b, f_c = _fidelities_d4(p_values)
    analyses = tuple(
        _analyze_mu(float(m), grid)
        for m in mu_values
        if MU_THRESHOLD + 1e-9 < m < 0.5 - 1e-9
    )
    return DeltaSweepReport(
        grid=grid,
        mu_values=mu_values,
        p_values=p_values,
        fidelity_b=f_b,
        fidelity_c=f_c,
        concurrence_b=c_b,
        concurrence_c=c_c,
        delta_values=delta_grid,
        min_delta=float(delta_grid.min()),
        argmin_mu=float(mu_values[mi]),
        argmin_p=float(p_values[pi]),
        violations=int(np.sum(delta_grid < -grid.tolerance)),
        analyses=analyses,
    )
