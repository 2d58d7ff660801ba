"""
Independent checks of the elimination engine.

Two routes are provided: covariance calculus (propagation and conditioning on
homodyne p outcomes) and Monte-Carlo regression of sampled quadrature records.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from mbqc.engine import SqueezingSpec, eliminate
from symplectic.core import ModeUnitary, QuadSymplectic, omega, quad_from_unitary_matrix
from utils.errors import DimensionMismatch, InsufficientSamples, ValidationError

UNCERTAINTY_TOL = 1e-8
MIN_SAMPLES = 10_000
WIDE_VARIANCE = 1e10
EXACT_AGREEMENT_TOL = 1e-9
DEFAULT_SIGMA = 3.0


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean and covariance of (x_1..x_N, p_1..p_N); vacuum covariance is the identity."""
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise DimensionMismatch(f"covariance must be square with even dimension, got {cov.shape}")
        if mean.size != cov.shape[0]:
            raise DimensionMismatch(f"mean has {mean.size} entries, covariance {cov.shape[0]}")
        scale = max(1.0, np.linalg.norm(cov))
        if np.linalg.norm(cov - cov.T) > UNCERTAINTY_TOL * scale:
            raise ValidationError("covariance matrix is not symmetric")
        lowest = np.linalg.eigvalsh(cov + 1j * omega(cov.shape[0] // 2)).min()
        if lowest < -UNCERTAINTY_TOL * scale:
            raise ValidationError(f"covariance violates the uncertainty relation (eigenvalue {lowest:.3e})")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", (cov + cov.T) / 2)

    @property
    def n_modes(self):
        return self.cov.shape[0] // 2

    @classmethod
    def vacuum(cls, n_modes):
        return cls(np.zeros(2 * n_modes), np.eye(2 * n_modes))

    @classmethod
    def squeezed_vacuum(cls, p_variances):
        """Product of pure states squeezed in p (x variance 1/v, p variance v)."""
        p_variances = np.asarray(p_variances, dtype=float)
        return cls(np.zeros(2 * p_variances.size), np.diag(np.concatenate([1.0 / p_variances, p_variances])))


def propagate(state, S):
    """Heisenberg propagation: mean -> S mean, cov -> S cov S^T."""
    matrix = S.matrix if isinstance(S, QuadSymplectic) else np.asarray(S, dtype=float)
    if matrix.shape != state.cov.shape:
        raise DimensionMismatch(f"symplectic {matrix.shape} does not act on state {state.cov.shape}")
    return GaussianState(matrix @ state.mean, matrix @ state.cov @ matrix.T)


def _quadrature_indices(modes, n_modes):
    modes = list(modes)
    return modes + [n_modes + mode for mode in modes]


def condition_on_p_measurements(state, measured_modes, outcomes=None):
    """
    State of the unmeasured modes after homodyne p detection of `measured_modes`.

    Args:
        state: GaussianState
        measured_modes: 0-based modes whose p quadrature is measured
        outcomes: Measured p values (defaults to the prior mean, i.e. zero shift)

    Returns:
        GaussianState of the remaining modes
    """
    N = state.n_modes
    measured = sorted(int(mode) for mode in measured_modes)
    if len(set(measured)) != len(measured) or any(mode < 0 or mode >= N for mode in measured):
        raise DimensionMismatch(f"measured modes {measured_modes} invalid for {N} modes")
    remaining = [mode for mode in range(N) if mode not in measured]
    keep = _quadrature_indices(remaining, N)
    observed = [N + mode for mode in measured]

    cross = state.cov[np.ix_(keep, observed)]
    gain = cross @ np.linalg.pinv(state.cov[np.ix_(observed, observed)])
    cov = state.cov[np.ix_(keep, keep)] - gain @ cross.T
    mean = state.mean[keep]
    if outcomes is not None:
        mean = mean + gain @ (np.asarray(outcomes, dtype=float) - state.mean[observed])
    return GaussianState(mean, cov)


def _slot_layout(N, input_positions):
    inputs = [int(position) for position in input_positions]
    ancillas = [slot for slot in range(N) if slot not in inputs]
    return inputs, ancillas


def ideal_measurement_covariance(U_total, n, m, input_positions, squeezing, input_cov=None):
    """
    Output covariance conditioned on the measured p quadratures, with the
    anti-squeezed ancilla quadratures given an uninformative (flat) prior.

    Works in precision form: the IN precision has zero weight on x_s, is pushed
    through the passive map, conditioned by dropping the measured p rows and
    columns, and the unmeasured x of the measured modes is marginalized out.

    Returns:
        2n x 2n covariance of (x_out, p_out)
    """
    matrix = U_total.matrix if isinstance(U_total, ModeUnitary) else np.asarray(U_total, dtype=complex)
    N = matrix.shape[0]
    if N != n + m or squeezing.m != m:
        raise DimensionMismatch(f"{N} modes, n={n}, m={m}, {squeezing.m} squeezing entries")
    inputs, ancillas = _slot_layout(N, input_positions)
    if input_cov is None:
        input_cov = np.eye(2 * n)

    precision_in = np.zeros((2 * N, 2 * N))
    input_index = _quadrature_indices(inputs, N)
    precision_in[np.ix_(input_index, input_index)] = np.linalg.inv(input_cov)
    for slot, variance in zip(ancillas, squeezing.variances):
        precision_in[N + slot, N + slot] = 1.0 / variance

    S = quad_from_unitary_matrix(matrix)
    S_inverse = np.linalg.inv(S)
    precision_out = S_inverse.T @ precision_in @ S_inverse

    outputs = _quadrature_indices(range(m, N), N)
    hidden = list(range(m))
    block_oo = precision_out[np.ix_(outputs, outputs)]
    block_oh = precision_out[np.ix_(outputs, hidden)]
    block_hh = precision_out[np.ix_(hidden, hidden)]
    marginal = block_oo - block_oh @ np.linalg.pinv(block_hh) @ block_oh.T
    return np.linalg.inv(marginal)


def elimination_cross_check(U_total, n, m, input_positions, squeezing, input_cov=None):
    """
    Compare the elimination prediction of the conditional output covariance with
    the precision-form conditioning.

    Returns:
        Dictionary with 'predicted', 'conditioned' and 'max_deviation'
    """
    result = eliminate(U_total, n, m, input_positions, squeezing)
    if input_cov is None:
        input_cov = np.eye(2 * n)
    transfer = result.symplectic_block()
    noise = np.vstack([result.c_x, result.c_p])
    predicted = transfer @ input_cov @ transfer.T + (noise * squeezing.variances) @ noise.T
    conditioned = ideal_measurement_covariance(U_total, n, m, input_positions, squeezing, input_cov)
    return {
        "predicted": predicted,
        "conditioned": conditioned,
        "max_deviation": float(np.max(np.abs(predicted - conditioned))),
    }


@dataclass(frozen=True, eq=False)
class McEstimate:
    """Regression estimates and their standard errors, keyed like MbqcResult fields."""
    values: dict
    standard_errors: dict
    samples: int

    def element_z_scores(self, result):
        """
        |estimate - analytic| / standard error for every compared element.

        Deviations within EXACT_AGREEMENT_TOL score zero.
        """
        scores = {}
        for name, estimate in self.values.items():
            analytic = np.asarray(getattr(result, name), dtype=float)
            error = self.standard_errors[name]
            deviation = np.abs(estimate - analytic)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = np.where(error > 0, deviation / error, np.inf)
            scores[name] = np.where(deviation <= EXACT_AGREEMENT_TOL, 0.0, z)
        return scores

    def z_scores(self, result):
        """Largest element z-score per field."""
        return {
            name: float(np.max(z)) if z.size else 0.0
            for name, z in self.element_z_scores(result).items()
        }

    def compared_elements(self):
        return int(sum(np.count_nonzero(error > 0) for error in self.standard_errors.values()))

    def family_limit(self, sigma=DEFAULT_SIGMA):
        """
        Per-element z limit giving the whole estimate the two-sided false-alarm
        rate of a single `sigma` test (Bonferroni over the compared elements).
        """
        count = max(self.compared_elements(), 1)
        return float(norm.isf(norm.sf(sigma) / count))

    def agrees_with(self, result, sigma=DEFAULT_SIGMA):
        return max(self.z_scores(result).values()) <= self.family_limit(sigma)

    def to_dict(self):
        return {
            "samples": self.samples,
            "values": {name: value.tolist() for name, value in self.values.items()},
            "standard_errors": {name: value.tolist() for name, value in self.standard_errors.items()},
        }


def _chunk_records(S, N, n, inputs, ancillas, variances, size, seed, chunk):
    """Regressors (x_in, p_in, p_meas) and responses (x_out, p_out) of one sample chunk."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
    quadratures = np.zeros((size, 2 * N))
    quadratures[:, inputs] = rng.standard_normal((size, n))
    quadratures[:, [N + slot for slot in inputs]] = rng.standard_normal((size, n))
    quadratures[:, ancillas] = rng.standard_normal((size, len(ancillas))) * np.sqrt(WIDE_VARIANCE / variances)
    quadratures[:, [N + slot for slot in ancillas]] = rng.standard_normal((size, len(ancillas))) * np.sqrt(variances)
    out = quadratures @ S.T

    m = N - n
    regressors = np.hstack([
        quadratures[:, inputs],
        quadratures[:, [N + slot for slot in inputs]],
        out[:, N:N + m],
    ])
    responses = np.hstack([out[:, m:N], out[:, N + m:]])
    return regressors, responses


def _normal_equations(job):
    regressors, responses = _chunk_records(*job)
    return regressors.T @ regressors, regressors.T @ responses


def _residual_squares(job, beta):
    regressors, responses = _chunk_records(*job)
    return np.sum((responses - regressors @ beta) ** 2, axis=0)


def mc_estimate_unitary(U_total, n, m, input_positions, squeezing, samples, seed,
                        chunk_size=20_000, threads=1):
    """
    Monte-Carlo regression estimate of the elimination coefficients.

    Inputs are unit-variance test signals, p-squeezed ancillas carry their variances and
    the anti-squeezed quadratures a very wide variance, so the regression of
    outputs on (x_in, p_in, p_meas) converges to (A, B, l) and (C, D, l) with the
    residual variances converging to the excess noise.

    Chunks are regenerated from their seeds for a second pass over the residuals.

    Returns:
        McEstimate
    """
    if samples < MIN_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_SAMPLES} samples, got {samples}")
    matrix = U_total.matrix if isinstance(U_total, ModeUnitary) else np.asarray(U_total, dtype=complex)
    N = matrix.shape[0]
    if N != n + m or squeezing.m != m:
        raise DimensionMismatch(f"{N} modes, n={n}, m={m}, {squeezing.m} squeezing entries")
    inputs, ancillas = _slot_layout(N, input_positions)
    S = quad_from_unitary_matrix(matrix)
    variances = np.asarray(squeezing.variances, dtype=float)

    sizes = [chunk_size] * (samples // chunk_size)
    if samples % chunk_size:
        sizes.append(samples % chunk_size)
    jobs = [(S, N, n, inputs, ancillas, variances, size, seed, chunk) for chunk, size in enumerate(sizes)]
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        run = executor.map if executor is not None else map
        parts = list(run(_normal_equations, jobs))
        xtx = sum(part[0] for part in parts)
        xty = sum(part[1] for part in parts)

        # equilibrate: the anti-squeezed columns are many orders of magnitude wider than the rest
        scale = np.sqrt(np.diag(xtx))
        scaled_inverse = np.linalg.inv(xtx / np.outer(scale, scale))
        beta = (scaled_inverse @ (xty / scale[:, None])) / scale[:, None]
        inverse_diag = np.diag(scaled_inverse) / scale ** 2

        residual_sum = sum(run(lambda job: _residual_squares(job, beta), jobs))
    finally:
        if executor is not None:
            executor.shutdown()

    k = 2 * n + m
    dof = samples - k
    residual = residual_sum / dof
    beta_se = np.sqrt(np.outer(inverse_diag, residual))
    residual_se = residual * math.sqrt(2.0 / dof)

    def pick(table, rows, cols):
        return table[rows, cols].T

    x_cols, p_cols = slice(0, n), slice(n, 2 * n)
    x_rows, p_rows, meas_rows = slice(0, n), slice(n, 2 * n), slice(2 * n, k)
    layout = {
        "A": (x_rows, x_cols), "B": (p_rows, x_cols), "l_x": (meas_rows, x_cols),
        "C": (x_rows, p_cols), "D": (p_rows, p_cols), "l_p": (meas_rows, p_cols),
    }
    values = {name: pick(beta, *where) for name, where in layout.items()}
    errors = {name: pick(beta_se, *where) for name, where in layout.items()}
    values["noise_var_x"], values["noise_var_p"] = residual[:n], residual[n:]
    errors["noise_var_x"], errors["noise_var_p"] = residual_se[:n], residual_se[n:]
    return McEstimate(values=values, standard_errors=errors, samples=samples)


def mc_estimate(problem, angles, samples, seed, chunk_size=20_000, threads=1):
    """Monte-Carlo regression for a synthesis problem at the given flat angle vector."""
    return mc_estimate_unitary(
        problem.total_unitary(angles), problem.n, problem.m, problem.input_positions,
        problem.squeezing, samples, seed, chunk_size=chunk_size, threads=threads,
    )


def nullifier_covariance_check(U_total, squeezing, graph):
    """Nullifier variances obtained by propagating the squeezed vacuum covariance."""
    matrix = U_total.matrix if isinstance(U_total, ModeUnitary) else np.asarray(U_total, dtype=complex)
    if not isinstance(squeezing, SqueezingSpec):
        squeezing = SqueezingSpec(squeezing)
    state = propagate(GaussianState.squeezed_vacuum(squeezing.variances), quad_from_unitary_matrix(matrix))
    m = graph.m
    forms = np.hstack([-graph.V, np.eye(m)])
    return np.einsum("ij,jk,ik->i", forms, state.cov, forms)

