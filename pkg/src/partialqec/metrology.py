"""Quantum Fisher information of the probe under i.i.d. Pauli noise.

Three independent routes are provided for the perpendicular-noise QFI
(closed form, pairwise-overlap counting, exhaustive enumeration) and two
for the parallel-noise QFI (Monte Carlo decoding and probability-weighted
exhaustive enumeration).  All QFI values follow the two-outcome contrast
form F = 4 D^2 N^2 with D the readout parity contrast and N the number of
imprinter checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .codes import CssCode
from .decoder import DistanceTable, decode_batch
from .errors import (
    InsufficientData,
    DegenerateFit,
    InvalidParams,
    NoKeptSamples,
    OutOfRange,
    SingularPoint,
    TooLarge,
    UnsupportedFamily,
)
from .noise import (
    PauliChannel,
    RngSeed,
    dephasing,
    rng_for_shard,
    sample_error_batch,
)

_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True)
class QfiEstimate:
    """QFI estimate with its parity-contrast bookkeeping.

    ``value = 4 * contrast_D**2 * n_z**2``; ``n_kept + n_logical ==
    n_samples``.  For exhaustive runs the sample fields count enumerated
    patterns, the contrast is probability-weighted, and ``exact`` is True.
    """

    value: float
    contrast_D: float
    stderr: float
    n_samples: int
    n_kept: int
    n_logical: int
    n_z: int
    contrast_stderr: float = 0.0
    exact: bool = False


ANALYTIC_FAMILIES = (
    "ghz", "toric_square", "toric_honeycomb", "bacon_shor", "bacon_shor_weight2",
)


def fqx_analytic(family: str, params: dict, p: float) -> float:
    """Closed-form QFI under perpendicular noise of strength p.

    The toric forms assume every pair of imprinter checks shares at most
    one qubit, which holds for lx, ly >= 3; smaller lattices fall back to
    the same expression with a warning (use fqx_pair_oracle for them).
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"p={p} outside [0, 1]")
    x = 1.0 - 2.0 * p
    if family == "ghz":
        n = params["N"]
        return 4.0 * x**2 * n**2 + 16.0 * p * (1.0 - p) * n
    if family == "toric_square":
        n_z = params.get("n_z", params.get("lx", 0) * params.get("ly", 0))
        _warn_degenerate(params)
        return 4.0 * x**8 * n_z**2 + 4.0 * (1.0 + 4.0 * x**6 - 5.0 * x**8) * n_z
    if family == "toric_honeycomb":
        n_z = params.get("n_z", params.get("lx", 0) * params.get("ly", 0))
        _warn_degenerate(params)
        return 4.0 * x**12 * n_z**2 + 4.0 * (1.0 + 6.0 * x**10 - 7.0 * x**12) * n_z
    if family == "bacon_shor":
        m, n = params["m"], params["n"]
        t2n, t4n = _pow_even(x, 2 * n), _pow_even(x, 4 * n)
        return 4.0 * t4n * m**2 + 4.0 * (1.0 + 2.0 * t2n - 3.0 * t4n) * m
    if family == "bacon_shor_weight2":
        n = params.get("N", params.get("m", 0) * params.get("n", 0))
        return 4.0 * x**4 * n**2 + 4.0 * (1.0 + 2.0 * x**2 - 3.0 * x**4) * n
    raise UnsupportedFamily(f"no closed form for family {family!r}")


def _warn_degenerate(params: dict) -> None:
    lx, ly = params.get("lx"), params.get("ly")
    if lx is not None and ly is not None and (lx < 3 or ly < 3):
        warnings.warn(
            "closed form assumes lx, ly >= 3; narrow tori share double edges "
            "and need the pair oracle", stacklevel=3)


def _pow_even(base: float, exponent: int) -> float:
    # stable |base|**exponent for even exponents, without overflow/underflow
    if base == 0.0:
        return 0.0
    return math.exp(exponent * math.log(abs(base)))


def fqx_pair_oracle(code: CssCode, p: float) -> float:
    """Exact perpendicular-noise QFI from pairwise support overlaps.

    Each ordered pair (j, k) of imprinter checks contributes
    (1-2p)**w_jk with w_jk the weight of the symmetric difference of the
    two supports; exact for every geometry including narrow stripes.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"p={p} outside [0, 1]")
    sup = code.imprinter_matrix.astype(np.int64)
    n_z = sup.shape[0]
    w = sup.sum(axis=1)
    inter = sup @ sup.T
    sym_diff = w[:, None] + w[None, :] - 2 * inter
    x = 1.0 - 2.0 * p
    # symmetric differences of equal-weight supports are even, so integer
    # powers stay real even past p = 0.5
    terms = np.power(x, sym_diff)
    off_diag = terms.sum() - np.trace(terms)
    return 4.0 * (n_z + off_diag)


def _enumerate_bits(n: int, chunk: int = _ENUM_CHUNK):
    total = 1 << n
    cols = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        yield ((idx[:, None] >> cols) & 1).astype(np.uint8)


def _pattern_log_probs(weights: np.ndarray, n: int, p: float) -> np.ndarray:
    if p == 0.0:
        out = np.where(weights == 0, 1.0, 0.0)
        return out
    if p == 1.0:
        return np.where(weights == n, 1.0, 0.0)
    return np.exp(weights * math.log(p) + (n - weights) * math.log1p(-p))


def fqx_enumeration_oracle(code: CssCode, p: float, max_qubits: int = 20) -> float:
    """Exhaustive perpendicular-noise QFI over all single-type error supports.

    Each support e is weighted by its i.i.d. probability; it flips the sign
    of every imprinter check it overlaps oddly, and the squared signed sum
    of checks gives the second moment (the mean vanishes by symmetry of the
    two-branch probe state).
    """
    n = code.n_qubits
    if n > max_qubits:
        raise TooLarge(f"{n} qubits exceeds the {max_qubits}-qubit enumeration cap")
    sup = code.imprinter_matrix
    n_z = sup.shape[0]
    acc = 0.0
    for block in _enumerate_bits(n):
        parities = (block @ sup.T) & 1
        signed_sum = n_z - 2 * parities.sum(axis=1, dtype=np.int64)
        probs = _pattern_log_probs(block.sum(axis=1, dtype=np.int64), n, p)
        acc += float(np.dot(probs, signed_sum.astype(np.float64) ** 2))
    return 4.0 * acc


def _relevant_batch(code: CssCode, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    return z if code.imprinter_sector == "Z" else x


def _split_samples(n_samples: int, shard_count: int) -> list[int]:
    base, extra = divmod(n_samples, shard_count)
    return [base + (1 if s < extra else 0) for s in range(shard_count)]


def run_shard(code: CssCode, channel: PauliChannel, n_shard: int, sub_rng,
              table: DistanceTable, k_exact: int = 16) -> tuple[int, int, int]:
    """Sample, decode and tally one shard; returns (n_plus, n_minus, n_logical)."""
    if n_shard == 0:
        return 0, 0, 0
    x, z = sample_error_batch(channel, code.n_qubits, n_shard, sub_rng)
    signs, logical = decode_batch(code, _relevant_batch(code, x, z), table, k_exact)
    kept = ~logical
    n_plus = int(np.count_nonzero(kept & (signs > 0)))
    n_minus = int(np.count_nonzero(kept & (signs < 0)))
    return n_plus, n_minus, int(np.count_nonzero(logical))


def tallies_to_estimate(n_plus: int, n_minus: int, n_logical: int,
                        n_z: int, exact: bool = False) -> QfiEstimate:
    n_kept = n_plus + n_minus
    if n_kept == 0:
        raise NoKeptSamples("every sample carried a logical residual")
    contrast = (n_plus - n_minus) / n_kept
    value = 4.0 * contrast**2 * n_z**2
    se_d = math.sqrt(max(0.0, 1.0 - contrast**2) / n_kept) if not exact else 0.0
    se_f = 8.0 * abs(contrast) * n_z**2 * se_d
    return QfiEstimate(value, contrast, se_f, n_kept + n_logical, n_kept,
                       n_logical, n_z, contrast_stderr=se_d, exact=exact)


def fqz_monte_carlo(code: CssCode, channel: PauliChannel, n_samples: int,
                    seed: RngSeed | int, table: DistanceTable,
                    shard_count: int | None = None, k_exact: int = 16,
                    stderr_method: str = "delta",
                    bootstrap_reps: int = 200) -> QfiEstimate:
    """Parallel-noise QFI by sampling, decoding and discarding logicals.

    Deterministic for fixed (seed, shard_count): shard tallies are merged
    by integer addition, so worker scheduling cannot change the result.
    Plain runs use a pure dephasing channel; a general channel is accepted
    (only its component that anticommutes with the monitored checks enters
    the syndromes and the readout sign).
    """
    if isinstance(seed, RngSeed):
        master = seed.seed
        if shard_count is None:
            shard_count = seed.shard_count
    else:
        master = int(seed)
    shard_count = shard_count or 1
    if n_samples < 1 or shard_count < 1:
        raise InvalidParams("need n_samples >= 1 and shard_count >= 1")
    n_plus = n_minus = n_logical = 0
    for s, n_shard in enumerate(_split_samples(n_samples, shard_count)):
        dp, dm, dl = run_shard(code, channel, n_shard,
                               rng_for_shard(master, s), table, k_exact)
        n_plus += dp
        n_minus += dm
        n_logical += dl
    est = tallies_to_estimate(n_plus, n_minus, n_logical, code.n_imprinters)
    if stderr_method == "bootstrap":
        est = _bootstrap_stderr(est, master, shard_count, bootstrap_reps)
    elif stderr_method != "delta":
        raise InvalidParams(f"unknown stderr_method {stderr_method!r}")
    return est


def _bootstrap_stderr(est: QfiEstimate, master: int, shard_count: int,
                      reps: int) -> QfiEstimate:
    rng = rng_for_shard(master, shard_count)  # one stream past the shards
    plus = rng.binomial(est.n_kept, max(0.0, (1.0 + est.contrast_D) / 2.0), size=reps)
    d = 2.0 * plus / est.n_kept - 1.0
    f = 4.0 * d**2 * est.n_z**2
    return QfiEstimate(est.value, est.contrast_D, float(np.std(f)),
                       est.n_samples, est.n_kept, est.n_logical, est.n_z,
                       contrast_stderr=float(np.std(d)), exact=False)


def fqz_exhaustive(code: CssCode, p: float, table: DistanceTable,
                   k_exact: int = 16, max_qubits: int = 20) -> QfiEstimate:
    """Exact parallel-noise QFI by probability-weighted enumeration.

    Every parallel-error support is decoded through the same matching
    pipeline as the Monte Carlo path; contrasts are weighted by exact
    pattern probabilities and conditioned on the kept (non-logical) set.
    """
    n = code.n_qubits
    if n > max_qubits:
        raise TooLarge(f"{n} qubits exceeds the {max_qubits}-qubit enumeration cap")
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"p={p} outside [0, 1]")
    p_plus = p_minus = p_logical = 0.0
    kept_patterns = logical_patterns = 0
    for block in _enumerate_bits(n):
        probs = _pattern_log_probs(block.sum(axis=1, dtype=np.int64), n, p)
        signs, logical = decode_batch(code, block, table, k_exact)
        kept = ~logical
        p_plus += float(probs[kept & (signs > 0)].sum())
        p_minus += float(probs[kept & (signs < 0)].sum())
        p_logical += float(probs[logical].sum())
        kept_patterns += int(np.count_nonzero(kept))
        logical_patterns += int(np.count_nonzero(logical))
    total_kept = p_plus + p_minus
    if total_kept == 0.0:
        raise NoKeptSamples("all probability mass fell on logical residuals")
    contrast = (p_plus - p_minus) / total_kept
    n_z = code.n_imprinters
    return QfiEstimate(4.0 * contrast**2 * n_z**2, contrast, 0.0,
                       kept_patterns + logical_patterns, kept_patterns,
                       logical_patterns, n_z, exact=True)


def fqz_model(c: float, delta: float, p: float, n_z: int) -> float:
    """Effective-dephasing model 4 (1 - 2 c p**delta)**(2 n_z) n_z**2."""
    p_eff = c * p**delta
    if p_eff > 0.5 + 1e-12:
        raise OutOfRange(f"c * p**delta = {p_eff} exceeds 0.5")
    return 4.0 * (1.0 - 2.0 * p_eff) ** (2 * n_z) * n_z**2


@dataclass(frozen=True)
class DeltaFit:
    c: float
    delta: float
    fit_window: tuple
    residual_norm: float
    sizes_used: tuple
    n_points: int


def fit_delta(series, window: tuple = (0.01, 0.1)) -> DeltaFit:
    """Suppression exponent from contrast data.

    Each (p, n_z, contrast) point is inverted to an effective per-check
    dephasing probability p_eff = (1 - contrast**(1/n_z)) / 2, and
    ln(p_eff) is fit linearly against ln(p) inside the window; the slope
    is the exponent and exp(intercept) the coefficient.
    """
    lo, hi = window
    lps, lpes, sizes = [], [], set()
    for p, n_z, d in series:
        if not (lo <= p <= hi) or p <= 0.0:
            continue
        if not 0.0 < d < 1.0:
            continue
        p_eff = (1.0 - d ** (1.0 / n_z)) / 2.0
        if p_eff <= 0.0:
            continue
        lps.append(math.log(p))
        lpes.append(math.log(p_eff))
        sizes.add(int(n_z))
    if len(set(lps)) < 3:
        raise InsufficientData(
            f"need at least 3 distinct usable p in window [{lo}, {hi}]")
    lp = np.array(lps)
    lpe = np.array(lpes)
    if np.ptp(lp) == 0.0:
        raise DegenerateFit("no spread in ln p")
    coeffs, resid, _rank, _sv, _rcond = np.polyfit(lp, lpe, 1, full=True)
    slope, intercept = coeffs
    residual_norm = math.sqrt(float(resid[0])) if len(resid) else 0.0
    if slope <= 0:
        raise DegenerateFit(f"fitted exponent {slope} is not positive")
    return DeltaFit(c=float(math.exp(intercept)), delta=float(slope),
                    fit_window=(lo, hi), residual_norm=residual_norm,
                    sizes_used=tuple(sorted(sizes)), n_points=len(lps))


@dataclass(frozen=True)
class PhaseParams:
    theta: float
    n_imprinters: int


def expectation_tx(contrast_d: float, n_z: int, theta: float) -> float:
    """Readout expectation D * cos(2 n_z theta) at imprinted phase theta."""
    if abs(contrast_d) > 1.0 + 1e-12:
        raise InvalidParams("contrast must lie in [-1, 1]")
    return contrast_d * math.cos(2.0 * n_z * theta)


def tx_derivative(contrast_d: float, n_z: int, theta: float) -> float:
    return -2.0 * n_z * contrast_d * math.sin(2.0 * n_z * theta)


def propagated_error(contrast_d: float, n_z: int, theta: float) -> float:
    """Inverse phase variance from the readout signal slope.

    The variance in the denominator is the per-parity-branch readout
    variance 1 - cos(2 n_z theta)**2 (identical for both branches; the
    branch weights enter through the contrast in the derivative), so the
    result equals 4 D^2 n_z^2 wherever the signal slope is nonzero.
    """
    deriv = tx_derivative(contrast_d, n_z, theta)
    branch_var = 1.0 - math.cos(2.0 * n_z * theta) ** 2
    if branch_var == 0.0:
        raise SingularPoint(f"readout variance vanishes at theta={theta}")
    return deriv**2 / branch_var


@dataclass(frozen=True)
class ChannelComparison:
    """Contrast under a full Pauli channel vs its dephasing reduction."""

    contrast_pauli: float
    contrast_dephasing: float
    z_score: float
    p_equivalent: float
    mode: str
    stderr_pauli: float = 0.0
    stderr_dephasing: float = 0.0
    estimate_pauli: QfiEstimate | None = None
    estimate_dephasing: QfiEstimate | None = None


def compare_pauli_dephasing(code: CssCode, channel: PauliChannel,
                            n_samples: int, seed: RngSeed | int,
                            table: DistanceTable, exhaustive: bool = False,
                            shard_count: int | None = None,
                            k_exact: int = 16) -> ChannelComparison:
    """Contrast under (p_x, p_y, p_z) against dephasing with p = p_y + p_z.

    The X component of a sampled pattern neither triggers the monitored
    checks nor flips the readout, so the two contrasts agree: exactly in
    exhaustive mode (all Pauli patterns enumerated with exact weights, at
    most 12 qubits), and within Monte Carlo error otherwise.  MC runs use
    the same master seed for both channels; shared uniforms only correlate
    the runs positively, so the pooled z-score is conservative.
    """
    if code.imprinter_sector != "Z":
        raise UnsupportedFamily("comparison is defined for Z-imprinter codes")
    p_eq = channel.z_marginal()
    if exhaustive:
        d_pauli = _exhaustive_pauli_contrast(code, channel, table, k_exact)
        d_deph = fqz_exhaustive(code, p_eq, table, k_exact).contrast_D
        diff = d_pauli - d_deph
        return ChannelComparison(d_pauli, d_deph, 0.0 if diff == 0.0 else math.inf,
                                 p_eq, "exhaustive")
    est_p = fqz_monte_carlo(code, channel, n_samples, seed, table,
                            shard_count=shard_count, k_exact=k_exact)
    est_d = fqz_monte_carlo(code, dephasing(p_eq), n_samples, seed, table,
                            shard_count=shard_count, k_exact=k_exact)
    pooled = math.hypot(est_p.contrast_stderr, est_d.contrast_stderr)
    diff = est_p.contrast_D - est_d.contrast_D
    z = 0.0 if diff == 0.0 else (math.inf if pooled == 0.0 else diff / pooled)
    return ChannelComparison(est_p.contrast_D, est_d.contrast_D, z, p_eq, "mc",
                             est_p.contrast_stderr, est_d.contrast_stderr,
                             est_p, est_d)


def _exhaustive_pauli_contrast(code: CssCode, channel: PauliChannel,
                               table: DistanceTable, k_exact: int,
                               max_qubits: int = 12) -> float:
    """Weighted contrast over all 4**n Pauli patterns, decoded jointly.

    Every (x, z) support pair flows through the same batch decoder as the
    samplers, so the invisibility of the X component is exercised rather
    than assumed.
    """
    n = code.n_qubits
    if n > max_qubits:
        raise TooLarge(f"{n} qubits exceeds the joint enumeration cap ({max_qubits})")
    cat_probs = np.array([
        1.0 - channel.p_total,  # (x=0, z=0) identity
        channel.p_x,            # (1, 0)
        channel.p_z,            # (0, 1)
        channel.p_y,            # (1, 1)
    ])
    p_plus = p_minus = 0.0
    # one joint index over 2n bits: low n bits = z support, high n bits = x
    for block in _enumerate_bits(2 * n, chunk=1 << 18):
        z_part = block[:, :n]
        x_part = block[:, n:]
        cats = x_part + 2 * z_part
        probs = cat_probs[cats].prod(axis=1)
        signs, logical = decode_batch(
            code, _relevant_batch(code, x_part, z_part), table, k_exact)
        kept = ~logical
        p_plus += float(probs[kept & (signs > 0)].sum())
        p_minus += float(probs[kept & (signs < 0)].sum())
    total = p_plus + p_minus
    if total == 0.0:
        raise NoKeptSamples("all probability mass fell on logical residuals")
    return (p_plus - p_minus) / total
