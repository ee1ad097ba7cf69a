"""Bacon-Shor X/Z trade-off: closed forms, shape search, weight schedule.

The m x n grid code imprints the phase with its m double-row X checks and
corrects with the in-row weight-2 Z pair checks, which amounts to a
majority vote within each row.  Increasing the row length n suppresses the
parallel (X) noise at the cost of the perpendicular (Z) figure; these
routines quantify that trade-off and drive the stabilizer-weight schedule
that keeps both figures above the standard quantum limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .errors import InvalidGrid, InvalidShape, NoValidShape
from .noise import rng_for_shard


def baselines(count: int) -> tuple[float, float]:
    """(SQL, HL) = (4 N, 4 N**2); the caller decides what N counts."""
    if count < 1:
        raise InvalidShape("count must be >= 1")
    return 4.0 * count, 4.0 * count**2


def row_flip_probability(n: int, p: float) -> float:
    """Majority vote on one row of n qubits fails when at least
    floor((n+1)/2) flip; even-n ties count as failures (harsh model)."""
    if n < 1:
        raise InvalidShape("row length must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise InvalidShape(f"p={p} outside [0, 1]")
    return float(binom.sf((n - 1) // 2, n, p))


def _pow_even_stable(base: float, exponent: int) -> float:
    """|base|**exponent for even integer exponents, in log space."""
    if base == 0.0:
        return 0.0
    return math.exp(exponent * math.log(abs(base)))


def bacon_shor_fq(m: int, n: int, p: float) -> tuple[float, float]:
    """(fqx, fqz) closed forms for the m x n code at noise strength p.

    fqx = 4 [1 - 2 P(row majority fails)]**(2m) m**2 under parallel X
    noise; fqz = 4 (1-2p)**(4n) m**2 + 4 [1 + 2(1-2p)**(2n) -
    3(1-2p)**(4n)] m under perpendicular Z noise.  Both are evaluated in
    log space so shapes up to m*n ~ 1e7 stay finite.
    """
    if m < 2 or n < 1:
        raise InvalidShape("need m >= 2 and n >= 1")
    if not 0.0 <= p <= 0.5:
        raise InvalidShape(f"p={p} outside [0, 0.5]")
    p_eff = row_flip_probability(n, p)
    fqx = 4.0 * _pow_even_stable(1.0 - 2.0 * p_eff, 2 * m) * m**2
    x = 1.0 - 2.0 * p
    t2n = _pow_even_stable(x, 2 * n)
    t4n = _pow_even_stable(x, 4 * n)
    fqz = 4.0 * t4n * m**2 + 4.0 * (1.0 + 2.0 * t2n - 3.0 * t4n) * m
    return fqx, fqz


def majority_vote_contrast_mc(m: int, n: int, p: float, n_samples: int,
                              seed: int) -> tuple[float, float]:
    """Direct row-level Monte Carlo check of the fqx contrast.

    Samples i.i.d. flips on the grid, applies the per-row majority vote,
    and averages the parity of failed rows; the mean estimates
    (1 - 2 p_eff)**m.  Returns (contrast, stderr).
    """
    rng = rng_for_shard(seed, 0)
    flips = rng.random((n_samples, m, n)) < p
    row_counts = flips.sum(axis=2)
    failed = row_counts >= (n + 1) // 2
    signs = np.where(failed.sum(axis=1) % 2, -1.0, 1.0)
    return float(signs.mean()), float(signs.std(ddof=1) / math.sqrt(n_samples))


@dataclass(frozen=True)
class ShapeResult:
    n_qubits: int
    m: int
    n: int
    p: float
    fqx: float
    fqz: float
    sql: float
    hl: float


def optimal_shape(N: int, p: float, n_candidates=None) -> ShapeResult:
    """Best row length for an N-qubit budget at noise strength p.

    Candidates default to every n in [1, N/2] with m = floor(N/n) >= 2;
    the actual qubit count m*n (<= N) is reported.  fqx, the parallel-noise
    figure, is maximized; ties break toward smaller n.
    """
    if N < 4:
        raise NoValidShape("need N >= 4 for m >= 2")
    if n_candidates is None:
        nn = np.arange(1, N // 2 + 1, dtype=np.int64)
    else:
        nn = np.asarray(sorted(set(int(v) for v in n_candidates)), dtype=np.int64)
    mm = N // nn
    valid = (mm >= 2) & (nn >= 1)
    nn, mm = nn[valid], mm[valid]
    if nn.size == 0:
        raise NoValidShape("no candidate satisfies m >= 2")
    p_eff = binom.sf((nn - 1) // 2, nn, p)
    base = 1.0 - 2.0 * p_eff
    log_fqx = np.full(nn.shape, -np.inf)
    nz = base != 0.0
    with np.errstate(divide="ignore"):
        log_fqx[nz] = (math.log(4.0) + 2.0 * mm[nz] * np.log(np.abs(base[nz]))
                       + 2.0 * np.log(mm[nz]))
    best = int(np.argmax(log_fqx))
    m_opt, n_opt = int(mm[best]), int(nn[best])
    fqx, fqz = bacon_shor_fq(m_opt, n_opt, p)
    used = m_opt * n_opt
    sql, hl = baselines(used)
    return ShapeResult(used, m_opt, n_opt, p, fqx, fqz, sql, hl)


@dataclass(frozen=True)
class ScheduleEntry:
    p: float
    n: int
    m: int
    fqx: float
    fqz: float
    sql: float
    incremented: bool


@dataclass(frozen=True)
class ScheduleResult:
    entries: tuple
    sql: float
    loss_threshold: float | None  # first grid p with fqz <= sql, if any


def adaptive_schedule(N: int, p_grid, n_start: int = 3) -> ScheduleResult:
    """Walk an ascending noise grid, widening the stabilizer weight.

    At each p the row length n is raised by 2 (as long as m = floor(N/n)
    stays >= 2) while fqx sits at or below the SQL of the N-qubit budget;
    each grid point records the post-adjustment state.  The first grid p
    where fqz falls to the SQL is reported as the scaling-loss threshold.
    """
    grid = [float(p) for p in p_grid]
    if not grid:
        raise InvalidGrid("empty grid")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InvalidGrid("grid must be ascending")
    if not all(0.0 <= p < 0.5 for p in grid):
        raise InvalidGrid("grid values must lie in [0, 0.5)")
    if N // n_start < 2:
        raise InvalidGrid(f"N={N} cannot host n_start={n_start} with m >= 2")
    sql = 4.0 * N
    n = n_start
    entries = []
    loss_threshold = None
    for p in grid:
        incremented = False
        fqx, fqz = bacon_shor_fq(N // n, n, p)
        while fqx <= sql and N // (n + 2) >= 2:
            n += 2
            incremented = True
            fqx, fqz = bacon_shor_fq(N // n, n, p)
        entries.append(ScheduleEntry(p, n, N // n, fqx, fqz, sql, incremented))
        if loss_threshold is None and fqz <= sql:
            loss_threshold = p
    return ScheduleResult(tuple(entries), sql, loss_threshold)
