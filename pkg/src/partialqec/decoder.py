"""Partial error correction on the monitored sector.

Syndromes are extracted from the correction-sector checks only; defects
are paired by exact minimum-weight perfect matching over shortest-path
distances on the check-adjacency graph, the matched paths are applied as
the correction, and the residual is classified by GF(2) membership in the
imprinter-check rowspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .codes import CssCode
from .errors import OddDefectCount, SizeMismatch, UnsupportedFamily
from .noise import ErrorPattern

IDENTITY = "identity"
STABILIZER_LOOP = "stabilizer_loop"
LOGICAL = "logical"


@dataclass
class DistanceTable:
    """Check-to-check shortest paths plus cached decode machinery.

    ``dist[v, w]`` is the edge count of the shortest chain between checks
    v and w; ``path[v, w]`` is one realizing qubit support (ties broken by
    lowest-index BFS expansion).  ``imp_rows``/``imp_pivots`` hold the RREF
    of the imprinter checks used for residual classification.
    """

    n_checks: int
    n_qubits: int
    dist: np.ndarray
    path: np.ndarray
    imp_rows: np.ndarray
    imp_pivots: list
    correction_cache: dict = field(default_factory=dict)


def relevant_component(code: CssCode, err: ErrorPattern) -> np.ndarray:
    """Error component the monitored checks can see (and the readout feels)."""
    return err.z_support if code.imprinter_sector == "Z" else err.x_support


def extract_syndrome(code: CssCode, err: ErrorPattern) -> tuple[int, ...]:
    comp = relevant_component(code, err)
    if comp.shape[0] != code.n_qubits:
        raise SizeMismatch("error pattern does not match code size")
    syn = (code.correction_matrix @ comp) & 1
    return tuple(int(v) for v in np.nonzero(syn)[0])


def build_distance_table(code: CssCode) -> DistanceTable:
    """BFS all-pairs distances over the check-adjacency graph.

    Two checks are adjacent iff they share a qubit; the stored chain for a
    pair toggles exactly that pair of checks.  Supported for families whose
    correction checks see each qubit at most twice (ghz and both torics);
    bacon_shor rows are decoded by majority vote elsewhere.
    """
    if code.family == "bacon_shor":
        raise UnsupportedFamily("bacon_shor is decoded by row majority vote")
    checks = code.correction_matrix
    k = checks.shape[0]
    n = code.n_qubits
    imp_rows, imp_pivots = gf2.rref(code.imprinter_matrix)
    table = DistanceTable(
        n_checks=k,
        n_qubits=n,
        dist=np.zeros((k, k), dtype=np.int64),
        path=np.zeros((k, k, n), dtype=np.uint8),
        imp_rows=imp_rows,
        imp_pivots=imp_pivots,
    )
    if k == 0:
        return table

    # adjacency with the lowest-index shared qubit per neighbor pair
    neighbors: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for v in range(k):
        for w in range(k):
            if v == w:
                continue
            shared = np.nonzero(checks[v] & checks[w])[0]
            if shared.size:
                neighbors[v].append((w, int(shared[0])))

    inf = np.iinfo(np.int64).max
    for src in range(k):
        dist = np.full(k, inf, dtype=np.int64)
        via = np.full(k, -1, dtype=np.int64)   # qubit used to enter each check
        prev = np.full(k, -1, dtype=np.int64)
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for w, q in neighbors[v]:
                    if dist[w] == inf:
                        dist[w] = dist[v] + 1
                        via[w] = q
                        prev[w] = v
                        nxt.append(w)
            frontier = nxt
        if np.any(dist == inf):
            raise UnsupportedFamily("check-adjacency graph is disconnected")
        table.dist[src] = dist
        for w in range(k):
            chain = np.zeros(n, dtype=np.uint8)
            v = w
            while v != src:
                chain[via[v]] ^= 1
                v = int(prev[v])
            table.path[src, w] = chain
    return table


@dataclass(frozen=True)
class MatchResult:
    pairs: tuple
    total_weight: int
    exact: bool


def mwpm(defects, table: DistanceTable, k_exact: int = 16) -> MatchResult:
    """Minimum-weight perfect matching of the defect set.

    Exact branch-and-bound up to ``k_exact`` defects; beyond that, greedy
    nearest pairs refined by exhaustive 2-swaps, flagged as approximate.
    """
    defects = tuple(sorted(int(d) for d in defects))
    if len(defects) % 2:
        raise OddDefectCount(f"{len(defects)} defects cannot be paired")
    if not defects:
        return MatchResult((), 0, True)
    if len(defects) <= k_exact:
        weight, pairs = _branch_and_bound(defects, table.dist)
        return MatchResult(pairs, weight, True)
    weight, pairs = _greedy_two_swap(defects, table.dist)
    return MatchResult(pairs, weight, False)


def _branch_and_bound(defects: tuple, dist: np.ndarray) -> tuple[int, tuple]:
    best_weight = None
    best_pairs: tuple = ()

    def lower_bound(remaining: tuple) -> int:
        # half the sum of each defect's nearest-partner distance is admissible
        total = 0
        for a in remaining:
            total += min(dist[a, b] for b in remaining if b != a)
        return (total + 1) // 2

    def search(remaining: tuple, acc_weight: int, acc_pairs: list):
        nonlocal best_weight, best_pairs
        if not remaining:
            if best_weight is None or acc_weight < best_weight:
                best_weight = acc_weight
                best_pairs = tuple(acc_pairs)
            return
        if best_weight is not None and acc_weight + lower_bound(remaining) >= best_weight:
            return
        a = remaining[0]
        rest = remaining[1:]
        # try nearest partners first to tighten the bound early
        for b in sorted(rest, key=lambda x: dist[a, x]):
            nxt = tuple(x for x in rest if x != b)
            acc_pairs.append((a, b))
            search(nxt, acc_weight + int(dist[a, b]), acc_pairs)
            acc_pairs.pop()

    search(defects, 0, [])
    return int(best_weight), best_pairs


def _greedy_two_swap(defects: tuple, dist: np.ndarray) -> tuple[int, tuple]:
    remaining = list(defects)
    pairs = []
    while remaining:
        a = remaining[0]
        b = min(remaining[1:], key=lambda x: dist[a, x])
        pairs.append([a, b])
        remaining.remove(a)
        remaining.remove(b)
    improved = True
    while improved:
        improved = False
        for i, j in itertools.combinations(range(len(pairs)), 2):
            (a, b), (c, d) = pairs[i], pairs[j]
            cur = dist[a, b] + dist[c, d]
            if dist[a, c] + dist[b, d] < cur:
                pairs[i], pairs[j] = [a, c], [b, d]
                improved = True
            elif dist[a, d] + dist[b, c] < cur:
                pairs[i], pairs[j] = [a, d], [b, c]
                improved = True
    total = int(sum(dist[a, b] for a, b in pairs))
    return total, tuple((a, b) for a, b in pairs)


def brute_force_mwpm(defects, dist: np.ndarray) -> tuple[int, tuple]:
    """Reference matcher: exhaustive minimum over all (k-1)!! pairings."""
    defects = tuple(sorted(int(d) for d in defects))
    if len(defects) % 2:
        raise OddDefectCount(f"{len(defects)} defects cannot be paired")

    def pairings(items):
        if not items:
            yield ()
            return
        a = items[0]
        for i in range(1, len(items)):
            b = items[i]
            rest = items[1:i] + items[i + 1:]
            for tail in pairings(rest):
                yield ((a, b),) + tail

    best_w, best_p = None, ()
    for p in pairings(defects):
        w = int(sum(dist[a, b] for a, b in p))
        if best_w is None or w < best_w:
            best_w, best_p = w, p
    return (0, ()) if best_w is None else (best_w, best_p)


@dataclass(frozen=True)
class DecodeResult:
    correction: np.ndarray
    residual: np.ndarray
    residual_class: str
    tx_sign: int
    pairing: tuple = ()
    exact_matching: bool = True


def correction_for_defects(defects: tuple, table: DistanceTable,
                           k_exact: int = 16) -> tuple[np.ndarray, tuple, bool]:
    cached = table.correction_cache.get(defects)
    if cached is not None:
        return cached
    match = mwpm(defects, table, k_exact=k_exact)
    corr = np.zeros(table.n_qubits, dtype=np.uint8)
    for a, b in match.pairs:
        corr ^= table.path[a, b]
    entry = (corr, match.pairs, match.exact)
    table.correction_cache[defects] = entry
    return entry


def classify_residual(residual: np.ndarray, table: DistanceTable) -> str:
    if not residual.any():
        return IDENTITY
    if gf2.in_rowspace(residual, table.imp_rows, table.imp_pivots):
        return STABILIZER_LOOP
    return LOGICAL


def decode(code: CssCode, err: ErrorPattern, table: DistanceTable,
           k_exact: int = 16) -> DecodeResult:
    """Correct one error pattern and classify what is left.

    The residual always has empty syndrome; its class is ``identity``,
    ``stabilizer_loop`` (flips the readout sign when the loop count is
    odd), or ``logical``.  ``tx_sign`` is the readout sign of the residual.
    """
    defects = extract_syndrome(code, err)
    corr, pairing, exact = correction_for_defects(defects, table, k_exact)
    residual = (relevant_component(code, err) ^ corr).astype(np.uint8)
    cls = classify_residual(residual, table)
    sign = -1 if (int((residual & code.tx).sum()) & 1) else 1
    return DecodeResult(corr, residual, cls, sign, pairing, exact)


def decode_batch(code: CssCode, components: np.ndarray, table: DistanceTable,
                 k_exact: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decode of many sector-relevant components at once.

    ``components`` has shape (n_samples, n_qubits) and holds the error
    component seen by the correction checks.  Returns (signs, logical_mask)
    where signs is +-1 per sample (sign of the post-correction residual on
    the readout support) and logical_mask flags discarded samples.
    Matches per-sample ``decode`` bit for bit.
    """
    comps = np.ascontiguousarray(components, dtype=np.uint8)
    if comps.shape[1] != code.n_qubits:
        raise SizeMismatch("component matrix does not match code size")
    checks = code.correction_matrix
    if checks.shape[0]:
        syndromes = (comps @ checks.T) & 1
    else:
        syndromes = np.zeros((comps.shape[0], 0), dtype=np.uint8)
    uniq, inverse = np.unique(syndromes, axis=0, return_inverse=True)
    corrections = np.zeros((uniq.shape[0], code.n_qubits), dtype=np.uint8)
    for u_idx in range(uniq.shape[0]):
        defects = tuple(int(v) for v in np.nonzero(uniq[u_idx])[0])
        corrections[u_idx] = correction_for_defects(defects, table, k_exact)[0]
    residuals = comps ^ corrections[inverse]
    reduced = gf2.reduce_matrix(residuals, table.imp_rows, table.imp_pivots)
    logical_mask = reduced.any(axis=1)
    parities = (residuals @ code.tx) & 1
    signs = np.where(parities, -1, 1).astype(np.int64)
    return signs, logical_mask
