"""CSS probe-code construction.

Builds the four supported stabilizer-code families with explicit check
supports, synthesizes the readout (symmetry) operator over GF(2), and
extracts logical-class generators used to flag uncorrectable residuals.

Index conventions (fixed, row-major over unit cells):

* ``toric_square``: cells ``(i, j)`` with ``i in [0, Lx)``, ``j in [0, Ly)``,
  ``cell = i*Ly + j``.  Qubit ``2*cell`` is the horizontal edge leaving
  vertex ``(i, j)`` in the +j direction, qubit ``2*cell + 1`` the vertical
  edge in the +i direction.  Vertex checks are X-type, plaquette checks
  Z-type; the phase is imprinted by the Z sector.
* ``toric_honeycomb``: three edges per cell, ``qubit = 3*cell + e``.
  Edge 0 joins the two sites of the cell, edge 1 joins site A of the cell
  to site B of cell ``(i-1, j)``, edge 2 to site B of cell ``(i, j-1)``.
  Vertex checks (weight 3) are X-type, hexagon checks (weight 6) Z-type.
  An optional ``shear`` shifts the cell column by ``shear`` when wrapping
  in the j direction, selecting twisted tilings of the same cell count.
* ``bacon_shor``: qubit ``(r, c) = r*n + c`` on an ``m x n`` grid.  The
  X sector holds the ``m`` double-row checks (weight ``2n``) that imprint
  the phase; the Z sector holds the ``m*n`` weight-2 in-row pair checks
  used for correction.  ``imprinter_sector`` is "X" and all downstream
  operations branch on that flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import InvalidParams, LengthMismatch, UnsolvableSymmetry

FAMILIES = ("ghz", "toric_square", "toric_honeycomb", "bacon_shor")


def support_from_indices(indices, n_qubits: int) -> np.ndarray:
    s = np.zeros(n_qubits, dtype=np.uint8)
    for q in indices:
        s[q] ^= 1
    return s


def weight(support: np.ndarray) -> int:
    return int(np.asarray(support).sum())


def overlap_parity(a: np.ndarray, b: np.ndarray) -> int:
    """Parity of |a & b|; 1 means the corresponding X/Z pair anticommutes."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise LengthMismatch(f"support lengths differ: {a.shape} vs {b.shape}")
    return int(np.bitwise_and(a, b).sum() & 1)


@dataclass(frozen=True)
class CssCode:
    """A CSS code instance with explicit check supports.

    ``sx`` and ``sz`` are binary matrices with one check support per row.
    ``tx`` is the readout-operator support: it has odd overlap with every
    imprinter-sector check.  ``imprinter_sector`` names the sector whose
    checks generate the phase ("Z" for ghz/toric, "X" for bacon_shor);
    the other sector is monitored for correction.
    """

    family: str
    params: dict
    n_qubits: int
    sx: np.ndarray
    sz: np.ndarray
    tx: np.ndarray
    imprinter_sector: str
    stabilizer_weight_l: int

    def __post_init__(self):
        for arr in (self.sx, self.sz, self.tx):
            arr.flags.writeable = False

    @property
    def imprinter_matrix(self) -> np.ndarray:
        return self.sz if self.imprinter_sector == "Z" else self.sx

    @property
    def correction_matrix(self) -> np.ndarray:
        return self.sx if self.imprinter_sector == "Z" else self.sz

    @property
    def n_imprinters(self) -> int:
        return self.imprinter_matrix.shape[0]

    @property
    def sx_supports(self) -> list[np.ndarray]:
        return list(self.sx)

    @property
    def sz_supports(self) -> list[np.ndarray]:
        return list(self.sz)

    def to_dict(self, logicals: bool = True) -> dict:
        """JSON-ready description: supports as sorted qubit index lists."""
        d = {
            "family": self.family,
            "params": dict(self.params),
            "n_qubits": self.n_qubits,
            "sx": [sorted(np.nonzero(row)[0].tolist()) for row in self.sx],
            "sz": [sorted(np.nonzero(row)[0].tolist()) for row in self.sz],
            "tx": sorted(np.nonzero(self.tx)[0].tolist()),
            "imprinter_sector": self.imprinter_sector,
        }
        if logicals:
            ls = logical_generators(self)
            d["logicals"] = [sorted(np.nonzero(g)[0].tolist()) for g in ls.x_logicals]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs), sort_keys=True)


@dataclass(frozen=True)
class LogicalSet:
    """Generators of the residual-classification filter classes.

    Each generator lies in ker(imprinter checks) and outside the rowspace
    of the correction checks, so its overlap parity with a syndrome-free
    residual distinguishes logical residuals from stabilizer loops.
    """

    x_logicals: list = field(default_factory=list)
    rank_hz: int = 0


def solve_symmetry_operator(supports, n_qubits: int) -> np.ndarray:
    """Support with odd overlap against every given support.

    Solves H x = 1 over GF(2) by forward elimination with lowest-index
    pivots (free variables zero), so the solution is reproducible.
    """
    mat = _supports_to_matrix(supports, n_qubits)
    x = gf2.solve(mat, np.ones(mat.shape[0], dtype=np.uint8))
    if x is None:
        raise UnsolvableSymmetry(
            "no operator has odd overlap with every given support"
        )
    return x


def _supports_to_matrix(supports, n_qubits: int) -> np.ndarray:
    if isinstance(supports, np.ndarray) and supports.ndim == 2:
        return gf2.as_gf2(supports)
    if len(supports) == 0:
        return np.zeros((0, n_qubits), dtype=np.uint8)
    return np.array([gf2.as_gf2(s) for s in supports], dtype=np.uint8)


def _solve_tx(imprinter: np.ndarray, correction: np.ndarray, n_qubits: int) -> np.ndarray:
    """Readout support: odd overlap with imprinter checks, and even overlap
    with correction checks whenever that combined system is consistent."""
    if correction.shape[0]:
        combined = np.vstack([imprinter, correction])
        rhs = np.concatenate([
            np.ones(imprinter.shape[0], dtype=np.uint8),
            np.zeros(correction.shape[0], dtype=np.uint8),
        ])
        x = gf2.solve(combined, rhs)
        if x is not None:
            return x
    x = gf2.solve(imprinter, np.ones(imprinter.shape[0], dtype=np.uint8))
    if x is None:
        raise UnsolvableSymmetry(
            "no readout operator exists for this geometry "
            f"({imprinter.shape[0]} imprinter checks)"
        )
    return x


def build_code(family: str, solve_readout: bool = True, **params) -> CssCode:
    """Construct a code instance; see module docstring for conventions.

    ghz:             N >= 2
    toric_square:    lx, ly >= 1 with lx*ly even
    toric_honeycomb: lx, ly >= 1 with lx*ly even; optional shear
    bacon_shor:      m >= 2 even, n >= 1

    With ``solve_readout=False`` the readout support is left empty and no
    solvability constraint applies; such codes serve the perpendicular-
    noise oracles (which never read it) but cannot be decoded or sampled.
    """
    if family == "ghz":
        return _build_ghz(**params)
    if family == "toric_square":
        return _build_toric_square(solve_readout=solve_readout, **params)
    if family == "toric_honeycomb":
        return _build_toric_honeycomb(solve_readout=solve_readout, **params)
    if family == "bacon_shor":
        return _build_bacon_shor(**params)
    raise InvalidParams(f"unknown family {family!r}; expected one of {FAMILIES}")


def _build_ghz(N: int) -> CssCode:
    if N < 2:
        raise InvalidParams("ghz requires N >= 2")
    sz = np.eye(N, dtype=np.uint8)
    sx = np.zeros((0, N), dtype=np.uint8)
    tx = np.ones(N, dtype=np.uint8)
    return CssCode("ghz", {"N": N}, N, sx, sz, tx, "Z", 1)


def _build_toric_square(lx: int, ly: int, solve_readout: bool = True) -> CssCode:
    if lx < 1 or ly < 1:
        raise InvalidParams("toric_square requires lx, ly >= 1")
    if solve_readout and (lx * ly) % 2:
        raise UnsolvableSymmetry(
            "odd plaquette count on the torus: the readout system is inconsistent"
        )
    n = 2 * lx * ly

    def h(i, j):  # edge from (i, j) toward +j
        return 2 * ((i % lx) * ly + (j % ly))

    def v(i, j):  # edge from (i, j) toward +i
        return 2 * ((i % lx) * ly + (j % ly)) + 1

    sx_rows, sz_rows = [], []
    for i in range(lx):
        for j in range(ly):
            sx_rows.append(support_from_indices(
                [h(i, j), h(i, j - 1), v(i, j), v(i - 1, j)], n))
            sz_rows.append(support_from_indices(
                [h(i, j), h(i + 1, j), v(i, j), v(i, j + 1)], n))
    sx = np.array(sx_rows, dtype=np.uint8)
    sz = np.array(sz_rows, dtype=np.uint8)
    tx = _solve_tx(sz, sx, n) if solve_readout else np.zeros(n, dtype=np.uint8)
    return CssCode("toric_square", {"lx": lx, "ly": ly}, n, sx, sz, tx, "Z", 4)


def _build_toric_honeycomb(lx: int, ly: int, shear: int = 0,
                           solve_readout: bool = True) -> CssCode:
    if lx < 1 or ly < 1:
        raise InvalidParams("toric_honeycomb requires lx, ly >= 1")
    if solve_readout and (lx * ly) % 2:
        raise UnsolvableSymmetry(
            "odd hexagon count on the torus: the readout system is inconsistent"
        )
    n = 3 * lx * ly

    def cell(i, j):
        jq, jr = divmod(j, ly)
        return ((i + shear * jq) % lx) * ly + jr

    def e(i, j, k):  # edge k of cell (i, j)
        return 3 * cell(i, j) + k

    sx_rows, sz_rows = [], []
    for i in range(lx):
        for j in range(ly):
            # site A of cell (i, j), then site B
            sx_rows.append(support_from_indices(
                [e(i, j, 0), e(i, j, 1), e(i, j, 2)], n))
            sx_rows.append(support_from_indices(
                [e(i, j, 0), e(i + 1, j, 1), e(i, j + 1, 2)], n))
            sz_rows.append(support_from_indices(
                [e(i, j, 0), e(i + 1, j, 1), e(i + 1, j, 2),
                 e(i + 1, j - 1, 0), e(i + 1, j - 1, 1), e(i, j, 2)], n))
    sx = np.array(sx_rows, dtype=np.uint8)
    sz = np.array(sz_rows, dtype=np.uint8)
    tx = _solve_tx(sz, sx, n) if solve_readout else np.zeros(n, dtype=np.uint8)
    params = {"lx": lx, "ly": ly}
    if shear:
        params["shear"] = shear % lx
    return CssCode("toric_honeycomb", params, n, sx, sz, tx, "Z", 6)


def _build_bacon_shor(m: int, n: int) -> CssCode:
    if m < 2 or n < 1:
        raise InvalidParams("bacon_shor requires m >= 2 and n >= 1")
    nq = m * n

    def q(r, c):
        return (r % m) * n + (c % n)

    sx_rows = []
    for i in range(m):
        sx_rows.append(support_from_indices(
            [q(i, c) for c in range(n)] + [q(i + 1, c) for c in range(n)], nq))
    sz_rows = []
    for r in range(m):
        for c in range(n):
            sz_rows.append(support_from_indices([q(r, c), q(r, c + 1)], nq))
    sx = np.array(sx_rows, dtype=np.uint8)
    sz = np.array(sz_rows, dtype=np.uint8)
    if m % 2:
        # the alternating-row pattern cannot close around an odd cycle
        raise UnsolvableSymmetry(
            "bacon_shor readout needs an even row count m"
        )
    if n % 2:
        # full alternating rows: odd overlap (n qubits) with each imprinter
        # check and even overlap (0 or 2) with every weight-2 pair check
        tx = support_from_indices(
            [q(r, c) for r in range(0, m, 2) for c in range(n)], nq)
    else:
        # single-qubit alternating rows; the weight-2 checks at the column
        # wrap see odd overlap, which is harmless for Z-type against Z-type
        tx = support_from_indices([q(r, 0) for r in range(0, m, 2)], nq)
    return CssCode("bacon_shor", {"m": m, "n": n}, nq, sx, sz, tx, "X", 2 * n)


def logical_generators(code: CssCode, minimize: bool = True) -> LogicalSet:
    """Filter-class generators: ker(imprinter) modulo rowspace(correction).

    For the toric families these are the two noncontractible dual cycles
    whose overlap parities with a residual detect logical errors.  When the
    correction rowspace is small enough the representatives are reduced to
    minimum weight within their class (and the spanning pair is chosen with
    minimal weights); otherwise raw elimination output is returned.
    """
    imp = code.imprinter_matrix
    corr = code.correction_matrix
    ker = gf2.kernel_basis(imp)
    reps = gf2.quotient_basis(ker, corr)
    rank_imp = gf2.rank(imp)
    if minimize and reps.shape[0] and gf2.rank(corr) <= 12 and reps.shape[0] <= 8:
        reps = _minimize_generators(reps, corr)
    return LogicalSet(x_logicals=[r for r in reps], rank_hz=rank_imp)


def _minimize_generators(reps: np.ndarray, corr: np.ndarray) -> np.ndarray:
    coset = gf2.rowspace_vectors(corr)
    k = reps.shape[0]
    # minimum-weight representative of every nontrivial class combination
    best: list[tuple[int, int, np.ndarray]] = []
    for mask in range(1, 1 << k):
        v = np.zeros(reps.shape[1], dtype=np.uint8)
        for b in range(k):
            if mask & (1 << b):
                v ^= reps[b]
        cands = v ^ coset
        w = cands.sum(axis=1)
        idx = int(np.argmin(w))
        best.append((int(w[idx]), mask, cands[idx]))
    best.sort(key=lambda t: (t[0], t[1]))
    # greedily keep the lightest class combinations that stay independent
    out, masks_kept = [], 0
    span: set[int] = {0}
    for w, mask, v in best:
        if mask in span:
            continue
        out.append(v)
        span |= {s ^ mask for s in span}
        masks_kept += 1
        if masks_kept == k:
            break
    return np.array(out, dtype=np.uint8)
