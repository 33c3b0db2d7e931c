"""Nested-cube construction: tree bookkeeping and randomized realization.

The tree grows one node per step in index (breadth-first) order: step k gives
node k its M_k kids.  Weights are exact rationals so the per-layer sum is
exactly 1; kid side lengths follow the size rule tying the side to the
branching count, the node weight and the layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .capacity import DyadicCovering
from .measures import CubeMeasure, ShiftSample

__all__ = [
    "SpacingViolation",
    "SelectionBudgetError",
    "ConstructionParams",
    "TreeNode",
    "CubeTree",
    "build_tree",
    "greedy_spacing_branching",
    "layer_covering",
    "sample_shifts",
    "SelectionCertificate",
    "NuSelection",
    "select_nu",
    "realize_tree",
]


class SpacingViolation(ValueError):
    """The kid-side sequence failed the strict halving requirement."""

    def __init__(self, step: int, r_prev: float, r_new: float, suggested_m: int):
        super().__init__(
            f"spacing violated at step {step}: side {r_new} is not below "
            f"{r_prev}/2; raise the branching count to at least {suggested_m}"
        )
        self.step = step
        self.suggested_m = suggested_m


class SelectionBudgetError(RuntimeError):
    """Rejection sampling ran out of draws; carries the best candidate seen."""

    def __init__(self, message, best=None, certificate=None):
        super().__init__(message)
        self.best = best
        self.certificate = certificate


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of the construction: dimension, exponents, branching, seed."""

    d: int
    p: float
    q: float
    beta: float
    M: tuple
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "M", tuple(int(m) for m in self.M))
        if self.d not in (1, 2):
            raise ValueError("only d = 1 and d = 2 are supported at desk scale")
        if not self.p > 2:
            raise ValueError("p must exceed 2")
        if not self.q > 1:
            raise ValueError("q must exceed 1")
        qp = self.q / (self.q - 1.0)
        if not self.beta > qp / 2.0:
            raise ValueError(f"beta must exceed q'/2 = {qp / 2}")
        for m in self.M:
            if m < 2:
                raise ValueError("every branching count must be at least 2")

    @property
    def q_dual(self) -> float:
        return self.q / (self.q - 1.0)


def _kid_side(d: int, p: float, beta: float, m: int, weight: Fraction, layer: int) -> float:
    """Side of the kids spawned by a node of the given weight and layer."""
    b = float(weight)
    return m ** (-p / (2.0 * d)) * b ** (p / (2.0 * d * beta)) / (layer + 1)


@dataclass
class TreeNode:
    index: int
    parent: Optional[int]
    layer: int
    weight: Fraction
    side: float
    corner: Optional[tuple] = None
    kids: Tuple[int, ...] = ()


@dataclass
class CubeTree:
    """The construction tree; geometry (corners) is filled by realize_tree."""

    params: ConstructionParams
    nodes: List[TreeNode]
    steps: List[tuple]  # (expanded node index, M, kid side), one per step

    def layer_nodes(self, n: int) -> List[TreeNode]:
        return [node for node in self.nodes if node.layer == n]

    def first_unexpanded(self, n: int) -> Optional[TreeNode]:
        """First layer-n node with no kids, or None when the layer is expanded."""
        for node in self.layer_nodes(n):
            if not node.kids:
                return node
        return None

    def is_layer_complete(self, n: int) -> bool:
        """Layer n is complete when every layer n-1 node has been expanded."""
        if n == 0:
            return True
        return bool(self.layer_nodes(n - 1)) and self.first_unexpanded(n - 1) is None

    def max_complete_layer(self) -> int:
        n = 0
        while self.is_layer_complete(n + 1):
            n += 1
        return n

    def layer_weight_sum(self, n: int) -> Fraction:
        return sum((node.weight for node in self.layer_nodes(n)), Fraction(0))


def build_tree(params: ConstructionParams) -> CubeTree:
    """Grow the tree by expanding node k at step k with M_k kids.

    Weights are exact rationals; kid sides follow the size rule.  The kid
    sides over consecutive steps must drop strictly below half the previous
    step's value, otherwise SpacingViolation reports the minimal branching
    count that would restore it.
    """
    nodes = [TreeNode(0, None, 0, Fraction(1), 1.0)]
    steps: List[tuple] = []
    r_prev = None
    for k, m in enumerate(params.M):
        if k >= len(nodes):
            raise ValueError(f"step {k} has no node to expand; branching list too long")
        node = nodes[k]
        r = _kid_side(params.d, params.p, params.beta, m, node.weight, node.layer)
        if r_prev is not None and not r < r_prev / 2:
            m_min = m
            while not _kid_side(params.d, params.p, params.beta, m_min, node.weight, node.layer) < r_prev / 2:
                m_min += 1
                if m_min > 10**6:
                    raise SpacingViolation(k, r_prev, r, m_min)
            raise SpacingViolation(k, r_prev, r, m_min)
        kid_weight = node.weight / m
        assert kid_weight <= Fraction(1, 2 ** (node.layer + 1))
        first = len(nodes)
        for j in range(m):
            nodes.append(TreeNode(first + j, k, node.layer + 1, kid_weight, r))
        node.kids = tuple(range(first, first + m))
        steps.append((k, m, r))
        r_prev = r
    return CubeTree(params, nodes, steps)


def greedy_spacing_branching(d: int, p: float, beta: float, layers: int) -> tuple:
    """Branching counts chosen greedily: the minimal M_k >= 2 per step that
    keeps the kid sides strictly halving, continued until ``layers`` full
    layers exist."""
    nodes = [(0, Fraction(1))]  # (layer, weight)
    ms: List[int] = []
    r_prev = None
    k = 0
    while True:
        layer, weight = nodes[k]
        if layer >= layers:
            break
        m = 2
        while True:
            r = _kid_side(d, p, beta, m, weight, layer)
            if r_prev is None or r < r_prev / 2:
                break
            m += 1
            if m > 10**6:
                raise SpacingViolation(k, r_prev, r, m)
        ms.append(m)
        for _ in range(m):
            nodes.append((layer + 1, weight / m))
        r_prev = r
        k += 1
    return tuple(ms)


def layer_covering(tree: CubeTree, n: int) -> DyadicCovering:
    """Diameters of all layer-n cubes, ready for the covering-sum evaluator."""
    if not tree.is_layer_complete(n):
        stuck = tree.first_unexpanded(n - 1) if n > 0 else None
        where = f"node {stuck.index}" if stuck is not None else f"layer {n - 1}"
        raise ValueError(f"layer {n} incomplete: {where} is not expanded")
    sqrt_d = math.sqrt(tree.params.d)
    diams = tuple(node.side * sqrt_d for node in tree.layer_nodes(n))
    return DyadicCovering(diams)


def sample_shifts(M: int, r: float, rng: np.random.Generator, d: int = 1, lineage=()) -> ShiftSample:
    """M independent uniform shifts in [0, 1-r]^d."""
    if not 0 < r < 0.5:
        raise ValueError(f"r must lie in (0, 1/2), got {r}")
    draws = rng.random((int(M), d)) * (1.0 - r)
    return ShiftSample(int(M), r, tuple(map(tuple, draws)), d, tuple(lineage))


@dataclass(frozen=True)
class SelectionCertificate:
    """Why a shift sample was accepted: both centred moment integrals and
    the thresholds they had to meet."""

    integrals: tuple  # (I_p1, I_p2) for the accepted sample
    thresholds: tuple
    exponents: tuple  # (p1, p2)
    draws: int
    calibration_draws: int


@dataclass(frozen=True)
class NuSelection:
    sample: ShiftSample
    certificate: SelectionCertificate


def _centred_moment_integrals(sample: ShiftSample, grid, expected_vals, exponents) -> tuple:
    from .spectral import random_transform

    vals = random_transform(sample, grid).values
    dev = np.abs(vals - expected_vals)
    cell = grid.cell_volume
    return tuple(float(np.sum(dev**pe) * cell) for pe in exponents)


def _default_selection_grid(d: int, r: float):
    from .spectral import FreqGrid

    extent = min(4.0 / r, 512.0)
    if d == 1:
        n = int(min(4096, max(256, 16 * math.ceil(extent))))
    else:
        n = int(min(256, max(64, 4 * math.ceil(extent))))
    n += n % 2
    return FreqGrid(d, extent, n)


def select_nu(
    M: int,
    r: float,
    p1: float,
    p2: float,
    budget: int,
    rng: np.random.Generator,
    d: int = 1,
    grid=None,
    calibration_draws: int = 15,
    lineage=(),
) -> NuSelection:
    """Rejection-sample a shift configuration with small centred moments.

    Both integrals int |nu_hat - E mu_hat|^{p_i} over the truncated grid must
    fall below 4x the calibration median; by Markov's inequality each draw
    fails a single threshold with probability at most 1/4, so a pair of
    thresholds is met with probability at least 1/2 per draw.
    """
    if not p1 > p2 > 2:
        raise ValueError("need p1 > p2 > 2")
    from .spectral import expected_transform

    if grid is None:
        grid = _default_selection_grid(d, r)
    expected_vals = expected_transform(M, r, grid).values
    exponents = (p1, p2)
    calib = []
    for i in range(calibration_draws):
        s = sample_shifts(M, r, rng, d, lineage=(*lineage, "calib", i))
        calib.append(_centred_moment_integrals(s, grid, expected_vals, exponents))
    calib_arr = np.asarray(calib)
    thresholds = tuple(4.0 * np.median(calib_arr[:, j]) for j in range(2))

    best = None
    best_cert = None
    best_score = math.inf
    for i in range(budget):
        s = sample_shifts(M, r, rng, d, lineage=(*lineage, "draw", i))
        integrals = _centred_moment_integrals(s, grid, expected_vals, exponents)
        cert = SelectionCertificate(integrals, thresholds, exponents, i + 1, calibration_draws)
        score = max(
            ii / t if t > 0 else math.inf for ii, t in zip(integrals, thresholds)
        )
        if score < best_score:
            best, best_cert, best_score = s, cert, score
        if all(ii <= t for ii, t in zip(integrals, thresholds)):
            return NuSelection(s, cert)
    raise SelectionBudgetError(
        f"no sample met both thresholds {thresholds} within budget {budget}",
        best=best,
        certificate=best_cert,
    )


def realize_tree(
    tree: CubeTree,
    params: ConstructionParams,
    p1: Optional[float] = None,
    p2: Optional[float] = None,
    budget: int = 64,
):
    """Place kid cubes by randomized shifts and emit every measure stage.

    Nodes are processed in index order.  At step k the shifts are drawn for
    the relative side r_k / side(Q_k), mapped through the homothety onto
    Q_k, and the measure is updated by replacing the mass on Q_k with equal
    shares on its kids.  Returns the tree with geometry and the list of
    measures from the initial uniform stage through the deepest stage.
    """
    if p1 is None:
        p1 = params.p + 2.0
    if p2 is None:
        p2 = (params.p + 2.0) / 2.0
    d = params.d
    tree.nodes[0].corner = tuple(0.0 for _ in range(d))

    active = {0: Fraction(1)}
    fractions0 = (Fraction(1),)
    measures = [CubeMeasure(d, ((tree.nodes[0].corner, 1.0, 1.0),), fractions0)]
    root_seq = np.random.SeedSequence(params.seed)

    for k, m, r in tree.steps:
        node = tree.nodes[k]
        if node.corner is None:
            raise RuntimeError(f"node {k} expanded before receiving geometry")
        rel_r = r / node.side
        rng = np.random.default_rng(np.random.SeedSequence(params.seed, spawn_key=(k,)))
        sel = select_nu(
            m, rel_r, p1, p2, budget, rng, d=d, lineage=(params.seed, k)
        )
        for kid_index, v in zip(node.kids, sel.sample.shifts):
            kid = tree.nodes[kid_index]
            kid.corner = tuple(c + node.side * vc for c, vc in zip(node.corner, v))
            assert abs(kid.side - r) < 1e-12
        share = active.pop(k) / m
        for kid_index in node.kids:
            active[kid_index] = share
        atoms = []
        fracs = []
        for idx in sorted(active):
            nd = tree.nodes[idx]
            atoms.append((nd.corner, nd.side, float(active[idx])))
            fracs.append(active[idx])
        measures.append(CubeMeasure(d, tuple(atoms), tuple(fracs)))
    return tree, measures
