"""Zero finding by argument-principle subdivision and AAA of ``f'/f``.

The search region is first split until no subregion holds more than ``M``
zeros (``subdivide``). Each subregion holding zeros is then handed to the
continuum AAA algorithm; poles of the approximation with residues close to a
positive integer are the zeros, the residue being the multiplicity
(``find_zeros``). Whenever the multiplicities in a region disagree with its
count the region is split again.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .aaa import AAAConfig, AAAResult, NonFiniteSampleError, aaa_continuum
from .geometry import Edge, Rectangle, split
from .handle import FunctionHandle
from .numderiv import DerivConfig
from .quadrature import (
    EdgeCache,
    Integer,
    NonInteger,
    QuadConfig,
    QuadratureFailure,
    count_zeros,
)
from .rational import EigenSolverError

__all__ = [
    "EngineConfig",
    "FunctionHandle",
    "RegionNode",
    "ZeroRecord",
    "RunReport",
    "RootFindingError",
    "BoundaryZeroError",
    "NonIntegerCountError",
    "SubdivisionBudgetError",
    "subdivide",
    "find_zeros",
    "find_poles_manual",
]

log = logging.getLogger(__name__)

# derivative-free handles approximate an approximation: loosen AAA to this
DERIVATIVE_FREE_AAA_TOL = 1e-12
# AAA outcomes used only for bookkeeping
_BOUNDARY_SINGULAR = "boundary-singular"


class RootFindingError(RuntimeError):
    """Base class for failures of the zero finder."""

    exit_code = 2


class BoundaryZeroError(RootFindingError):
    """A zero lies on or close to the boundary of the search region."""

    exit_code = 2

    def __init__(self, edge: Edge):
        super().__init__(
            f"there is a zero on or close to the boundary of the search region "
            f"(quadrature failed on edge {edge.start} -> {edge.end})"
        )
        self.edge = edge


class NonIntegerCountError(RootFindingError):
    """The argument principle did not return an integer."""

    exit_code = 3

    def __init__(self, rect: Rectangle, value: complex):
        super().__init__(
            f"argument principle gave {value:.6g} on {rect}: the function may not be "
            f"holomorphic in the region, or the quadrature failed silently"
        )
        self.rect = rect
        self.value = value


class SubdivisionBudgetError(RootFindingError):
    """Depth or perturbation budget exhausted."""

    exit_code = 3


@dataclass(frozen=True)
class EngineConfig:
    """Parameters of the zero finder.

    ``max_zeros`` (the per-region threshold M) must exceed the highest
    multiplicity of any zero, otherwise subdivision cannot terminate.
    """

    max_zeros: int = 7
    residue_tol: float = 1e-2
    max_depth: int = 50
    perturbation: tuple[float, float] = (0.01, 0.05)
    max_perturbation_attempts: int = 20
    seed: int = 0
    polish: bool = False
    threads: int = 1
    aaa: AAAConfig = field(default_factory=AAAConfig)
    quad: QuadConfig = field(default_factory=QuadConfig)
    deriv: DerivConfig = field(default_factory=DerivConfig)

    def __post_init__(self):
        if self.max_zeros < 1:
            raise ValueError("max_zeros must be at least 1")
        if not 0 < self.residue_tol < 0.5:
            raise ValueError("residue_tol must lie in (0, 0.5)")
        lo, hi = self.perturbation
        if not 0 < lo <= hi < 0.5:
            raise ValueError("perturbation range must satisfy 0 < lo <= hi < 0.5")


@dataclass(eq=False)
class RegionNode:
    rect: Rectangle
    id: int
    depth: int = 0
    parent: Optional["RegionNode"] = None
    sibling: Optional["RegionNode"] = None
    shared_edge: Optional[Edge] = None
    count: Optional[int] = None
    children: list["RegionNode"] = field(default_factory=list)
    status: str = "queued"
    split_attempts: int = 0
    aaa_degree: Optional[int] = None
    aaa_converged: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "rect": self.rect.as_list(),
            "depth": self.depth,
            "parent": None if self.parent is None else self.parent.id,
            "count": self.count,
            "status": self.status,
            "aaa_degree": self.aaa_degree,
        }


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int
    raw_residue: complex
    region_id: int
    refined: bool = False
    kind: str = "zero"

    def to_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "multiplicity": self.multiplicity,
            "residue_re": self.raw_residue.real,
            "residue_im": self.raw_residue.imag,
            "refined": self.refined,
            "kind": self.kind,
        }


@dataclass
class RunReport:
    regions: list[RegionNode]
    eval_counts: dict[str, int]
    count: Optional[int] = None
    elapsed: float = 0.0
    aaa_failures: list[int] = field(default_factory=list)

    @property
    def accepted(self) -> list[RegionNode]:
        return [r for r in self.regions if r.status in ("accepted", "solved")]

    @property
    def aaa_degrees(self) -> dict[int, int]:
        return {r.id: r.aaa_degree for r in self.regions if r.aaa_degree is not None}


def sort_records(records):
    return sorted(records, key=lambda r: (r.location.real, r.location.imag))


class _Tree:
    """Region bookkeeping shared by both algorithms."""

    def __init__(self, fh: FunctionHandle, omega: Rectangle, cfg: EngineConfig):
        self.fh = fh
        self.cfg = cfg
        self.cache = EdgeCache()
        self.rng = np.random.default_rng(cfg.seed)
        self.nodes: list[RegionNode] = []
        self.root = self.new_node(omega)

    def new_node(self, rect, parent=None) -> RegionNode:
        node = RegionNode(rect, len(self.nodes), depth=0 if parent is None else parent.depth + 1, parent=parent)
        self.nodes.append(node)
        return node

    def perturbed_offset(self, attempt: int) -> float:
        lo, hi = self.cfg.perturbation
        delta = float(self.rng.uniform(lo, hi))
        return 0.5 + (delta if attempt % 2 else -delta)

    def split_node(self, node: RegionNode, offset: float = 0.5) -> tuple[RegionNode, RegionNode]:
        if node.depth + 1 > self.cfg.max_depth:
            raise SubdivisionBudgetError(
                f"subdivision depth budget ({self.cfg.max_depth}) exhausted at {node.rect}; "
                f"zeros may be clustered more densely than M={self.cfg.max_zeros} allows, "
                f"or a zero has multiplicity above M"
            )
        a, b, edge = split(node.rect, offset)
        ca, cb = self.new_node(a, node), self.new_node(b, node)
        ca.sibling, cb.sibling = cb, ca
        ca.shared_edge, cb.shared_edge = edge, edge.reversed()
        node.children = [ca, cb]
        node.status = "split"
        return ca, cb

    def resplit_perturbed(self, parent: RegionNode) -> tuple[RegionNode, RegionNode]:
        """Throw away ``parent``'s descendants and split it again off-centre."""
        self.discard_descendants(parent)
        parent.split_attempts += 1
        if parent.split_attempts > self.cfg.max_perturbation_attempts:
            err = SubdivisionBudgetError(
                f"could not place a dividing edge in {parent.rect} avoiding zeros "
                f"after {self.cfg.max_perturbation_attempts} perturbations"
            )
            err.exit_code = 2
            raise err
        offset = self.perturbed_offset(parent.split_attempts)
        log.debug("re-splitting region %d at offset %.4f", parent.id, offset)
        return self.split_node(parent, offset)

    def discard_descendants(self, node: RegionNode) -> None:
        stack = list(node.children)
        while stack:
            n = stack.pop()
            n.status = "discarded"
            stack.extend(n.children)
        node.children = []

    def count(self, node: RegionNode):
        return count_zeros(self.fh, node.rect, self.cfg.quad, self.cache)


def _subdivide(tree: _Tree) -> list[RegionNode]:
    cfg = tree.cfg
    queue = deque([tree.root])
    while queue:
        node = queue.popleft()
        if node.status == "discarded":
            continue
        outcome = tree.count(node)
        if isinstance(outcome, QuadratureFailure):
            if node is tree.root:
                raise BoundaryZeroError(outcome.edge)
            # the sibling sharing the failed edge goes with it
            queue.extend(tree.resplit_perturbed(node.parent))
        elif isinstance(outcome, Integer):
            node.count = outcome.value
            if outcome.value > cfg.max_zeros:
                queue.extend(tree.split_node(node))
            else:
                node.status = "accepted"
        else:
            raise NonIntegerCountError(node.rect, outcome.value)
    return [n for n in tree.nodes if n.status == "accepted"]


def subdivide(fh: FunctionHandle, omega: Rectangle, cfg: EngineConfig = EngineConfig()) -> list[RegionNode]:
    """Split ``omega`` until every region holds at most ``cfg.max_zeros`` zeros.

    Returns the accepted regions, each with its argument-principle count.

    Raises:
        BoundaryZeroError: the quadrature on the boundary of ``omega`` failed.
        NonIntegerCountError: a converged count was not an integer.
        SubdivisionBudgetError: the depth or perturbation budget ran out.
    """
    return _subdivide(_Tree(fh, omega, cfg))


def _aaa_config_for(fh: FunctionHandle, cfg: EngineConfig) -> AAAConfig:
    if fh.derivative_free and cfg.aaa.rel_tol < DERIVATIVE_FREE_AAA_TOL:
        return AAAConfig(
            rel_tol=DERIVATIVE_FREE_AAA_TOL,
            max_degree=cfg.aaa.max_degree,
            gap_samples_max=cfg.aaa.gap_samples_max,
            gap_samples_min=cfg.aaa.gap_samples_min,
        )
    return cfg.aaa


def _approximate(fh: FunctionHandle, rect: Rectangle, aaa_cfg: AAAConfig):
    try:
        return aaa_continuum(fh.logderiv, rect.boundary(), aaa_cfg)
    except NonFiniteSampleError:
        return _BOUNDARY_SINGULAR


def _map(func, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def _classify_poles(res: AAAResult, rect: Rectangle, residue_tol: float, allow_negative: bool):
    """Poles inside ``rect`` whose residues are near a nonzero integer."""
    try:
        found = res.approximation.poles()
    except EigenSolverError:
        return None
    keep = []
    for p in found:
        if not rect.contains(p.location):
            continue
        k = int(round(p.residue.real))
        if k == 0 or abs(p.residue - k) >= residue_tol:
            continue
        if k < 0 and not allow_negative:
            continue
        keep.append((p, k))
    return keep


def _newton_polish(fh: FunctionHandle, z0: complex, multiplicity: int, rect: Rectangle, max_steps: int = 20):
    """Modified Newton on ``f``; returns the start point unless the result is better."""
    f0 = abs(complex(fh.f(z0)))
    if f0 == 0.0:
        return z0, False
    z = z0
    scale = max(abs(z0), rect.diameter)
    with np.errstate(all="ignore"):
        for _ in range(max_steps):
            fz = complex(fh.f(z))
            if fz == 0:
                break
            dfz = complex(fh.fprime(z))
            if dfz == 0 or not np.isfinite(dfz):
                break
            step = multiplicity * fz / dfz
            if not np.isfinite(step):
                break
            z = z - step
            if abs(step) <= 1e-15 * scale:
                break
    if not np.isfinite(z) or not rect.contains(z):
        return z0, False
    f1 = abs(complex(fh.f(z)))
    if f1 < f0:
        return z, True
    return z0, False


def _split_counted(tree: _Tree, node: RegionNode) -> list[RegionNode]:
    """Split ``node`` and count both children, perturbing the cut if a zero sits on it."""
    children = tree.split_node(node)
    while True:
        outcomes = [tree.count(c) for c in children]
        failed = [o for o in outcomes if isinstance(o, QuadratureFailure)]
        if failed:
            children = tree.resplit_perturbed(node)
            continue
        for c, o in zip(children, outcomes):
            if isinstance(o, NonInteger):
                raise NonIntegerCountError(c.rect, o.value)
            c.count = o.value
        return list(children)


def find_zeros(fh: FunctionHandle, omega: Rectangle, cfg: EngineConfig = EngineConfig()):
    """All zeros of ``fh`` inside ``omega`` with their multiplicities.

    Returns:
        ``(records, report)``: zero records sorted by real then imaginary part,
        and a :class:`RunReport` with the region tree and evaluation counts.
    """
    t_start = time.perf_counter()
    tree = _Tree(fh, omega, cfg)
    accepted = _subdivide(tree)
    aaa_cfg = _aaa_config_for(fh, cfg)
    records: list[ZeroRecord] = []
    failures: list[int] = []
    wave = [n for n in accepted if n.count > 0]
    for n in accepted:
        if n.count == 0:
            n.status = "solved"
    while wave:
        results = _map(lambda n: _approximate(fh, n.rect, aaa_cfg), wave, cfg.threads)
        next_wave = []
        for node, res in zip(wave, results):
            found = None
            if res is not _BOUNDARY_SINGULAR:
                node.aaa_degree = res.approximation.degree
                node.aaa_converged = res.converged
                found = _classify_poles(res, node.rect, cfg.residue_tol, allow_negative=False)
            if found is not None and sum(k for _, k in found) == node.count:
                node.status = "solved"
                for p, k in found:
                    records.append(ZeroRecord(p.location, k, p.residue, node.id))
                continue
            log.debug("region %d: AAA disagrees with count %d, subdividing", node.id, node.count)
            failures.append(node.id)
            next_wave.extend(c for c in _split_counted(tree, node) if c.count > 0)
            for c in node.children:
                if c.count == 0:
                    c.status = "solved"
        wave = next_wave
    if cfg.polish:
        polished = []
        for rec in records:
            rect = tree.nodes[rec.region_id].rect
            z, ok = _newton_polish(fh, rec.location, rec.multiplicity, rect)
            polished.append(ZeroRecord(z, rec.multiplicity, rec.raw_residue, rec.region_id, ok))
        records = polished
    report = RunReport(
        regions=[n for n in tree.nodes if n.status != "discarded"],
        eval_counts=fh.counts(),
        count=tree.root.count,
        elapsed=time.perf_counter() - t_start,
        aaa_failures=failures,
    )
    return sort_records(records), report


def find_poles_manual(fh: FunctionHandle, omega: Rectangle, depth: int, cfg: EngineConfig = EngineConfig()):
    """Zeros and poles of a meromorphic ``fh`` on a fixed uniform subdivision.

    ``omega`` is halved ``depth`` times (every region at every level), with no
    argument-principle gating and no count verification. If a boundary sample
    of a region is non-finite (a zero or pole on a cut), its parent is split
    again at a perturbed offset. Residues of ``f'/f``
    near positive integers mark zeros, near negative integers poles.

    Returns:
        ``(records, report)``; regions whose AAA run did not converge are
        listed in ``report.aaa_failures``.
    """
    t_start = time.perf_counter()
    tree = _Tree(fh, omega, cfg)
    level = [tree.root]
    for _ in range(depth):
        level = [c for node in level for c in tree.split_node(node)]
    aaa_cfg = _aaa_config_for(fh, cfg)
    results: dict[int, AAAResult] = {}
    failures: list[int] = []
    pending = level
    while pending:
        outs = _map(lambda n: _approximate(fh, n.rect, aaa_cfg), pending, cfg.threads)
        retry = []
        for node, res in zip(pending, outs):
            if node.status == "discarded":
                continue
            if res is _BOUNDARY_SINGULAR:
                if node.parent is None:
                    failures.append(node.id)
                    node.status = "accepted"
                    continue
                # a zero or pole sits on a cut: move the cut, redo both halves
                log.debug("region %d: singular boundary sample, re-splitting parent", node.id)
                retry.extend(tree.resplit_perturbed(node.parent))
                continue
            node.status = "accepted"
            results[node.id] = res
        pending = retry
    records: list[ZeroRecord] = []
    for node in tree.nodes:
        res = results.get(node.id)
        if res is None or node.status == "discarded":
            continue
        node.aaa_degree = res.approximation.degree
        node.aaa_converged = res.converged
        if not res.converged:
            failures.append(node.id)
        found = _classify_poles(res, node.rect, cfg.residue_tol, allow_negative=True) or []
        for p, k in found:
            kind = "zero" if k > 0 else "pole"
            records.append(ZeroRecord(p.location, abs(k), p.residue, node.id, kind=kind))
        node.status = "solved"
    report = RunReport(
        regions=[n for n in tree.nodes if n.status != "discarded"],
        eval_counts=fh.counts(),
        elapsed=time.perf_counter() - t_start,
        aaa_failures=sorted(failures),
    )
    return sort_records(records), report
