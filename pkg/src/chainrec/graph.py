"""
Delta-chain graphs and their recurrent classes.

Nodes are the points of a finite cloud; u -> v is an edge when
d(f(u), v) < delta. Strongly connected components holding a cycle
(self-loops included) are the chain-recurrent classes at that resolution;
their union is the nonwandering estimate.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from src.core.errors import PreconditionError
from src.orbits.pseudo import PseudoOrbit
from src.orbits.shadow import shadow
from src.spaces.base import DynamicalSystem
from src.spaces.example1 import Example1System
from src.spaces.samples import IteratedSample, OrbitSample
from src.spaces.sphere import SphereSystem, canonical_many
from src.spaces.symbolic import CantorSystem, ShiftSystem, make_shift_point, tail_index
from src.spaces.torus import TorusSystem

logger = logging.getLogger(__name__)

# Rows of the distance matrix computed at once for systems without a KD-tree
EDGE_CHUNK = 1024

CLASS_DELTAS = (0.2, 0.1, 0.05)


@dataclass
class ChainGraph:
    """
    Delta-chain transition graph of a finite cloud.

    Attributes:
        system: System the nodes belong to
        nodes: Batch of node points
        delta: Jump bound of the edges
        graph: Directed graph on node indices
        classes: Recurrent strongly connected components, sorted by smallest node
        omega_estimate: Sorted indices of nodes in some recurrent class
    """

    system: DynamicalSystem
    nodes: Any
    delta: float
    graph: nx.DiGraph
    classes: list[list[int]] = field(default_factory=list)
    omega_estimate: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def n_edges(self) -> int:
        return self.graph.number_of_edges()

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def class_of(self, node: int) -> int | None:
        """Index of the recurrent class holding `node`, None for wandering nodes."""
        for i, members in enumerate(self.classes):
            if node in members:
                return i
        return None

    def summary(self) -> dict[str, Any]:
        sizes = self.class_sizes
        return {
            "system": self.system.name,
            "delta": self.delta,
            "nodes": self.n_nodes,
            "edges": self.n_edges,
            "recurrent_classes": len(self.classes),
            "singleton_classes": sum(1 for s in sizes if s == 1),
            "largest_class": max(sizes, default=0),
            "omega_fraction": len(self.omega_estimate) / max(self.n_nodes, 1),
        }

    def rows(self) -> list[dict[str, Any]]:
        """One CSV row per node with its class index (-1 when wandering)."""
        labels = np.full(self.n_nodes, -1, dtype=np.int64)
        for i, members in enumerate(self.classes):
            labels[members] = i
        return [{"node": int(n), "class": int(labels[n])} for n in range(self.n_nodes)]


def _periodic_coords(points: np.ndarray) -> np.ndarray:
    coords = np.mod(np.asarray(points, dtype=float), 1.0)
    coords[coords >= 1.0] = 0.0
    return coords


def _candidate_edges_kdtree(
    system: TorusSystem, images: np.ndarray, nodes: np.ndarray, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    tree = cKDTree(_periodic_coords(nodes), boxsize=1.0)
    queries = [images]
    if isinstance(system, SphereSystem):
        queries.append(-np.asarray(images, dtype=float))
    sources: list[np.ndarray] = []
    targets: list[np.ndarray] = []
    for query in queries:
        hits = tree.query_ball_point(_periodic_coords(query), r=delta)
        for u, vs in enumerate(hits):
            if vs:
                sources.append(np.full(len(vs), u, dtype=np.int64))
                targets.append(np.asarray(vs, dtype=np.int64))
    if not sources:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    pairs = np.unique(np.column_stack([np.concatenate(sources), np.concatenate(targets)]), axis=0)
    return pairs[:, 0], pairs[:, 1]


def chain_edges(system: DynamicalSystem, nodes: Any, images: Any, delta: float) -> np.ndarray:
    """
    All pairs (u, v) with d(f(u), v) < delta.

    Torus and sphere clouds take candidates from a periodic KD-tree; every
    candidate is then checked with the system metric so the strict
    inequality is exact.

    Returns:
        (E, 2) array of node index pairs, sorted
    """
    if isinstance(system, TorusSystem):
        src, dst = _candidate_edges_kdtree(system, images, nodes, delta)
        if len(src) == 0:
            return np.zeros((0, 2), dtype=np.int64)
        d = system.dist_rows(system.take(images, src), system.take(nodes, dst))
        keep = d < delta
        return np.column_stack([src[keep], dst[keep]])

    size = system.batch_len(nodes)
    found: list[np.ndarray] = []
    for start in range(0, size, EDGE_CHUNK):
        rows = np.arange(start, min(start + EDGE_CHUNK, size))
        block = system.cross(system.take(images, rows), nodes) < delta
        u, v = np.nonzero(block)
        found.append(np.column_stack([rows[u], v]))
    if not found:
        return np.zeros((0, 2), dtype=np.int64)
    return np.vstack(found).astype(np.int64)


def chain_graph(
    system: DynamicalSystem, cloud: OrbitSample | Sequence[Any], delta: float
) -> ChainGraph:
    """
    Build the delta-chain graph of a cloud and its recurrent classes.

    Args:
        system: The dynamical system
        cloud: An orbit sample or a sequence of points
        delta: Edge bound, u -> v iff d(f(u), v) < delta

    Returns:
        ChainGraph with recurrent classes and the nonwandering estimate

    Raises:
        PreconditionError: If delta is not positive or the cloud is empty
    """
    if delta <= 0:
        raise PreconditionError(f"Chain graphs need delta > 0, got {delta}")
    if isinstance(cloud, OrbitSample):
        nodes, images = cloud.points_at(0), cloud.points_at(1)
    else:
        nodes = system.stack(list(cloud))
        images = system.apply_batch(nodes)
    size = system.batch_len(nodes)
    if size == 0:
        raise PreconditionError("Chain graph of an empty cloud")

    edges = chain_edges(system, nodes, images, delta)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(size))
    graph.add_edges_from(map(tuple, edges.tolist()))

    classes = []
    for component in nx.strongly_connected_components(graph):
        members = sorted(component)
        if len(members) > 1 or graph.has_edge(members[0], members[0]):
            classes.append(members)
    classes.sort(key=lambda c: c[0])
    omega = np.array(sorted(n for c in classes for n in c), dtype=np.int64)

    result = ChainGraph(system, nodes, delta, graph, classes, omega)
    logger.info(
        f"Chain graph of {system.name} at delta={delta}: {size} nodes, "
        f"{len(edges)} edges, {len(classes)} recurrent classes"
    )
    return result


def nonwandering_estimate(graph: ChainGraph) -> np.ndarray:
    """Indices of nodes lying on a directed cycle of the chain graph."""
    return graph.omega_estimate.copy()


def default_chain_cloud(
    system: DynamicalSystem, delta: float, step: float | None = None
) -> OrbitSample:
    """
    Cloud used for chain graphs of a bundled system.

    Torus and sphere clouds are grids with step delta/2 by default so that
    grid neighbours are joined. Example 1 adds p_1..p_K with K = ceil(4/delta).
    Shifts use every periodic word of length J + 1 with 2^-J < delta, and the
    Cantor identity every prefix of that length padded with zeros.
    """
    if delta <= 0:
        raise PreconditionError(f"Chain clouds need delta > 0, got {delta}")
    if isinstance(system, Example1System):
        return system.chain_cloud(delta, step=step or 0.02)
    if isinstance(system, TorusSystem):
        grid_step = step or delta / 2
        points = system.grid_points(grid_step)
        if isinstance(system, SphereSystem):
            points = np.unique(canonical_many(points), axis=0)
        return IteratedSample(system, points, resolution=grid_step)

    length = tail_index(delta) + 1
    words = [[(w >> i) & 1 for i in range(length)] for w in range(2**length)]
    if isinstance(system, ShiftSystem):
        reps = max(1, (2 * system.half_window + 1) // length)
        points = [make_shift_point(word * reps, origin=length * (reps // 2)) for word in words]
        return IteratedSample(system, points, resolution=2.0**-length)
    if isinstance(system, CantorSystem):
        bits = max(system.bits, length)
        points = ["".join(map(str, word)) + "0" * (bits - length) for word in words]
        return IteratedSample(system, points, resolution=2.0**-length)
    raise PreconditionError(f"No default chain cloud for system {system.name}")


@dataclass
class ClassCountRow:
    """Singleton ideal chain classes of Example 1 at one delta."""

    delta: float
    ideal_nodes: int
    singleton_ideal_classes: int
    recurrent_classes: int
    largest_class: int

    def as_row(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "ideal_nodes": self.ideal_nodes,
            "singleton_ideal_classes": self.singleton_ideal_classes,
            "recurrent_classes": self.recurrent_classes,
            "largest_class": self.largest_class,
        }


def singleton_ideal_classes(graph: ChainGraph) -> int:
    """Recurrent classes made of a single ideal point."""
    ideal = graph.nodes.ideal
    return sum(1 for c in graph.classes if len(c) == 1 and ideal[c[0]] > 0)


def class_count_series(
    system: Example1System,
    deltas: Sequence[float] = CLASS_DELTAS,
    step: float = 0.02,
) -> list[ClassCountRow]:
    """
    Singleton ideal class counts over a grid of deltas.

    p_k is isolated exactly when 1/k >= delta, so the count is floor(1/delta)
    and doubles whenever 1/delta doubles.
    """
    if not isinstance(system, Example1System):
        raise PreconditionError(f"Class counts need the example1 system, got {system.name}")
    rows = []
    for delta in deltas:
        graph = chain_graph(system, system.chain_cloud(delta, step=step), delta)
        rows.append(
            ClassCountRow(
                delta=float(delta),
                ideal_nodes=int(np.count_nonzero(graph.nodes.ideal)),
                singleton_ideal_classes=singleton_ideal_classes(graph),
                recurrent_classes=len(graph.classes),
                largest_class=max(graph.class_sizes, default=0),
            )
        )
        logger.debug(f"delta={delta}: {rows[-1].singleton_ideal_classes} singleton ideal classes")
    return rows


@dataclass
class ChainShadowReport:
    """Shadows of random edge paths of a chain graph."""

    delta: float
    bound: float
    paths: list[dict[str, Any]]

    @property
    def max_epsilon(self) -> float:
        return max((p["epsilon"] for p in self.paths), default=0.0)

    @property
    def ok(self) -> bool:
        return all(p["epsilon"] <= p["bound"] for p in self.paths)

    def summary(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "bound": self.bound,
            "paths": len(self.paths),
            "max_epsilon": self.max_epsilon,
            "ok": self.ok,
        }


def random_edge_path(graph: ChainGraph, length: int, rng: np.random.Generator) -> list[int]:
    """Random walk along out-edges, stopping early at a node without successors."""
    node = int(rng.integers(graph.n_nodes))
    path = [node]
    while len(path) < length:
        successors = sorted(graph.graph.successors(node))
        if not successors:
            break
        node = successors[int(rng.integers(len(successors)))]
        path.append(node)
    return path


def chain_path_shadowing(
    graph: ChainGraph, length: int = 200, n_paths: int = 5, seed: int = 0
) -> ChainShadowReport:
    """
    Shadow random edge paths of a chain graph by genuine orbits.

    Every path is a delta-pseudo-orbit. For a hyperbolic torus the shadow
    must stay within C·delta with C the shadow constant (sqrt(5) for the
    cat map); for Example 1 each ideal point p_k on the path adds 1/k.

    Raises:
        PreconditionError: If the system has no shadow constant or length < 1
    """
    system = graph.system
    if length < 1:
        raise PreconditionError(f"Path length must be >= 1, got {length}")
    if isinstance(system, Example1System):
        constant = system.base.splitting.shadow_constant
    elif isinstance(system, TorusSystem) and not isinstance(system, SphereSystem):
        constant = system.splitting.shadow_constant
    else:
        raise PreconditionError(f"No shadow constant for system {system.name}")

    rng = np.random.default_rng(seed)
    base_bound = constant * graph.delta
    paths = []
    for _ in range(n_paths):
        path = random_edge_path(graph, length, rng)
        points = system.unstack(system.take(graph.nodes, path))
        result = shadow(PseudoOrbit(system, points, graph.delta))
        bound = base_bound
        if isinstance(system, Example1System):
            ideal = graph.nodes.ideal[path]
            if np.any(ideal > 0):
                bound += float(np.max(1.0 / ideal[ideal > 0]))
        paths.append(
            {
                "length": len(path),
                "epsilon": result.epsilon_achieved,
                "bound": bound * (1 + 1e-6),
            }
        )
    report = ChainShadowReport(graph.delta, base_bound, paths)
    logger.info(f"Chain path shadowing: max eps={report.max_epsilon:.3e}, bound={base_bound:.3e}")
    return report
