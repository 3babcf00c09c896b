"""Student-t repulsion between layout points, exact or with Barnes–Hut aggregation.

For point i the repulsive term is F_i = Σ_j w_ij² (y_i - y_j) with
w_ij = 1 / (1 + ‖y_i - y_j‖²); the normalizer Z = Σ_{i≠j} w_ij comes along since
t-SNE divides by it.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from src.core.matrix_ops import pairwise_force_sum, squared_distances
from src.models.data_models import Layout
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

MAX_TREE_DEPTH = 50


def _coords(layout: Union[Layout, np.ndarray]) -> np.ndarray:
    return layout.coords if isinstance(layout, Layout) else np.asarray(layout, dtype=np.float64)


def concat_ranges(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Concatenation of arange(s, e) for every (s, e) pair."""
    lengths = ends - starts
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    before = np.cumsum(lengths) - lengths
    return np.repeat(starts - before, lengths) + np.arange(total)


@dataclass
class SpaceTree:
    """Quadtree (2D) or octree (3D) in flat arrays.

    Points are stored in depth-first order (`order`), so every cell covers the
    contiguous slice start[c]:end[c] of that order. Children of cell c are
    child_idx[child_ptr[c]:child_ptr[c + 1]]; cells without children are leaves.
    """
    center_of_mass: np.ndarray
    count: np.ndarray
    width: np.ndarray
    start: np.ndarray
    end: np.ndarray
    child_ptr: np.ndarray
    child_idx: np.ndarray
    order: np.ndarray
    position: np.ndarray

    @property
    def n_cells(self) -> int:
        return len(self.count)


def build_space_tree(coords: np.ndarray) -> SpaceTree:
    n, dim = coords.shape
    lo = coords.min(axis=0)
    width = float((coords.max(axis=0) - lo).max())
    # widen so the largest coordinate sits strictly inside the root cell
    width = width * (1.0 + 1e-9) + 1e-12

    com: List[np.ndarray] = []
    count: List[int] = []
    widths: List[float] = []
    starts: List[int] = []
    ends: List[int] = []
    children: List[List[int]] = []
    order: List[int] = []
    bits = 1 << np.arange(dim)

    stack = [(np.arange(n), lo, width, 0, -1)]
    while stack:
        idx, cell_lo, cell_width, depth, parent = stack.pop()
        cell = len(count)
        com.append(coords[idx].mean(axis=0))
        count.append(len(idx))
        widths.append(cell_width)
        starts.append(-1)
        ends.append(-1)
        children.append([])
        if parent >= 0:
            children[parent].append(cell)

        pts = coords[idx]
        same = np.all(pts == pts[0])
        if len(idx) == 1 or same or depth >= MAX_TREE_DEPTH:
            starts[cell] = len(order)
            order.extend(idx.tolist())
            ends[cell] = len(order)
            continue

        half = cell_width / 2.0
        mid = cell_lo + half
        codes = ((pts >= mid) * bits).sum(axis=1)
        # pushed in reverse so children are visited (and numbered) in code order
        for code in sorted(np.unique(codes).tolist(), reverse=True):
            offset = ((code & bits) > 0) * half
            stack.append((idx[codes == code], cell_lo + offset, half, depth + 1, cell))

    # a cell's range spans its first and last descendant leaf
    starts_arr = np.array(starts, dtype=np.int64)
    ends_arr = np.array(ends, dtype=np.int64)
    for cell in range(len(count) - 1, -1, -1):
        if children[cell]:
            starts_arr[cell] = min(starts_arr[c] for c in children[cell])
            ends_arr[cell] = max(ends_arr[c] for c in children[cell])

    child_ptr = np.zeros(len(count) + 1, dtype=np.int64)
    child_ptr[1:] = np.cumsum([len(c) for c in children])
    child_idx = np.array([c for cs in children for c in cs], dtype=np.int64)
    order_arr = np.array(order, dtype=np.int64)
    position = np.empty(n, dtype=np.int64)
    position[order_arr] = np.arange(n)

    return SpaceTree(
        center_of_mass=np.array(com), count=np.array(count, dtype=np.float64),
        width=np.array(widths), start=starts_arr, end=ends_arr,
        child_ptr=child_ptr, child_idx=child_idx, order=order_arr, position=position,
    )


def exact_terms(coords: np.ndarray) -> Tuple[np.ndarray, float]:
    """Repulsive forces and normalizer Z by direct O(N²) summation."""
    w = 1.0 / (1.0 + squared_distances(coords))
    np.fill_diagonal(w, 0.0)
    forces = pairwise_force_sum(w ** 2, coords)
    return forces, float(w.sum())


def barnes_hut_terms(coords: np.ndarray, theta: float) -> Tuple[np.ndarray, float]:
    """Repulsive forces and Z, treating a cell as a point mass when its diagonal / distance < theta.

    A cell containing the query point is never summarized, so as theta → 0 every
    interaction is evaluated pairwise.
    """
    if not (0.0 < theta <= 1.0):
        raise ConfigError(f"theta must lie in (0, 1], got {theta}")
    n, dim = coords.shape
    tree = build_space_tree(coords)
    forces = np.zeros((n, dim))
    diagonal = tree.width * np.sqrt(dim)
    z_total = 0.0

    points = np.arange(n)
    cells = np.zeros(n, dtype=np.int64)
    while len(points):
        diff = coords[points] - tree.center_of_mass[cells]
        dist2 = (diff ** 2).sum(axis=1)
        pos = tree.position[points]
        contains = (tree.start[cells] <= pos) & (pos < tree.end[cells])
        is_leaf = tree.child_ptr[cells + 1] == tree.child_ptr[cells]
        far = diagonal[cells] < theta * np.sqrt(dist2)
        accept = far & ~contains & ~is_leaf

        if accept.any():
            w = 1.0 / (1.0 + dist2[accept])
            mass = tree.count[cells[accept]]
            np.add.at(forces, points[accept], (mass * w * w)[:, None] * diff[accept])
            z_total += float((mass * w).sum())

        leaf = is_leaf & ~accept
        if leaf.any():
            lp, lc = points[leaf], cells[leaf]
            lengths = tree.end[lc] - tree.start[lc]
            src = np.repeat(lp, lengths)
            dst = tree.order[concat_ranges(tree.start[lc], tree.end[lc])]
            other = src != dst
            src, dst = src[other], dst[other]
            d = coords[src] - coords[dst]
            w = 1.0 / (1.0 + (d ** 2).sum(axis=1))
            np.add.at(forces, src, (w * w)[:, None] * d)
            z_total += float(w.sum())

        opened = ~accept & ~is_leaf
        op, oc = points[opened], cells[opened]
        fan = tree.child_ptr[oc + 1] - tree.child_ptr[oc]
        points = np.repeat(op, fan)
        cells = tree.child_idx[concat_ranges(tree.child_ptr[oc], tree.child_ptr[oc + 1])]

    return forces, z_total


def exact_repulsion(layout: Union[Layout, np.ndarray]) -> np.ndarray:
    """Per-point repulsive force vectors by exact pairwise summation."""
    return exact_terms(_coords(layout))[0]


def barnes_hut_repulsion(layout: Union[Layout, np.ndarray], theta: float) -> np.ndarray:
    """Per-point repulsive force vectors with spatial-tree aggregation."""
    return barnes_hut_terms(_coords(layout), theta)[0]
