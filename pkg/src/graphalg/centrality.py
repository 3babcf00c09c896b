"""Closeness and betweenness centrality."""

import heapq
import logging
from collections import deque
from typing import List, Sequence, Tuple

import numpy as np

from src.graphalg.paths import all_pairs_shortest_paths, edge_costs
from src.models.graph_models import CentralityKind, CentralityVector, PathCost, RelationGraph

logger = logging.getLogger(__name__)


def closeness_centrality(g: RelationGraph, cost: PathCost = PathCost.HOP) -> CentralityVector:
    """(n_reach - 1) / sum of distances to reachable vertices, per component.

    Larger means closer to the rest of its component; isolated vertices score 0.
    A vertex whose reachable vertices all sit at zero cost (weight-1 edges under
    ONE_MINUS_WEIGHT) scores +inf.
    """
    dist = all_pairs_shortest_paths(g, cost)
    reachable = np.isfinite(dist)
    n_reach = reachable.sum(axis=1)
    totals = np.where(reachable, dist, 0.0).sum(axis=1)
    values = np.zeros(g.n_vertices)
    ok = n_reach > 1
    with np.errstate(divide="ignore"):
        values[ok] = (n_reach[ok] - 1) / totals[ok]
    return CentralityVector(values=values, kind=CentralityKind.CLOSENESS)


def _adjacency_lists(g: RelationGraph, costs: np.ndarray) -> List[List[Tuple[int, float]]]:
    adj: List[List[Tuple[int, float]]] = [[] for _ in range(g.n_vertices)]
    for i, j, c in zip(g.rows.tolist(), g.cols.tolist(), costs.tolist()):
        adj[i].append((j, c))
        adj[j].append((i, c))
    for nbrs in adj:
        nbrs.sort()
    return adj


def _bfs_paths(adj: Sequence[Sequence[Tuple[int, float]]], source: int):
    n = len(adj)
    dist = [-1] * n
    sigma = [0] * n
    preds: List[List[int]] = [[] for _ in range(n)]
    dist[source] = 0
    sigma[source] = 1
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w, _ in adj[v]:
            if dist[w] < 0:
                queue.append(w)
                dist[w] = dist[v] + 1
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, sigma, preds


def _dijkstra_paths(adj: Sequence[Sequence[Tuple[int, float]]], source: int):
    n = len(adj)
    dist = [np.inf] * n
    sigma = [0] * n
    preds: List[List[int]] = [[] for _ in range(n)]
    settled = [False] * n
    dist[source] = 0.0
    sigma[source] = 1
    order = []
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if settled[v]:
            continue
        settled[v] = True
        order.append(v)
        for w, c in adj[v]:
            alt = d + c
            if alt < dist[w]:
                dist[w] = alt
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (alt, w))
            elif alt == dist[w] and not settled[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, sigma, preds


def betweenness_centrality(
    g: RelationGraph,
    cost: PathCost = PathCost.HOP,
    normalized: bool = False,
) -> CentralityVector:
    """Sum over unordered pairs s, t (both != v) of sigma_st(v) / sigma_st.

    Brandes accumulation: one single-source solve per vertex (BFS for hop cost,
    Dijkstra otherwise), path counts kept as exact integers. Each unordered pair is
    visited from both ends, hence the final halving. `normalized` divides by the
    number of pairs not involving v.
    """
    costs = edge_costs(g, cost)
    adj = _adjacency_lists(g, costs)
    solve = _bfs_paths if PathCost(cost) == PathCost.HOP else _dijkstra_paths
    n = g.n_vertices
    scores = np.zeros(n)
    for s in range(n):
        order, sigma, preds = solve(adj, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
    scores /= 2.0
    if normalized and n > 2:
        scores /= (n - 1) * (n - 2) / 2.0
    logger.debug("Betweenness over %d vertices (%s cost)", n, PathCost(cost).value)
    return CentralityVector(values=scores, kind=CentralityKind.BETWEENNESS)


def centrality(g: RelationGraph, kind: CentralityKind, cost: PathCost = PathCost.HOP) -> CentralityVector:
    kind = CentralityKind(kind)
    if kind == CentralityKind.CLOSENESS:
        return closeness_centrality(g, cost)
    return betweenness_centrality(g, cost)
