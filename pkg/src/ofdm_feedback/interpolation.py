"""Node placement and Lagrange reconstruction of the subcarrier gain profile.

The receiver feeds back gains at K node subcarriers; the transmitter rebuilds
the full N-point profile by piecewise polynomial interpolation between nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Interpolated gains can dip to zero or below between nodes; downstream
# allocators divide by the gain, so floor it here.
EPS_GAIN = 1e-9


@dataclass(frozen=True)
class NodePlan:
    """Which subcarriers act as interpolation nodes.

    Nodes sit at 0, R, 2R, ... with R = floor((N-1)/(K-1)), except the last
    node which is pinned to N-1 so the final segment never extrapolates. The
    final gap may therefore exceed R when K-1 does not divide N-1.
    """

    num_subcarriers: int
    num_nodes: int
    node_indices: np.ndarray

    @property
    def spacing(self) -> int:
        """Regular gap between consecutive nodes (the last gap may be larger)."""
        if self.num_nodes == self.num_subcarriers:
            return 1
        return int(self.node_indices[1] - self.node_indices[0])


def make_node_plan(num_subcarriers: int, num_nodes: int) -> NodePlan:
    n, k = num_subcarriers, num_nodes
    if k < 2:
        raise ValueError("need at least 2 interpolation nodes")
    if k > n:
        raise ValueError(f"num_nodes ({k}) exceeds num_subcarriers ({n})")
    if k == n:
        idx = np.arange(n, dtype=np.int64)
    else:
        r = (n - 1) // (k - 1)
        idx = np.empty(k, dtype=np.int64)
        idx[:-1] = r * np.arange(k - 1)
        idx[-1] = n - 1
    return NodePlan(num_subcarriers=n, num_nodes=k, node_indices=idx)


@lru_cache(maxsize=64)
def _basis_weights(num_subcarriers: int, num_nodes: int, method: str) -> np.ndarray:
    """(N, K) matrix W such that the reconstruction is clamp(W @ node_values).

    Both interpolators are linear maps of the node values, so the basis is
    built once per plan and reused across channel realizations. Node rows
    come out as exact unit rows (the Lagrange factors vanish or cancel
    exactly at integer node positions), preserving node exactness through
    the matmul.
    """
    plan = make_node_plan(num_subcarriers, num_nodes)
    n, k = num_subcarriers, num_nodes
    idx = plan.node_indices
    w = np.zeros((n, k))
    if k == n:
        np.fill_diagonal(w, 1.0)
        return w
    if method == "linear":
        for seg in range(k - 1):
            lo, hi = idx[seg], idx[seg + 1]
            t = (np.arange(lo, hi + 1, dtype=float) - lo) / (hi - lo)
            w[lo : hi + 1, seg] = 1.0 - t
            w[lo : hi + 1, seg + 1] = t
        return w
    for seg in range(k - 1):
        # Pick the consecutive node triple covering this segment. Interior
        # segments look one node back; the first segment has no left
        # neighbor, and the last two segments share the final triple because
        # the tail gap can be irregular.
        if seg == 0:
            t0 = 0
        elif seg >= k - 3:
            t0 = k - 3
        else:
            t0 = seg - 1
        xa, xb, xc = (float(idx[t0 + j]) for j in range(3))
        lo, hi = idx[seg], idx[seg + 1]
        x = np.arange(lo, hi + 1, dtype=float)
        w[lo : hi + 1, t0] = (x - xb) * (x - xc) / ((xa - xb) * (xa - xc))
        w[lo : hi + 1, t0 + 1] = (x - xa) * (x - xc) / ((xb - xa) * (xb - xc))
        w[lo : hi + 1, t0 + 2] = (x - xa) * (x - xb) / ((xc - xa) * (xc - xb))
    return w


def interpolate_linear(plan: NodePlan, node_values: np.ndarray) -> np.ndarray:
    """Piecewise-linear reconstruction through the node values.

    Within each segment the output is the convex combination of the two
    bracketing node values, which reproduces the nodes exactly.
    """
    node_values = np.asarray(node_values, dtype=float)
    _check_node_values(plan, node_values)
    w = _basis_weights(plan.num_subcarriers, plan.num_nodes, "linear")
    return np.maximum(w @ node_values, EPS_GAIN)


def interpolate_quadratic(plan: NodePlan, node_values: np.ndarray) -> np.ndarray:
    """Piecewise-quadratic reconstruction through the node values.

    Each inter-node segment is filled with the Lagrange parabola through
    three consecutive nodes (see ``_basis_weights`` for the triple choice),
    so node subcarriers are reproduced exactly and any globally quadratic
    profile is recovered everywhere. Requires at least 3 nodes; callers with
    2 should use the linear method.
    """
    if plan.num_nodes < 3:
        raise ValueError("quadratic interpolation needs at least 3 nodes")
    node_values = np.asarray(node_values, dtype=float)
    _check_node_values(plan, node_values)
    w = _basis_weights(plan.num_subcarriers, plan.num_nodes, "quadratic")
    return np.maximum(w @ node_values, EPS_GAIN)


def _check_node_values(plan: NodePlan, node_values: np.ndarray) -> None:
    if node_values.shape != (plan.num_nodes,):
        raise ValueError(
            f"expected {plan.num_nodes} node values, got shape {node_values.shape}"
        )
