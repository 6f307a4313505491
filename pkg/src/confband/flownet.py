"""Maximum flow and extremal minimum cuts on directed capacitated graphs.

Arcs marked infinite get a surrogate capacity ``BIG`` one above the value of
a known finite cut, so no minimum cut crosses them. Capacities are either
float64 (saturation judged with a relative tolerance) or int64 (exact).

The default solver is highest-label push-relabel with gap and global
relabeling, followed by a second pass that sends stranded excess back to the
source; Dinic's algorithm is kept as an alternative. Both are compiled with
numba.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

_INT_LIMIT = 2**62
REL_TOL = 1e-9
MIN_CAP_TOL = 1e-3


@dataclass(frozen=True)
class CutResult:
    """A minimum cut: flow value and the source side ``X``."""

    flow_value: float
    source_side: frozenset[int]

    def __contains__(self, node) -> bool:
        return node in self.source_side


@numba.njit(cache=True)
def _bfs_levels(n, start, head, res, s, t, tol, level, queue):
    level[:] = -1
    level[s] = 0
    qh = 0
    qt = 1
    queue[0] = s
    while qh < qt:
        u = queue[qh]
        qh += 1
        if level[t] >= 0 and level[u] >= level[t]:
            continue
        for e in range(start[u], start[u + 1]):
            v = head[e]
            if level[v] < 0 and res[e] > tol:
                level[v] = level[u] + 1
                queue[qt] = v
                qt += 1
    return level[t] >= 0


@numba.njit(cache=True)
def _blocking_flow(n, start, head, res, rev, s, t, tol, level, it, path):
    total = res[0] * 0
    for u in range(n):
        it[u] = start[u]
    depth = 0
    u = s
    while True:
        if u == t:
            f = res[path[0]]
            for k in range(1, depth):
                if res[path[k]] < f:
                    f = res[path[k]]
            first = -1
            for k in range(depth):
                e = path[k]
                res[e] -= f
                res[rev[e]] += f
                if first < 0 and res[e] <= tol:
                    first = k
            total += f
            # retreat to the tail of the first saturated arc
            depth = first
            u = head[rev[path[depth]]]
            continue
        advanced = False
        while it[u] < start[u + 1]:
            e = it[u]
            v = head[e]
            if res[e] > tol and level[v] == level[u] + 1:
                path[depth] = e
                depth += 1
                u = v
                advanced = True
                break
            it[u] += 1
        if not advanced:
            level[u] = -1
            if depth == 0:
                return total
            depth -= 1
            e = path[depth]
            u = head[rev[e]]
            it[u] += 1


@numba.njit(cache=True)
def _dinic(n, start, head, res, rev, s, t, tol):
    level = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    it = np.empty(n, dtype=np.int64)
    path = np.empty(n, dtype=np.int64)
    flow = res[0] * 0
    while _bfs_levels(n, start, head, res, s, t, tol, level, queue):
        flow += _blocking_flow(n, start, head, res, rev, s, t, tol, level, it, path)
    return flow


@numba.njit(cache=True)
def _global_relabel(n, start, head, res, rev, target, blocked, tol, d, queue):
    # exact distances to target over residual arcs; unreachable nodes get n
    d[:] = n
    d[target] = 0
    queue[0] = target
    qh = 0
    qt = 1
    while qh < qt:
        v = queue[qh]
        qh += 1
        for e in range(start[v], start[v + 1]):
            u = head[e]
            if d[u] == n and u != blocked and res[rev[e]] > tol:
                d[u] = d[v] + 1
                queue[qt] = u
                qt += 1


@numba.njit(cache=True)
def _discharge_all(n, start, head, res, rev, excess, target, blocked, tol):
    """Highest-label push-relabel moving every movable excess to ``target``.

    Excess that cannot reach ``target`` is left where it is (label ``n``).
    """
    d = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    cur = np.empty(n, dtype=np.int64)
    bucket = np.full(n + 1, -1, dtype=np.int64)
    link = np.empty(n, dtype=np.int64)
    cnt = np.zeros(n + 1, dtype=np.int64)
    n_arcs = start[n]
    threshold = 6 * n + n_arcs // 2
    relabels = 0

    while True:
        # (re)initialize labels, counts and active buckets
        _global_relabel(n, start, head, res, rev, target, blocked, tol, d, queue)
        bucket[:] = -1
        cnt[:] = 0
        dmax = -1
        for v in range(n):
            cur[v] = start[v]
            if d[v] < n:
                cnt[d[v]] += 1
                if excess[v] > tol and v != target and v != blocked:
                    link[v] = bucket[d[v]]
                    bucket[d[v]] = v
                    if d[v] > dmax:
                        dmax = d[v]
        work = 0
        restart = False
        while not restart:
            while dmax >= 0 and bucket[dmax] == -1:
                dmax -= 1
            if dmax < 0:
                break
            v = bucket[dmax]
            bucket[dmax] = link[v]
            if d[v] != dmax or excess[v] <= tol:
                continue
            while excess[v] > tol:
                if cur[v] == start[v + 1]:
                    old = d[v]
                    newd = n
                    for e in range(start[v], start[v + 1]):
                        if res[e] > tol and d[head[e]] + 1 < newd:
                            newd = d[head[e]] + 1
                    work += 12 + start[v + 1] - start[v]
                    relabels += 1
                    cnt[old] -= 1
                    if cnt[old] == 0:
                        # gap: nothing above old can reach the target any more
                        for u in range(n):
                            if old < d[u] < n:
                                cnt[d[u]] -= 1
                                d[u] = n
                        newd = n
                    if newd >= n:
                        d[v] = n
                        break
                    d[v] = newd
                    cnt[newd] += 1
                    cur[v] = start[v]
                    if work > threshold:
                        # requeue and refresh labels globally
                        link[v] = bucket[newd]
                        bucket[newd] = v
                        restart = True
                        break
                else:
                    e = cur[v]
                    u = head[e]
                    if res[e] > tol and d[u] == d[v] - 1:
                        delta = excess[v] if excess[v] < res[e] else res[e]
                        res[e] -= delta
                        res[rev[e]] += delta
                        excess[v] -= delta
                        if excess[u] <= tol and u != target and u != blocked:
                            link[u] = bucket[d[u]]
                            bucket[d[u]] = u
                            if d[u] > dmax:
                                dmax = d[u]
                        excess[u] += delta
                    else:
                        cur[v] += 1
        if not restart:
            return relabels


@numba.njit(cache=True)
def _push_relabel(n, start, head, res, rev, s, t, tol):
    excess = np.zeros(n, dtype=res.dtype)
    for e in range(start[s], start[s + 1]):
        delta = res[e]
        if delta > 0:
            res[e] = 0
            res[rev[e]] += delta
            excess[head[e]] += delta
    _discharge_all(n, start, head, res, rev, excess, t, s, tol)
    flow = excess[t]
    # return stranded excess so the residual graph is that of a true flow
    _discharge_all(n, start, head, res, rev, excess, s, t, tol)
    return flow


@numba.njit(cache=True)
def _reach_forward(n, start, head, res, s, tol):
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    seen[s] = True
    queue[0] = s
    qh = 0
    qt = 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for e in range(start[u], start[u + 1]):
            v = head[e]
            if not seen[v] and res[e] > tol:
                seen[v] = True
                queue[qt] = v
                qt += 1
    return seen


@numba.njit(cache=True)
def _reach_backward(n, start, head, res, rev, t, tol):
    # nodes that can still push to t in the residual graph
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    seen[t] = True
    queue[0] = t
    qh = 0
    qt = 1
    while qh < qt:
        v = queue[qh]
        qh += 1
        for e in range(start[v], start[v + 1]):
            u = head[e]
            if not seen[u] and res[rev[e]] > tol:
                seen[u] = True
                queue[qt] = u
                qt += 1
    return seen


class FlowNetwork:
    """Directed network with a source and a sink.

    >>> net = FlowNetwork(3, source=0, sink=2)
    >>> net.add_arc(0, 1, 1.0)
    >>> net.add_arc(1, 2, 1.0)
    >>> net.max_flow()
    1.0
    >>> sorted(net.min_cut_max_side().source_side)
    [0, 1]
    """

    def __init__(self, node_count: int, source: int, sink: int, integral: bool = False):
        if source == sink:
            raise ValueError("source and sink must differ")
        for node in (source, sink):
            if not 0 <= node < node_count:
                raise ValueError("terminal node out of range")
        self.node_count = int(node_count)
        self.source = int(source)
        self.sink = int(sink)
        self.integral = bool(integral)
        self._dtype = np.int64 if integral else np.float64
        self._tails: list[np.ndarray] = []
        self._heads: list[np.ndarray] = []
        self._caps: list[np.ndarray] = []
        self._inf: list[np.ndarray] = []
        self._solved = None

    # construction ------------------------------------------------------

    def add_arc(self, tail: int, head: int, capacity) -> None:
        if capacity == np.inf:
            self.add_arcs([tail], [head], 0, infinite=True)
        else:
            self.add_arcs([tail], [head], [capacity])

    def add_arcs(self, tails, heads, capacities, infinite: bool = False) -> None:
        """Append arcs in bulk; with ``infinite=True`` capacities are ignored."""
        tails = np.asarray(tails, dtype=np.int64).ravel()
        heads = np.asarray(heads, dtype=np.int64).ravel()
        if tails.shape != heads.shape:
            raise ValueError("tails and heads differ in length")
        if tails.size and (
            min(tails.min(), heads.min()) < 0 or max(tails.max(), heads.max()) >= self.node_count
        ):
            raise ValueError("arc endpoint out of range")
        if infinite:
            caps = np.zeros(tails.size, dtype=self._dtype)
        else:
            caps = np.broadcast_to(np.asarray(capacities), tails.shape)
            if self.integral:
                if np.any(np.asarray(caps) != np.round(caps)):
                    raise ValueError("integral network needs integer capacities")
                caps = np.asarray(caps).astype(np.int64)
            else:
                caps = np.asarray(caps, dtype=np.float64)
                if not np.all(np.isfinite(caps)):
                    raise ValueError("use infinite=True for unbounded arcs")
            if np.any(caps < 0):
                raise ValueError("negative capacity")
        self._tails.append(tails)
        self._heads.append(heads)
        self._caps.append(np.array(caps, dtype=self._dtype))
        self._inf.append(np.full(tails.size, infinite, dtype=bool))
        self._solved = None

    @property
    def arc_count(self) -> int:
        return sum(t.size for t in self._tails)

    def arcs(self):
        """Concatenated ``(tails, heads, capacities, infinite_mask)``."""
        if not self._tails:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0, dtype=self._dtype), np.zeros(0, dtype=bool)
        return (
            np.concatenate(self._tails),
            np.concatenate(self._heads),
            np.concatenate(self._caps),
            np.concatenate(self._inf),
        )

    @property
    def big(self):
        """Capacity used for infinite arcs.

        It exceeds some finite cut, so no minimum cut ever crosses an
        infinite arc. The cheapest known finite cut is taken among all
        finite arcs, the arcs leaving the source, and the arcs entering the
        sink (the last two only when none of them is infinite).
        """
        tails, heads, caps, inf = self.arcs()
        if self.integral:
            caps = caps.astype(object)
        bounds = [caps[~inf].sum() if caps.size else 0]
        for mask in (tails == self.source, heads == self.sink):
            if not np.any(inf & mask):
                bounds.append(caps[mask].sum() if np.any(mask) else 0)
        best = min(bounds)
        return int(best) + 1 if self.integral else float(best) + 1.0

    def fits_int64(self) -> bool:
        """Whether an integral solve stays clear of int64 overflow.

        Every source arc is saturated up front, so excesses and residuals are
        bounded by ``(out-degree of source + 1) * BIG``.
        """
        tails = self.arcs()[0]
        fan_out = int(np.count_nonzero(tails == self.source))
        return (fan_out + 2) * self.big < _INT_LIMIT

    def capacities(self) -> np.ndarray:
        _, _, caps, inf = self.arcs()
        big = self.big
        if self.integral and not self.fits_int64():
            raise OverflowError("capacities too large for exact integer mode")
        caps = caps.copy()
        caps[inf] = big
        return caps

    # solving -----------------------------------------------------------

    def max_flow(self, method: str = "push-relabel"):
        """Run max-flow; returns the flow value and keeps the residual graph.

        ``method`` is ``"push-relabel"`` (default) or ``"dinic"``.
        """
        if method not in ("push-relabel", "dinic"):
            raise ValueError(f"unknown max-flow method {method!r}")
        tails, heads, _, _ = self.arcs()
        caps = self.capacities()
        n_arcs = tails.size
        both_tail = np.empty(2 * n_arcs, dtype=np.int64)
        both_head = np.empty(2 * n_arcs, dtype=np.int64)
        both_tail[0::2] = tails
        both_tail[1::2] = heads
        both_head[0::2] = heads
        both_head[1::2] = tails
        res = np.zeros(2 * n_arcs, dtype=self._dtype)
        res[0::2] = caps

        order = np.argsort(both_tail, kind="stable")
        pos = np.empty_like(order)
        pos[order] = np.arange(order.size)
        head = both_head[order]
        res = res[order]
        partner = np.arange(2 * n_arcs) ^ 1
        rev = pos[partner[order]]
        start = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(both_tail, minlength=self.node_count), out=start[1:])

        if self.integral:
            tol = np.int64(0)
        else:
            tol = self._tolerance(caps[~np.concatenate(self._inf)] if n_arcs else caps)
        if n_arcs == 0:
            flow = self._dtype(0)
        else:
            solver = _push_relabel if method == "push-relabel" else _dinic
            flow = solver(self.node_count, start, head, res, rev, self.source, self.sink, tol)
        self._solved = (start, head, res, rev, tol, order, n_arcs)
        self._flow = flow.item() if hasattr(flow, "item") else flow
        return self._flow

    @staticmethod
    def _tolerance(finite: np.ndarray) -> float:
        # relative to the largest capacity, but never above a small fraction
        # of the smallest positive one, so tiny arcs are not read as saturated
        positive = finite[finite > 0]
        if positive.size == 0:
            return 0.0
        return min(REL_TOL * float(positive.max()), MIN_CAP_TOL * float(positive.min()))

    def _residual(self):
        if self._solved is None:
            raise RuntimeError("residual unavailable")
        return self._solved

    def arc_flows(self) -> np.ndarray:
        """Flow on each original arc, in insertion order."""
        start, head, res, rev, tol, order, n_arcs = self._residual()
        back = np.empty_like(res)
        back[order] = res
        return back[1::2]

    def min_cut_min_side(self) -> CutResult:
        """Source side = nodes reachable from the source in the residual graph."""
        start, head, res, rev, tol, _, _ = self._residual()
        seen = _reach_forward(self.node_count, start, head, res, self.source, tol)
        return CutResult(self._flow, frozenset(np.flatnonzero(seen).tolist()))

    def min_cut_max_side(self) -> CutResult:
        """Source side = nodes that cannot reach the sink in the residual graph."""
        start, head, res, rev, tol, _, _ = self._residual()
        seen = _reach_backward(self.node_count, start, head, res, rev, self.sink, tol)
        return CutResult(self._flow, frozenset(np.flatnonzero(~seen).tolist()))

    def cut_capacity(self, source_side) -> float:
        """Capacity of the arcs leaving ``source_side``, BIG arcs included."""
        tails, heads, _, _ = self.arcs()
        caps = self.capacities()
        inside = np.zeros(self.node_count, dtype=bool)
        inside[list(source_side)] = True
        crossing = inside[tails] & ~inside[heads]
        total = caps[crossing].sum()
        return total.item() if hasattr(total, "item") else total
