"""Exact brute-force oracles: the ground truth the rest of the code is tested by.

Every search is deliberately naive branch-and-bound with sound bounds, exact
rational costs, and deterministic tie-breaking.  Unless stated otherwise ties
go to the lexicographically least sorted vertex (or edge) tuple, realized by
ascending include-first depth-first search that only accepts strict
improvements.  Each returned solution is re-validated by an independent
feasibility check before being handed back.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .caps import VERTEX_CAP, check_enum
from .errors import CapExceeded, InfeasibleError, PatternSearchTimeout
from .graph import Graph, Hypergraph, Weight, WeightedDigraph


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _check_vertex_cap(g: Graph) -> None:
    if g.n > VERTEX_CAP:
        raise CapExceeded(f"oracle limited to {VERTEX_CAP} vertices, got {g.n}")


# -- cliques -------------------------------------------------------------------


def _color_bound(rows: Sequence[int], candidates: int) -> int:
    """Greedy proper coloring of the candidate subgraph; class count bounds
    any clique inside it."""
    colors = 0
    remaining = candidates
    while remaining:
        colors += 1
        avail = remaining
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            remaining ^= low
            avail &= ~rows[v]
            avail ^= low
    return colors


def max_clique(g: Graph) -> tuple[int, ...]:
    """Lexicographically least maximum clique."""
    _check_vertex_cap(g)
    rows = [g.row(u) for u in range(g.n)]
    best: list[int] = []

    def dfs(clique: list[int], candidates: int) -> None:
        nonlocal best
        if len(clique) + _color_bound(rows, candidates) <= len(best):
            return
        for v in _bits(candidates):
            higher = ~((1 << (v + 1)) - 1)
            nxt = candidates & rows[v] & higher
            clique.append(v)
            if len(clique) > len(best):
                best = clique.copy()
            if nxt:
                dfs(clique, nxt)
            clique.pop()
            candidates &= ~(1 << v)
            if len(clique) + _color_bound(rows, candidates) <= len(best):
                return

    if g.n:
        dfs([], (1 << g.n) - 1)
        if not best:
            best = [0]  # single vertex is a clique in a non-empty graph
    result = tuple(best)
    assert g.is_clique(result)
    return result


def clique_number(g: Graph) -> int:
    return len(max_clique(g)) if g.n else 0


def _clique_dfs(rows: Sequence[int], n: int, r: int, collect: list | None) -> int:
    """Count r-cliques; optionally collect them in lexicographic order."""
    count = 0

    def rec(prefix: list[int], candidates: int, depth: int) -> None:
        nonlocal count
        if depth == r:
            count += 1
            if collect is not None:
                collect.append(tuple(prefix))
            return
        for v in _bits(candidates):
            higher = ~((1 << (v + 1)) - 1)
            nxt = candidates & rows[v] & higher
            if bin(nxt).count("1") < r - depth - 1:
                continue
            prefix.append(v)
            rec(prefix, nxt, depth + 1)
            prefix.pop()

    if r == 0:
        if collect is not None:
            collect.append(())
        return 1
    rec([], (1 << n) - 1, 0)
    return count


def count_cliques(g: Graph, r: int) -> int:
    """Number of r-subsets inducing a clique."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > g.n:
        return 0
    check_enum(math.comb(g.n, r), f"{r}-clique enumeration")
    return _clique_dfs([g.row(u) for u in range(g.n)], g.n, r, None)


def clique_list(g: Graph, r: int) -> list[tuple[int, ...]]:
    """All r-cliques in lexicographic order."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > g.n:
        return []
    check_enum(math.comb(g.n, r), f"{r}-clique enumeration")
    out: list[tuple[int, ...]] = []
    _clique_dfs([g.row(u) for u in range(g.n)], g.n, r, out)
    return out


# -- densest small subgraphs ----------------------------------------------------


def densest_k_subgraph(g: Graph, k: int) -> tuple[tuple[int, ...], int]:
    """Exact maximizer of induced edges over k-subsets, lex-least witness."""
    if not 1 <= k <= g.n:
        raise ValueError(f"need 1 <= k <= {g.n}, got {k}")
    _check_vertex_cap(g)
    check_enum(math.comb(g.n, k), "k-subset search")
    rows = [g.row(u) for u in range(g.n)]
    best_set: tuple[int, ...] | None = None
    best_edges = -1

    def dfs(chosen: list[int], mask: int, edges: int, start: int) -> None:
        nonlocal best_set, best_edges
        if len(chosen) == k:
            if edges > best_edges:
                best_edges = edges
                best_set = tuple(chosen)
            return
        r = k - len(chosen)
        pool = list(range(start, g.n))
        if len(pool) < r:
            return
        gains = sorted((bin(rows[v] & mask).count("1") for v in pool), reverse=True)
        bound = edges + sum(gains[:r]) + r * (r - 1) // 2
        if bound <= best_edges:
            return
        for v in pool:
            add = bin(rows[v] & mask).count("1")
            chosen.append(v)
            dfs(chosen, mask | (1 << v), edges + add, v + 1)
            chosen.pop()
            # after excluding v the bound can only drop; recompute lazily
            r2 = k - len(chosen)
            if g.n - (v + 1) < r2:
                return
            gains = sorted(
                (bin(rows[w] & mask).count("1") for w in range(v + 1, g.n)),
                reverse=True,
            )
            if edges + sum(gains[:r2]) + r2 * (r2 - 1) // 2 <= best_edges:
                return

    dfs([], 0, 0, 0)
    assert best_set is not None
    recount = g.induced(best_set).m
    assert recount == best_edges
    return best_set, best_edges


def _den_leq4_closed_form(g: Graph, k: int) -> Fraction:
    """Exact max of |E[S]|/|S| over |S| <= k for k <= 4119, via case analysis.

    Densities realizable on at most 4 vertices order as
    3/2 (K4) > 5/4 (K4 minus an edge) > 1 (triangle, or 4-cycle) >
    3/4 (3 edges on 4 vertices) > 2/3 (path on 3) > 1/2 (edge) > 0,
    and each case reduces to a degree or common-neighbor test.
    """
    if g.m == 0:
        return Fraction(0)
    if k == 1:
        return Fraction(0)
    if k == 2:
        return Fraction(1, 2)
    adj = g.to_bool_matrix()
    deg = adj.sum(axis=1)
    common = (adj.astype(np.int64) @ adj.astype(np.int64)).astype(np.int64)
    has_triangle = bool((common[adj] >= 1).any())
    if k == 3:
        if has_triangle:
            return Fraction(1)
        if int(deg.max(initial=0)) >= 2:
            return Fraction(2, 3)
        return Fraction(1, 2)
    # k >= 4 adds nothing beyond 4-vertex patterns: a denser 5..k-vertex
    # subgraph would contain one of the 4-vertex cases of density >= its own.
    rich = np.argwhere(np.triu(common >= 2, 1) & adj)
    for u, v in rich:
        both = np.nonzero(adj[u] & adj[v])[0]
        sub = adj[np.ix_(both, both)]
        if sub.any():
            return Fraction(3, 2)  # K4: adjacent pair with an adjacent common pair
    if len(rich):
        return Fraction(5, 4)  # diamond
    if has_triangle or bool(np.triu(common >= 2, 1).any()):
        return Fraction(1)  # triangle or 4-cycle
    if int(deg.max(initial=0)) >= 3:
        return Fraction(3, 4)  # star on 4 vertices
    ends = np.argwhere(np.triu(adj, 1))
    for u, v in ends:
        if deg[u] >= 2 and deg[v] >= 2:
            return Fraction(3, 4)  # path on 4 vertices (no triangle/C4 here)
    if int(deg.max(initial=0)) >= 2:
        return Fraction(2, 3)
    return Fraction(1, 2)


def den_leq_k(g: Graph, k: int) -> Fraction:
    """Exact max over non-empty S, |S| <= k, of |E[S]| / |S|."""
    if not 1 <= k:
        raise ValueError("k must be positive")
    k = min(k, g.n)
    if k == 0:
        raise ValueError("graph is empty")
    if k <= 4:
        value = _den_leq4_closed_form(g, k)
    else:
        value = Fraction(0)
        for s in range(1, k + 1):
            _, edges = densest_k_subgraph(g, s)
            value = max(value, Fraction(edges, s))
    return value


# -- bicliques -------------------------------------------------------------------


def is_biclique(g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    """Disjoint sides, every cross pair adjacent."""
    sa, sb = set(a), set(b)
    if sa & sb:
        return False
    return all(g.has_edge(u, v) for u in sa for v in sb)


def _find_balanced_biclique(g: Graph, t: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Lex-least side A of size t with |common(A)| >= t, B = least t common."""
    rows = [g.row(u) for u in range(g.n)]
    full = (1 << g.n) - 1
    result: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def dfs(chosen: list[int], common: int, start: int) -> bool:
        nonlocal result
        if len(chosen) == t:
            members = _bits(common)[:t]
            result = (tuple(chosen), tuple(members))
            return True
        for v in range(start, g.n):
            if g.n - v < t - len(chosen):
                return False
            nxt = common & rows[v]
            if bin(nxt).count("1") < t:
                continue
            chosen.append(v)
            if dfs(chosen, nxt, v + 1):
                return True
            chosen.pop()
        return False

    if t == 0:
        return ((), ())
    return result if dfs([], full, 0) else None


def max_balanced_biclique(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Largest (A, B) with |A| = |B|, disjoint, all cross pairs adjacent.

    Sides need not be independent sets.  The first maximum in ascending
    include-first order is returned, which makes A the lex-least side.
    """
    _check_vertex_cap(g)
    best: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
    t = 1
    while 2 * t <= g.n:
        found = _find_balanced_biclique(g, t)
        if found is None:
            break
        best = found
        t += 1
    assert is_biclique(g, best[0], best[1])
    assert len(best[0]) == len(best[1])
    return best


def count_bicliques(g: Graph, ell: int) -> int:
    """Sum over ell-subsets S of C(|common neighborhood of S|, ell).

    This is the ordered-pair biclique count: (S, T) and (T, S) are distinct.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell > g.n:
        return 0
    check_enum(math.comb(g.n, ell), "biclique side enumeration")
    rows = [g.row(u) for u in range(g.n)]
    full = (1 << g.n) - 1
    total = 0

    def dfs(depth: int, common: int, start: int) -> None:
        nonlocal total
        if depth == ell:
            c = bin(common).count("1")
            if c >= ell:
                total += math.comb(c, ell)
            return
        for v in range(start, g.n):
            if g.n - v < ell - depth:
                return
            nxt = common & rows[v]
            # the common set only shrinks along a branch; C(<ell, ell) = 0
            if bin(nxt).count("1") < ell:
                continue
            dfs(depth + 1, nxt, v + 1)

    dfs(0, full, 0)
    return total


def contains_ktt(g: Graph, t: int) -> bool:
    """True iff some t-set has at least t common neighbors (subgraph K_{t,t})."""
    if t < 1:
        raise ValueError("t must be positive")
    if 2 * t > g.n:
        return False
    check_enum(math.comb(g.n, t), "biclique side enumeration")
    rows = [g.row(u) for u in range(g.n)]
    full = (1 << g.n) - 1

    def dfs(depth: int, common: int, start: int) -> bool:
        if depth == t:
            return True
        for v in range(start, g.n):
            if g.n - v < t - depth:
                return False
            nxt = common & rows[v]
            if bin(nxt).count("1") < t:
                continue
            if dfs(depth + 1, nxt, v + 1):
                return True
        return False

    return dfs(0, full, 0)


# -- smallest k-edge subgraph ------------------------------------------------------


def smallest_k_edge_subgraph(g: Graph, k: int) -> tuple[int, ...]:
    """Minimum-cardinality S inducing at least k edges, lex-least at that size."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return ()
    if g.m < k:
        raise InfeasibleError(f"graph has {g.m} < {k} edges")
    _check_vertex_cap(g)
    rows = [g.row(u) for u in range(g.n)]

    def attempt(size: int) -> tuple[int, ...] | None:
        check_enum(math.comb(g.n, size), "subset search")

        def dfs(chosen: list[int], mask: int, edges: int, start: int):
            if len(chosen) == size:
                return tuple(chosen) if edges >= k else None
            r = size - len(chosen)
            pool = list(range(start, g.n))
            if len(pool) < r:
                return None
            gains = sorted(
                (bin(rows[v] & mask).count("1") for v in pool), reverse=True
            )
            if edges + sum(gains[:r]) + r * (r - 1) // 2 < k:
                return None
            for v in pool:
                add = bin(rows[v] & mask).count("1")
                chosen.append(v)
                hit = dfs(chosen, mask | (1 << v), edges + add, v + 1)
                chosen.pop()
                if hit is not None:
                    return hit
            return None

        return dfs([], 0, 0, 0)

    lo = 2
    while math.comb(lo, 2) < k:
        lo += 1
    for size in range(lo, g.n + 1):
        hit = attempt(size)
        if hit is not None:
            assert g.induced(hit).m >= k
            return hit
    raise InfeasibleError("unreachable: whole vertex set must induce >= k edges")


# -- Steiner k-forest -----------------------------------------------------------


@dataclass(frozen=True)
class SteinerForestInstance:
    """Edge-weighted graph with demand pairs; connect at least k of them."""

    graph: Graph
    weights: tuple[Fraction, ...]  # aligned with graph.edges()
    demands: tuple[tuple[int, int], ...]
    k: int

    def __post_init__(self) -> None:
        edges = self.graph.edges()
        if len(self.weights) != len(edges):
            raise ValueError("need exactly one weight per edge")
        object.__setattr__(
            self, "weights", tuple(Fraction(w) for w in self.weights)
        )
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        norm = []
        for s, t in self.demands:
            if not (0 <= s < self.graph.n and 0 <= t < self.graph.n):
                raise ValueError(f"demand ({s}, {t}) out of range")
            norm.append((int(s), int(t)))
        object.__setattr__(self, "demands", tuple(norm))
        if not 0 <= self.k <= len(self.demands):
            raise ValueError(f"need 0 <= k <= {len(self.demands)}")

    def weight_of(self, edge: tuple[int, int]) -> Fraction:
        return self.weights[self.graph.edges().index(edge)]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def satisfied_demands(
    n: int, edges: Iterable[tuple[int, int]], demands: Sequence[tuple[int, int]]
) -> int:
    uf = _UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    return sum(1 for s, t in demands if uf.find(s) == uf.find(t))


def steiner_k_forest(
    inst: SteinerForestInstance,
) -> tuple[tuple[tuple[int, int], ...], Fraction]:
    """Cheapest edge set connecting at least k demand pairs.

    Ties: minimum cost, then fewest edges, then lex-least edge tuple.
    """
    if inst.k == 0:
        return (), Fraction(0)
    edges = inst.graph.edges()
    n = inst.graph.n
    if satisfied_demands(n, edges, inst.demands) < inst.k:
        raise InfeasibleError(
            f"even the full graph connects fewer than {inst.k} demand pairs"
        )
    check_enum(1 << min(len(edges), 62), "edge subset search")
    m = len(edges)
    best_cost: Fraction | None = None
    best_size = 0
    best_set: tuple[tuple[int, int], ...] = ()

    def dfs(idx: int, chosen: list[int], cost: Fraction) -> None:
        nonlocal best_cost, best_size, best_set
        if best_cost is not None and (
            cost > best_cost or (cost == best_cost and len(chosen) >= best_size)
        ):
            return
        if satisfied_demands(n, (edges[i] for i in chosen), inst.demands) >= inst.k:
            best_cost, best_size = cost, len(chosen)
            best_set = tuple(edges[i] for i in chosen)
            return  # supersets cost no less and are strictly larger
        if idx == m:
            return
        avail = chosen + list(range(idx, m))
        if satisfied_demands(n, (edges[i] for i in avail), inst.demands) < inst.k:
            return
        chosen.append(idx)
        dfs(idx + 1, chosen, cost + inst.weights[idx])
        chosen.pop()
        dfs(idx + 1, chosen, cost)

    dfs(0, [], Fraction(0))
    assert best_cost is not None
    assert satisfied_demands(n, best_set, inst.demands) >= inst.k
    assert sum((inst.weight_of(e) for e in best_set), Fraction(0)) == best_cost
    return best_set, best_cost


# -- directed Steiner network ------------------------------------------------------


@dataclass(frozen=True)
class DsnInstance:
    """Arc-weighted digraph with ordered reachability demands, all required."""

    digraph: WeightedDigraph
    demands: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        norm = []
        for s, t in self.demands:
            if not (0 <= s < self.digraph.n and 0 <= t < self.digraph.n):
                raise ValueError(f"demand ({s}, {t}) out of range")
            norm.append((int(s), int(t)))
        object.__setattr__(self, "demands", tuple(norm))


def _reachable(n: int, out: Sequence[Sequence[int]], src: int) -> set[int]:
    seen = {src}
    frontier = [src]
    while frontier:
        u = frontier.pop()
        for v in out[u]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return seen


def _arcs_satisfy(n: int, arcs: Iterable[tuple[int, int]], demands) -> bool:
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        out[u].append(v)
    cache: dict[int, set[int]] = {}
    for s, t in demands:
        if s not in cache:
            cache[s] = _reachable(n, out, s)
        if t not in cache[s]:
            return False
    return True


def _witness_paths(
    n: int, arcs: set[tuple[int, int]], demands
) -> set[tuple[int, int]]:
    """Arcs on one deterministic (BFS, ascending neighbor) path per demand."""
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(arcs):
        out[u].append(v)
    used: set[tuple[int, int]] = set()
    for s, t in demands:
        parent: dict[int, int] = {s: -1}
        queue = [s]
        qi = 0
        while qi < len(queue) and t not in parent:
            u = queue[qi]
            qi += 1
            for v in out[u]:
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        cur = t
        while parent[cur] != -1:
            used.add((parent[cur], cur))
            cur = parent[cur]
    return used


def directed_steiner_network(
    inst: DsnInstance,
) -> tuple[tuple[tuple[int, int], ...], Fraction]:
    """Cheapest arc set making every t_i reachable from its s_i.

    Zero-weight arcs are free and thus always available to the search; the
    branch-and-bound runs over positive-weight arcs only.  The returned arc
    set is the chosen positive arcs plus one witness path per demand.
    Ties: minimum cost, then fewest positive arcs, then lex-least arc tuple.
    """
    d = inst.digraph
    n = d.n
    zero = [(u, v) for u, v, w in d.arcs() if w == 0]
    pos = [(u, v, w) for u, v, w in d.arcs() if w > 0]
    if not _arcs_satisfy(n, [(u, v) for u, v, _ in d.arcs()], inst.demands):
        raise InfeasibleError("some demand is unreachable even in the full digraph")
    check_enum(1 << min(len(pos), 62), "arc subset search")

    sources = {s for s, t in inst.demands if s != t}
    sinks = {t for s, t in inst.demands if s != t}
    # The per-endpoint lower bound sums a cheapest outgoing arc for each
    # source and a cheapest incoming arc for each sink; that is only sound
    # when no single paid arc can serve both sides at once.
    direct = any(u in sources and v in sinks for u, v, _ in pos)
    zero_out = {u for u, _ in zero}
    zero_in = {v for _, v in zero}

    def lower_bound(chosen: list[int], idx: int) -> Fraction:
        have_out = zero_out | {pos[i][0] for i in chosen}
        have_in = zero_in | {pos[i][1] for i in chosen}
        need_out = Fraction(0)
        for s in sources:
            if s in have_out:
                continue
            opts = [pos[i][2] for i in range(idx, len(pos)) if pos[i][0] == s]
            if not opts:
                return Fraction(-1)  # dead branch
            need_out += min(opts)
        need_in = Fraction(0)
        for t in sinks:
            if t in have_in:
                continue
            opts = [pos[i][2] for i in range(idx, len(pos)) if pos[i][1] == t]
            if not opts:
                return Fraction(-1)
            need_in += min(opts)
        return max(need_out, need_in) if direct else need_out + need_in

    best_cost: Fraction | None = None
    best_size = 0
    best_chosen: tuple[int, ...] = ()

    def dfs(idx: int, chosen: list[int], cost: Fraction) -> None:
        nonlocal best_cost, best_size, best_chosen
        lb = lower_bound(chosen, idx)
        if lb < 0:
            return
        if best_cost is not None and (
            cost + lb > best_cost
            or (cost + lb == best_cost and cost == best_cost and len(chosen) >= best_size)
        ):
            return
        arcs_now = zero + [(pos[i][0], pos[i][1]) for i in chosen]
        if _arcs_satisfy(n, arcs_now, inst.demands):
            if (
                best_cost is None
                or cost < best_cost
                or (cost == best_cost and len(chosen) < best_size)
            ):
                best_cost, best_size = cost, len(chosen)
                best_chosen = tuple(chosen)
            return
        if idx == len(pos):
            return
        rest = arcs_now + [(pos[i][0], pos[i][1]) for i in range(idx, len(pos))]
        if not _arcs_satisfy(n, rest, inst.demands):
            return
        chosen.append(idx)
        dfs(idx + 1, chosen, cost + pos[idx][2])
        chosen.pop()
        dfs(idx + 1, chosen, cost)

    dfs(0, [], Fraction(0))
    assert best_cost is not None
    chosen_arcs = {(pos[i][0], pos[i][1]) for i in best_chosen}
    usable = set(zero) | chosen_arcs
    witness = _witness_paths(n, usable, inst.demands)
    solution = tuple(sorted(chosen_arcs | witness))
    assert _arcs_satisfy(n, solution, inst.demands)
    recost = sum((d.weight(u, v) for u, v in solution), Fraction(0))
    assert recost == best_cost
    return solution, best_cost


# -- densest k-subhypergraph ---------------------------------------------------------


def densest_k_subhypergraph(
    h: Hypergraph, k: int
) -> tuple[tuple[int, ...], int]:
    """k-subset containing the most hyperedges entirely; lex-least witness."""
    if not 1 <= k <= h.n:
        raise ValueError(f"need 1 <= k <= {h.n}, got {k}")
    check_enum(math.comb(h.n, k), "k-subset search")
    masks = []
    for e in h.edges:
        m = 0
        for v in e:
            m |= 1 << v
        masks.append(m)
    small = [m for m in masks if bin(m).count("1") <= k]
    best_set: tuple[int, ...] | None = None
    best_count = -1

    def dfs(chosen: list[int], mask: int, start: int) -> None:
        nonlocal best_set, best_count
        if len(chosen) == k:
            count = sum(1 for m in small if m & ~mask == 0)
            if count > best_count:
                best_count = count
                best_set = tuple(chosen)
            return
        r = k - len(chosen)
        # bound: hyperedges still coverable given the remaining free slots
        pool_mask = mask | (((1 << h.n) - 1) >> start << start)
        possible = sum(1 for m in small if m & ~pool_mask == 0)
        if possible <= best_count:
            return
        for v in range(start, h.n):
            if h.n - v < r:
                return
            chosen.append(v)
            dfs(chosen, mask | (1 << v), v + 1)
            chosen.pop()

    dfs([], 0, 0)
    assert best_set is not None
    recount = len(h.edges_inside(best_set))
    assert recount == best_count
    return best_set, best_count


# -- pattern detection -----------------------------------------------------------


def detect_pattern(
    g: Graph, h: Graph, induced: bool, budget_ms: int | None = None
) -> tuple[int, ...] | None:
    """Injective map from h's vertices into g witnessing a copy of h.

    Non-induced: h-edges must map to g-edges.  Induced: h-non-edges must map
    to g-non-edges as well.  Returns the mapping as a tuple indexed by h's
    vertices, or None when no copy exists.  A budget overrun raises instead
    of returning None: absence was not established.
    """
    if h.n > g.n:
        return None
    if h.n == 0:
        return ()
    deadline = None if budget_ms is None else time.monotonic() + budget_ms / 1000.0
    # static order: h-vertices by descending degree, index as tie-break
    order = sorted(range(h.n), key=lambda v: (-h.degree(v), v))
    assign: dict[int, int] = {}
    used: set[int] = set()

    def ok(hv: int, gv: int) -> bool:
        if g.degree(gv) < h.degree(hv):
            return False
        for hu, gu in assign.items():
            he = h.has_edge(hv, hu)
            ge = g.has_edge(gv, gu)
            if he and not ge:
                return False
            if induced and not he and ge:
                return False
        return True

    def dfs(depth: int) -> bool:
        if deadline is not None and time.monotonic() > deadline:
            raise PatternSearchTimeout(
                f"pattern search exceeded {budget_ms} ms; absence was NOT established"
            )
        if depth == h.n:
            return True
        hv = order[depth]
        for gv in range(g.n):
            if gv in used or not ok(hv, gv):
                continue
            assign[hv] = gv
            used.add(gv)
            if dfs(depth + 1):
                return True
            del assign[hv]
            used.remove(gv)
        return False

    if not dfs(0):
        return None
    mapping = tuple(assign[v] for v in range(h.n))
    assert len(set(mapping)) == h.n
    for u in range(h.n):
        for v in range(u + 1, h.n):
            if h.has_edge(u, v):
                assert g.has_edge(mapping[u], mapping[v])
            elif induced:
                assert not g.has_edge(mapping[u], mapping[v])
    return mapping
