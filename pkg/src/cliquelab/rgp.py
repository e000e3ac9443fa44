"""Randomized graph product, its parameter calculator, and family checks.

A product instance is defined by a family of N vertex subsets of the source
graph, each the deduplicated result of ell uniform draws with replacement.
Product vertices i and j are adjacent exactly when the union of their subsets
induces a clique in the source.  Construction is vectorized over packed
64-bit words; an independent checker re-derives every edge decision through
a different formulation (counting forbidden pairs by matrix products).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .caps import MATERIALIZE_CAP, check_enum
from .ensembles import Seed, as_fraction, as_seed, uniform_subset
from .errors import CapExceeded
from .exactmath import (
    SLOW_BIT_CAP,
    approx_log2_fraction,
    ceil_frac_log2,
    ceil_pow_product,
    compare_pow,
    exact_log2,
)
from .graph import Graph


def _word_count(n: int) -> int:
    return max(1, (n + 63) // 64)


def _int_to_words(mask: int, words: int) -> np.ndarray:
    return np.frombuffer(mask.to_bytes(words * 8, "little"), dtype=np.uint64)


@dataclass(frozen=True)
class SubsetFamily:
    """N subsets of the source vertex set, each from ell draws with replacement."""

    source_n: int
    ell: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.source_n < 1:
            raise ValueError("source_n must be positive")
        if self.ell < 1:
            raise ValueError("ell must be positive")
        for s in self.sets:
            if not 1 <= len(s) <= self.ell:
                raise ValueError(f"set {s} has size outside 1..{self.ell}")
            if list(s) != sorted(set(s)):
                raise ValueError(f"set {s} is not sorted and deduplicated")
            if s[0] < 0 or s[-1] >= self.source_n:
                raise ValueError(f"set {s} out of range for n={self.source_n}")

    @property
    def N(self) -> int:
        return len(self.sets)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        out = []
        for s in self.sets:
            m = 0
            for u in s:
                m |= 1 << u
            out.append(m)
        return tuple(out)

    def member_words(self) -> np.ndarray:
        w = _word_count(self.source_n)
        arr = np.empty((self.N, w), dtype=np.uint64)
        for i, mask in enumerate(self.masks):
            arr[i] = _int_to_words(mask, w)
        return arr


def sample_family(
    n: int, N: int, ell: int, seed: int | Seed, index: int = 0
) -> SubsetFamily:
    """Draw N subsets, each the set of ell uniform vertex draws."""
    if n < 1 or N < 1 or ell < 1:
        raise ValueError("need n >= 1, N >= 1, ell >= 1")
    rng = as_seed(seed).stream("rgp-family", index)
    draws = rng.integers(0, n, size=(N, ell))
    sets = tuple(tuple(sorted(set(row))) for row in draws.tolist())
    return SubsetFamily(source_n=n, ell=ell, sets=sets)


def product_edge(g: Graph, fam: SubsetFamily, i: int, j: int) -> bool:
    """The defining rule, evaluated literally for one index pair."""
    if i == j:
        return False
    union = set(fam.sets[i]) | set(fam.sets[j])
    return g.is_clique(union)


def _common_allowed_words(g: Graph, fam: SubsetFamily) -> np.ndarray:
    """Per set, the AND over members u of (N(u) | {u}), packed into words.

    A vertex union U induces a clique iff U is contained in the intersection
    of the closed neighborhoods of its members, which factors over the two
    sets of a pair; this is what makes the pair sweep a pure bit operation.
    """
    n = g.n
    w = _word_count(n)
    allowed = np.empty((n, w), dtype=np.uint64)
    for u in range(n):
        allowed[u] = _int_to_words(g.row(u) | (1 << u), w)
    out = np.empty((fam.N, w), dtype=np.uint64)
    for i, s in enumerate(fam.sets):
        acc = allowed[s[0]].copy()
        for u in s[1:]:
            acc &= allowed[u]
        out[i] = acc
    return out


def product_graph(g: Graph, fam: SubsetFamily) -> Graph:
    """Materialize the product graph for the given family."""
    if fam.source_n != g.n:
        raise ValueError("family was drawn from a different vertex count")
    N = fam.N
    if N > MATERIALIZE_CAP:
        raise CapExceeded(
            f"product on {N} vertices exceeds the materialization cap {MATERIALIZE_CAP}"
        )
    check_enum(N * (N - 1) // 2, "product graph pair sweep")
    member = fam.member_words()
    common = _common_allowed_words(g, fam)
    w = member.shape[1]
    adj = np.zeros((N, N), dtype=bool)
    chunk = max(1, (1 << 23) // max(N, 1))
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        bad = np.zeros((hi - lo, N), dtype=bool)
        for wi in range(w):
            mu = member[lo:hi, wi, None] | member[None, :, wi]
            al = common[lo:hi, wi, None] & common[None, :, wi]
            bad |= (mu & ~al) != 0
        adj[lo:hi] = ~bad
    np.fill_diagonal(adj, False)
    return Graph.from_bool_matrix(adj)


def rgp(
    g: Graph, N: int, ell: int, seed: int | Seed, index: int = 0
) -> tuple[Graph, SubsetFamily]:
    fam = sample_family(g.n, N, ell, seed, index)
    return product_graph(g, fam), fam


@dataclass(frozen=True)
class EdgeRuleReport:
    ok: bool
    pairs_checked: int
    violation_count: int
    sample: tuple[tuple[int, int, bool, bool], ...]  # (i, j, expected, got)


def check_edge_rule(g: Graph, fam: SubsetFamily, product: Graph) -> EdgeRuleReport:
    """Re-derive every product edge decision by an independent formulation.

    For each pair, counts ordered (u, v) with u in one set, v in the union,
    and v outside u's closed neighborhood; the union induces a clique iff the
    count is zero.  The count is assembled from dense matrix products, sharing
    no code with the word-packed construction sweep.
    """
    if fam.source_n != g.n or product.n != fam.N:
        raise ValueError("mismatched source graph, family, or product")
    N, n = fam.N, g.n
    B = np.zeros((N, n), dtype=np.float64)
    for i, s in enumerate(fam.sets):
        B[i, list(s)] = 1.0
    closed = g.to_bool_matrix() | np.eye(n, dtype=bool)
    F = 1.0 - closed.astype(np.float64)
    D = B @ F  # D[i, v] = how many members of set i forbid v
    R = (B * D).sum(axis=1)
    got_full = product.to_bool_matrix()
    violations = 0
    sample: list[tuple[int, int, bool, bool]] = []
    chunk = max(1, (1 << 22) // max(N, 1))
    BD = B * D
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        S = (
            R[lo:hi, None]
            + R[None, :]
            + B[lo:hi] @ D.T
            + D[lo:hi] @ B.T
            - BD[lo:hi] @ B.T
            - B[lo:hi] @ BD.T
        )
        expected = S == 0.0
        idx = np.arange(lo, hi)
        expected[np.arange(hi - lo), idx] = False
        diff = expected != got_full[lo:hi]
        if diff.any():
            for a, b in zip(*np.nonzero(diff)):
                violations += 1
                if len(sample) < 50:
                    i, j = int(a) + lo, int(b)
                    sample.append((i, j, bool(expected[a, b]), bool(got_full[i, j])))
    return EdgeRuleReport(
        ok=violations == 0,
        pairs_checked=N * (N - 1) // 2,
        violation_count=violations // 2,  # symmetric mismatches counted once
        sample=tuple(sample),
    )


def implied_edges(
    fam: SubsetFamily, product_edges: Iterable[tuple[int, int]]
) -> frozenset[tuple[int, int]]:
    """Source edges forced by a set of product edges.

    For a product edge {i, j}, every pair (u, v) with u in set i, v in set j,
    u != v must be a source edge whenever the product edge is genuine.
    """
    out: set[tuple[int, int]] = set()
    for i, j in product_edges:
        si, sj = fam.sets[i], fam.sets[j]
        for u in si:
            for v in sj:
                if u != v:
                    out.add((u, v) if u < v else (v, u))
    return frozenset(out)


# -- parameter calculator -----------------------------------------------------


@dataclass(frozen=True)
class RgpParams:
    """Exact product parameters for a target instance size.

    N_exact is lazy: at realistic settings it is a multi-gigabit integer that
    exists to be compared against, not stored.
    """

    n: int
    delta: Fraction
    k: int
    mode: str
    factor: Fraction
    ell: int
    d: Fraction
    d_is_exact: bool
    side_conditions: tuple[tuple[str, bool], ...]

    @cached_property
    def N_exact(self) -> int:
        return ceil_pow_product(100 * self.k, self.n, (1 - self.delta) * self.ell)

    @property
    def N_log2_approx(self) -> float:
        return math.log2(100 * self.k) + float((1 - self.delta) * self.ell) * math.log2(
            self.n
        )

    def side_condition(self, name: str) -> bool:
        for key, val in self.side_conditions:
            if key == name:
                return val
        raise KeyError(name)


SIDE_CONDITION_NAMES = (
    "N_at_least_10k_pow",
    "N_at_most_1000k_pow",
    "ell_at_least_k",
    "k_ell_at_most_n_pow_099delta",
)


def paper_params(
    n: int, delta, k: int, mode: str = "constant", factor=1
) -> RgpParams:
    """Product parameters from the stated formulas, log base 2 throughout.

    mode "constant" treats factor as the approximation constant C; mode
    "ratio" treats it as the value of the ratio function g at k.  The two
    formulas share one shape, ell = ceil(1e8 * factor * log2(n) / (delta^2 k)),
    N = ceil(100 k n^((1-delta) ell)), d = 1e7 log2(n) / (ell delta^2).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if k < 20:
        raise ValueError("k must be at least 20")
    if mode not in ("constant", "ratio"):
        raise ValueError(f"mode must be 'constant' or 'ratio', got {mode!r}")
    delta = as_fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")
    factor = as_fraction(factor)
    if factor <= 0:
        raise ValueError("factor must be positive")

    coeff = Fraction(10**8) * factor / (delta * delta * k)
    ell = ceil_frac_log2(coeff, n)

    s = exact_log2(n)
    if s is not None:
        d = Fraction(10**7) * s / (ell * delta * delta)
        d_exact = True
    else:
        d = Fraction(10**7) * approx_log2_fraction(n) / (ell * delta * delta)
        d_exact = False

    # The two N range conditions hold by construction:
    # N = ceil(100 k n^e) >= 100 k n^e >= 10 k n^e, and
    # N <= 100 k n^e + 1 <= 1000 k n^e because 900 k n^e >= 1.
    exp2 = Fraction(99, 100) * delta
    cmp = compare_pow(k * ell, exp2.denominator, n, exp2.numerator)
    conditions = (
        (SIDE_CONDITION_NAMES[0], True),
        (SIDE_CONDITION_NAMES[1], True),
        (SIDE_CONDITION_NAMES[2], ell >= k),
        (SIDE_CONDITION_NAMES[3], cmp <= 0),
    )
    return RgpParams(
        n=n,
        delta=delta,
        k=k,
        mode=mode,
        factor=factor,
        ell=ell,
        d=d,
        d_is_exact=d_exact,
        side_conditions=conditions,
    )


def check_side_conditions_exact(
    n: int, delta, k: int, ell: int, N: int
) -> dict[str, bool]:
    """Literal big-integer evaluation of all four side conditions.

    Feasible only when n^((1-delta) ell) fits the slow big-int budget; use it
    on synthetic small-ell parameter tuples, not on formula-scale ones.
    """
    delta = as_fraction(delta)
    e = (1 - delta) * ell
    p, q = e.numerator, e.denominator
    bits = p * n.bit_length() + q * max(N, 1000 * k).bit_length()
    if bits > SLOW_BIT_CAP:
        raise CapExceeded(f"literal check needs ~{bits} bits (cap {SLOW_BIT_CAP})")
    npow = n**p
    exp2 = Fraction(99, 100) * delta
    return {
        SIDE_CONDITION_NAMES[0]: N**q >= (10 * k) ** q * npow,
        SIDE_CONDITION_NAMES[1]: N**q <= (1000 * k) ** q * npow,
        SIDE_CONDITION_NAMES[2]: ell >= k,
        SIDE_CONDITION_NAMES[3]: (k * ell) ** exp2.denominator
        <= n**exp2.numerator,
    }


# -- disperser check ----------------------------------------------------------


@dataclass(frozen=True)
class DisperserReport:
    mode: str
    max_set_size: int
    ok: bool
    violation_count: int
    violations: tuple[tuple[tuple[int, ...], int, Fraction], ...]
    worst_ratio: Fraction | None
    worst_set: tuple[int, ...] | None
    nodes_visited: int


def check_disperser(
    fam: SubsetFamily,
    delta,
    max_set_size: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int | Seed | None = None,
    index: int = 0,
) -> DisperserReport:
    """Find index sets M, |M| <= max_set_size, whose union is dispersion-poor.

    A violation is |union of S_i over M| < delta/100 * |M| * ell.  Exhaustive
    mode proves there are none via depth-first search with a sound prune: a
    partial union already as large as the largest applicable threshold cannot
    shrink, so no extension violates.  The worst-ratio diagnostic is exact for
    |M| in {1, 2} (always swept) and otherwise covers the nodes the search
    actually expanded.
    """
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    N, ell = fam.N, fam.ell
    T = max_set_size
    if not 1 <= T <= N:
        raise ValueError(f"max_set_size must lie in 1..{N}")

    def threshold(t: int) -> Fraction:
        return Fraction(1, 100) * delta * t * ell

    masks = fam.masks
    sizes = [m.bit_count() for m in masks]
    violations: list[tuple[tuple[int, ...], int, Fraction]] = []
    violation_count = 0
    worst_ratio: Fraction | None = None
    worst_set: tuple[int, ...] | None = None
    nodes = 0

    def note(members: tuple[int, ...], union_size: int) -> None:
        nonlocal worst_ratio, worst_set, violation_count
        t = len(members)
        ratio = Fraction(union_size, t * ell)
        if worst_ratio is None or ratio < worst_ratio:
            worst_ratio, worst_set = ratio, members
        if union_size < threshold(t):
            violation_count += 1
            if len(violations) < 100:
                violations.append((members, union_size, threshold(t)))

    # Exact sweep over singletons and pairs for the diagnostic.
    for i in range(N):
        note((i,), sizes[i])
    if T >= 2 and N >= 2:
        words = fam.member_words()
        best_pop = None
        best_pair = None
        chunk = max(1, (1 << 22) // max(N, 1))
        for lo in range(0, N, chunk):
            hi = min(lo + chunk, N)
            pops = np.zeros((hi - lo, N), dtype=np.uint32)
            for wi in range(words.shape[1]):
                pops += np.bitwise_count(
                    words[lo:hi, wi, None] | words[None, :, wi]
                ).astype(np.uint32)
            iu = np.triu_indices(hi - lo, 1 + lo, N)
            block = pops[iu] if iu[0].size else np.empty(0, dtype=np.uint32)
            if block.size:
                pos = int(block.argmin())
                pop = int(block[pos])
                if best_pop is None or pop < best_pop:
                    best_pop = pop
                    best_pair = (int(iu[0][pos]) + lo, int(iu[1][pos]))
        if best_pair is not None:
            note(best_pair, best_pop)
        # Violating pairs (if any) must all be recorded, not just the minimum.
        if best_pop is not None and best_pop < threshold(2):
            for i in range(N):
                for j in range(i + 1, N):
                    pop = (masks[i] | masks[j]).bit_count()
                    if pop < threshold(2) and (i, j) != best_pair:
                        note((i, j), pop)

    if mode == "exhaustive":
        total = sum(math.comb(N, t) for t in range(1, T + 1))
        check_enum(total, "exhaustive disperser sweep")
        thr_max = threshold(T)

        def dfs(start: int, members: list[int], union: int, size: int) -> None:
            nonlocal nodes
            for idx in range(start, N):
                u2 = union | masks[idx]
                s2 = u2.bit_count()
                t2 = len(members) + 1
                nodes += 1
                if t2 > 2:  # depths 1 and 2 already swept exactly
                    note(tuple(members + [idx]), s2)
                if t2 < T and s2 < thr_max:
                    dfs(idx + 1, members + [idx], u2, s2)

        if T > 2:
            for idx in range(N):
                nodes += 1
                if sizes[idx] < thr_max:
                    dfs(idx + 1, [idx], masks[idx], sizes[idx])
        # Depth <= 2 violations were found in the exact sweep above.
    elif mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = as_seed(seed).stream("disperser-sample", index)
        for _ in range(samples):
            t = int(rng.integers(1, T + 1))
            members = uniform_subset(N, t, rng)
            union = 0
            for i in members:
                union |= masks[i]
            nodes += 1
            if t > 2:
                note(members, union.bit_count())
            else:
                # already exact for t <= 2; still counts as a sample
                pass
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")

    violations.sort()
    return DisperserReport(
        mode=mode,
        max_set_size=T,
        ok=violation_count == 0,
        violation_count=violation_count,
        violations=tuple(violations),
        worst_ratio=worst_ratio,
        worst_set=worst_set,
        nodes_visited=nodes,
    )
