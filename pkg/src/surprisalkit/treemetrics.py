"""Structural descriptors of a pruned dependency tree.

Four per-sentence measures: mean hierarchical distance (depth), total
dependency length against its random and optimal baselines (the optimality
ratio), entropy of the subtree-size distribution, and the B2 balance index
over leaf-reaching probabilities.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .conllu import DependencyTree, Document, prune_punctuation


@dataclass
class TreeMetrics:
    n: int
    mhd: float
    d_obs: int
    d_rand: float
    d_min: int | None
    omega: float | None
    sub_unevenness: float
    b2: float
    omega_reason: str | None = None


@dataclass
class TreeMetricsSummary:
    """Per-text arithmetic means; undefined optimality values are skipped."""

    n_sentences: int
    mean_mhd: float
    mean_omega: float | None
    omega_defined_count: int
    mean_sub_unevenness: float
    mean_b2: float


def _depths(tree: DependencyTree) -> list[int]:
    children = tree.children()
    depth = [0] * (len(tree) + 1)
    queue = deque([tree.root])
    while queue:
        v = queue.popleft()
        for c in children[v]:
            depth[c] = depth[v] + 1
            queue.append(c)
    return depth[1:]


def mean_hierarchical_distance(tree: DependencyTree) -> float:
    """Mean root distance over non-root nodes; 0 by convention for n = 1."""
    n = len(tree)
    if n == 1:
        return 0.0
    return sum(_depths(tree)) / (n - 1)


def total_dependency_length(tree: DependencyTree) -> int:
    """Sum of |head position - dependent position| under the observed order."""
    return sum(abs(t.head - t.index) for t in tree.nodes if t.head != 0)


def random_baseline(n: int) -> float:
    """Expected total dependency length under a uniformly random linearization."""
    return (n * n - 1) / 3.0


def _subtree_sizes(tree: DependencyTree) -> list[int]:
    children = tree.children()
    n = len(tree)
    size = [1] * (n + 1)
    order: list[int] = []
    queue = deque([tree.root])
    while queue:
        v = queue.popleft()
        order.append(v)
        queue.extend(children[v])
    for v in reversed(order):
        for c in children[v]:
            size[v] += size[c]
    return size[1:]


def subtree_unevenness(tree: DependencyTree) -> float:
    """Entropy (bits) of subtree sizes normalized into a probability mass."""
    sizes = _subtree_sizes(tree)
    total = sum(sizes)
    return -sum((s / total) * math.log2(s / total) for s in sizes)


def b2_index(tree: DependencyTree, base: float = 2.0) -> float:
    """Entropy of leaf-reaching probabilities under child-uniform descent.

    The default base is 2 so the index is in bits; other bases are accepted
    because conventions differ between implementations.
    """
    children = tree.children()
    prob = {tree.root: 1.0}
    entropy = 0.0
    queue = deque([tree.root])
    log_base = math.log(base)
    while queue:
        v = queue.popleft()
        kids = children[v]
        if not kids:
            p = prob[v]
            entropy -= p * math.log(p) / log_base
            continue
        share = prob[v] / len(kids)
        for c in kids:
            prob[c] = share
            queue.append(c)
    return entropy


class MlaBudgetExceeded(RuntimeError):
    """Exact arrangement search exceeded its node budget."""


def min_linear_arrangement(tree: DependencyTree, max_nodes: int = 64,
                           node_budget: int = 400_000) -> int:
    """Exact minimum total edge length over all linear arrangements of the tree.

    Branch and bound over vertex placements with three prunings: memoized
    prefix dominance (the cost to come depends only on the placed set),
    symmetry reduction over isomorphic sibling subtrees, and a lower bound
    combining open-edge closure scheduling with recursive split bounds on the
    unplaced forest. The arrangement is unconstrained (free), not restricted
    to projective orders. Raises ValueError above ``max_nodes`` and
    MlaBudgetExceeded if the search does not finish within ``node_budget``
    expansions (neither occurs at corpus sentence lengths).
    """
    n = len(tree)
    if n > max_nodes:
        raise ValueError(f"tree has {n} nodes, above the exact-search cap {max_nodes}")
    if n <= 2:
        return n - 1
    adj = [0] * n
    for t in tree.nodes:
        if t.head != 0:
            u, v = t.index - 1, t.head - 1
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return _ArrangementSolver(adj, node_budget).solve((1 << n) - 1)


class _ArrangementSolver:
    """Exact free-arrangement costs of connected vertex subsets of one tree.

    All vertex sets are bitmasks over the tree's 0-based vertices; results are
    cached so that the recursive lower bound reuses solved fragments.
    """

    exact_fragment_cap = 12  # fragments up to this size are bounded exactly

    def __init__(self, adj: list[int], budget: int):
        self.adj = adj
        self.n = len(adj)
        self.budget = budget
        self.exact: dict[int, int] = {}
        self.split: dict[int, int] = {}
        self.forest: dict[int, int] = {}
        # fan(d): minimum total length of d edges meeting at one vertex (1,1,2,2,...)
        self.fan = [0] * (self.n + 1)
        for d in range(1, self.n + 1):
            self.fan[d] = self.fan[d - 1] + (d + 1) // 2

    def _components(self, mask: int) -> list[int]:
        comps = []
        rest = mask
        while rest:
            comp = rest & -rest
            frontier = comp
            while frontier:
                grow = 0
                m = frontier
                while m:
                    low = m & -m
                    grow |= self.adj[low.bit_length() - 1]
                    m ^= low
                frontier = grow & mask & ~comp
                comp |= frontier
            comps.append(comp)
            rest &= ~comp
        return comps

    def _split_bound(self, comp: int) -> int:
        """Recursive lower bound: removing a split vertex leaves subtrees whose
        costs add, plus the split vertex's edges, which have pairwise distinct
        lengths on each side of it (the fan pattern)."""
        size = comp.bit_count()
        if size <= 3:
            return size - 1
        cached = self.split.get(comp)
        if cached is not None:
            return cached
        best_u, best_d = -1, -1
        m = comp
        while m:
            low = m & -m
            u = low.bit_length() - 1
            d = (self.adj[u] & comp).bit_count()
            if d > best_d:
                best_u, best_d = u, d
            m ^= low
        val = self.fan[best_d]
        for sub in self._components(comp & ~(1 << best_u)):
            val += self._split_bound(sub)
        self.split[comp] = val
        return val

    def _forest_bound(self, mask: int) -> int:
        """Lower bound on the internal cost of the forest induced by mask."""
        if not mask:
            return 0
        cached = self.forest.get(mask)
        if cached is not None:
            return cached
        total = 0
        for comp in self._components(mask):
            size = comp.bit_count()
            if size <= 3:
                total += size - 1
            elif comp in self.exact:
                total += self.exact[comp]
            elif size <= self.exact_fragment_cap:
                total += self.solve(comp)
            else:
                total += self._split_bound(comp)
        self.forest[mask] = total
        return total

    def solve(self, comp: int) -> int:
        """Exact arrangement cost of a connected component, by branch and bound."""
        size = comp.bit_count()
        if size <= 3:
            return size - 1
        cached = self.exact.get(comp)
        if cached is not None:
            return cached
        adj = self.adj
        vertices = _bits(comp)
        deg = {u: (adj[u] & comp).bit_count() for u in vertices}
        edges = [(u, v) for u in vertices for v in _bits(adj[u] & comp) if v > u]
        best = _local_search_cost(vertices, edges)
        eq_prev = _equivalent_sibling_masks(comp, adj)
        memo: dict[int, int] = {}

        fan = self.fan
        lb_cache: dict[int, int] = {}

        # state: (mask placed, acc, open edge count); acc includes the boundary
        # after the last placed vertex, so acc is final once mask == comp.
        def lower_bound(mask: int, placed: int) -> int:
            remaining_boundaries = size - 1 - placed
            if remaining_boundaries <= 0:
                return 0
            cached = lb_cache.get(mask)
            if cached is not None:
                return cached
            unplaced = comp & ~mask
            # open edges grouped by unplaced endpoint: a group placed j-th in
            # the future crosses j-1 more boundaries each, so the cheapest
            # schedule serves large groups first; the unplaced forest's own
            # edges cost at least the fan bound, refined recursively below
            counts = []
            uu_fan = 0
            m = unplaced
            while m:
                low = m & -m
                u = low.bit_length() - 1
                c = (adj[u] & mask).bit_count()
                if c:
                    counts.append(c)
                uu_fan += fan[deg[u] - c]
                m ^= low
            counts.sort(reverse=True)
            closure = sum(j * c for j, c in enumerate(counts))
            lb = max(remaining_boundaries, closure + (uu_fan + 1) // 2)
            if placed * 4 <= size * 3:
                lb = max(lb, closure + self._forest_bound(unplaced))
            lb_cache[mask] = lb
            return lb

        def dfs(mask: int, acc: int, open_cnt: int, placed: int):
            nonlocal best
            if placed == size:
                if acc < best:
                    best = acc
                return
            if acc + lower_bound(mask, placed) >= best:
                return
            self.budget -= 1
            if self.budget < 0:
                raise MlaBudgetExceeded(f"budget exhausted on {size}-node fragment")
            children = []
            unplaced = comp & ~mask
            n_placed = placed + 1
            v = unplaced
            while v:
                low = v & -v
                u = low.bit_length() - 1
                v ^= low
                if eq_prev[u] & unplaced:
                    continue  # an interchangeable smaller-id sibling goes first
                n_open = open_cnt + deg[u] - 2 * (adj[u] & mask).bit_count()
                n_acc = acc + (n_open if n_placed < size else 0)
                if n_acc >= best:
                    continue
                n_mask = mask | low
                seen = memo.get(n_mask)
                if seen is not None and n_acc >= seen:
                    continue
                memo[n_mask] = n_acc
                outlook = n_acc + lower_bound(n_mask, n_placed)
                if outlook >= best:
                    continue
                children.append((outlook, n_acc, n_open, n_mask))
            children.sort()
            for outlook, n_acc, n_open, n_mask in children:
                if outlook >= best:
                    continue
                dfs(n_mask, n_acc, n_open, placed + 1)

        for start in vertices:
            if eq_prev[start]:
                continue
            mask = 1 << start
            memo[mask] = deg[start]  # start's edges all cross the first boundary
            dfs(mask, deg[start], deg[start], 1)
        self.exact[comp] = best
        return best


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _equivalent_sibling_masks(comp: int, adj: list[int]) -> dict[int, int]:
    """For each vertex of the component, a bitmask of smaller-id siblings whose
    rooted subtrees are isomorphic to its own (AHU canonical codes), rooting
    the component at its lowest vertex. Swapping such subtrees is a tree
    automorphism, so forcing ascending placement order preserves the optimum."""
    root = (comp & -comp).bit_length() - 1
    children: dict[int, list[int]] = {root: []}
    order = [root]
    seen = 1 << root
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        kids = _bits(adj[v] & comp & ~seen)
        children[v] = kids
        for c in kids:
            seen |= 1 << c
            order.append(c)
    codes: dict[int, int] = {}
    interned: dict[tuple[int, ...], int] = {}
    for v in reversed(order):
        key = tuple(sorted(codes[c] for c in children[v]))
        codes[v] = interned.setdefault(key, len(interned))
    eq_prev = {u: 0 for u in order}
    for v in order:
        groups: dict[int, list[int]] = {}
        for c in children[v]:
            groups.setdefault(codes[c], []).append(c)
        for members in groups.values():
            members.sort()
            for i, c in enumerate(members):
                for smaller in members[:i]:
                    eq_prev[c] |= 1 << smaller
    return eq_prev


def _local_search_cost(vertices: list[int], edges: list[tuple[int, int]]) -> int:
    """Upper bound: best of id order and a greedy attachment order, each
    polished by pairwise position swaps to a local optimum."""
    n = len(vertices)
    inc: dict[int, list[int]] = {u: [] for u in vertices}
    for u, v in edges:
        inc[u].append(v)
        inc[v].append(u)

    def polish(order: list[int]) -> int:
        pos = {u: p for p, u in enumerate(order)}
        cost = sum(abs(pos[u] - pos[v]) for u, v in edges)
        improved = True
        while improved:
            improved = False
            for i in range(n):
                for j in range(i + 1, n):
                    a, b = order[i], order[j]
                    delta = 0
                    for w in inc[a]:
                        if w != b:
                            delta += abs(j - pos[w]) - abs(i - pos[w])
                    for w in inc[b]:
                        if w != a:
                            delta += abs(i - pos[w]) - abs(j - pos[w])
                    if delta < 0:
                        cost += delta
                        order[i], order[j] = b, a
                        pos[a], pos[b] = j, i
                        improved = True
        return cost

    # greedy: repeatedly append the unplaced vertex with most placed neighbors,
    # ties to lower degree then lower id; decent for star- and chain-like trees
    placed = {u: False for u in vertices}
    start = min(vertices, key=lambda u: (-len(inc[u]), u))
    greedy = [start]
    placed[start] = True
    for _ in range(n - 1):
        cand = min(
            (u for u in vertices if not placed[u]),
            key=lambda u: (-sum(placed[w] for w in inc[u]), len(inc[u]), u),
        )
        greedy.append(cand)
        placed[cand] = True
    return min(polish(sorted(vertices)), polish(greedy))


def omega(tree: DependencyTree, max_nodes: int = 64) -> float | None:
    """Optimality of the observed linearization between random and minimal.

    1 when the observed order is optimal, 0 at the random baseline, negative
    when worse than random. Undefined (None) for n < 3 where the random and
    minimal baselines coincide.
    """
    n = len(tree)
    if n < 3:
        return None
    d_rand = random_baseline(n)
    d_min = min_linear_arrangement(tree, max_nodes=max_nodes)
    return (d_rand - total_dependency_length(tree)) / (d_rand - d_min)


def compute_tree_metrics(tree: DependencyTree, max_nodes: int = 64) -> TreeMetrics:
    n = len(tree)
    d_obs = total_dependency_length(tree)
    d_rand = random_baseline(n)
    d_min: int | None = None
    om: float | None = None
    reason: str | None = None
    if n < 3:
        reason = "optimality undefined for n < 3"
    elif n > max_nodes:
        reason = f"sentence length {n} above exact-search cap {max_nodes}"
    else:
        try:
            d_min = min_linear_arrangement(tree, max_nodes=max_nodes)
            om = (d_rand - d_obs) / (d_rand - d_min)
        except MlaBudgetExceeded as exc:
            reason = str(exc)
    return TreeMetrics(
        n=n,
        mhd=mean_hierarchical_distance(tree),
        d_obs=d_obs,
        d_rand=d_rand,
        d_min=d_min,
        omega=om,
        sub_unevenness=subtree_unevenness(tree),
        b2=b2_index(tree),
        omega_reason=reason,
    )


def prune_and_score(doc: Document, max_nodes: int = 64) -> list[TreeMetrics]:
    """Per-sentence metrics over a document, skipping all-punctuation sentences."""
    out: list[TreeMetrics] = []
    for sent in doc.sentences:
        tree = prune_punctuation(sent)
        if tree is not None:
            out.append(compute_tree_metrics(tree, max_nodes=max_nodes))
    return out


def average_tree_metrics(metrics: list[TreeMetrics]) -> TreeMetricsSummary:
    """Arithmetic means across sentences, skipping undefined optimality values."""
    if not metrics:
        raise ValueError("no sentences with defined metrics")
    omegas = [m.omega for m in metrics if m.omega is not None]
    return TreeMetricsSummary(
        n_sentences=len(metrics),
        mean_mhd=sum(m.mhd for m in metrics) / len(metrics),
        mean_omega=(sum(omegas) / len(omegas)) if omegas else None,
        omega_defined_count=len(omegas),
        mean_sub_unevenness=sum(m.sub_unevenness for m in metrics) / len(metrics),
        mean_b2=sum(m.b2 for m in metrics) / len(metrics),
    )
