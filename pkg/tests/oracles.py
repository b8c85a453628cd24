"""Independent reference implementations used as test oracles."""

from __future__ import annotations

from itertools import combinations


def set_partitions(items):
    """All partitions of ``items`` via restricted growth strings."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return

    def grow(prefix, top):
        if len(prefix) == n:
            blocks = [[] for _ in range(top + 1)]
            for item, b in zip(items, prefix):
                blocks[b].append(item)
            yield blocks
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    yield from grow([0], 0)


def _components(nodes, edges):
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in nodes})


def _spanning_links(nodes, edges):
    """Size of a spanning forest found by depth-first search."""
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, links = set(), 0
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    links += 1
                    stack.append(w)
    return links


def link_ratio(chains, other):
    """Links of ``chains`` that ``other`` recovers, counted edge by edge.

    For each chain S the needed links are a spanning tree of the complete
    graph on S; the recovered ones are those left after keeping only the
    pairs ``other`` also puts together.
    """
    same = {}
    for idx, chain in enumerate(other):
        for m in chain:
            same[m] = idx
    num = den = 0
    for chain in chains:
        chain = list(chain)
        full = list(combinations(chain, 2))
        kept = [(a, b) for a, b in full if a in same and b in same and same[a] == same[b]]
        den += _spanning_links(chain, full)
        num += len(chain) - _components(chain, kept)
    return num, den


def muc_oracle(response, key):
    r_num, r_den = link_ratio(key, response)
    p_num, p_den = link_ratio(response, key)
    return (r_num / r_den if r_den else 1.0), (p_num / p_den if p_den else 1.0)
