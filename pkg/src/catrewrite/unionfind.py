from __future__ import annotations

from typing import Callable, Hashable, Iterable


class UnionFind:
    """Disjoint sets whose root is always the least member under ``key``."""

    def __init__(self, items: Iterable[Hashable] = (), key: Callable | None = None):
        self.parent: dict = {}
        self.key = key if key is not None else (lambda x: x)
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
        return x

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.key(rb) < self.key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out
