# -*- coding: utf-8 -*-

"""Prefix-sum tree over integer family sizes.

Slots are appended in family-birth order and never removed, so the slot
index of a family is its age rank among all families ever founded.
"""


class FamilyTree:
    """Fenwick tree of nonnegative integer counts with weighted selection."""

    def __init__(self, capacity=64):
        size = 1
        while size < capacity:
            size *= 2
        self._size = size
        self._tree = [0] * (size + 1)
        self._counts = []
        self._total = 0

    def __len__(self):
        return len(self._counts)

    def _rebuild(self, size):
        tree = [0] * (size + 1)
        for i, count in enumerate(self._counts, start=1):
            tree[i] += count
            parent = i + (i & -i)
            if parent <= size:
                tree[parent] += tree[i]
        self._size = size
        self._tree = tree

    def append(self, count=1):
        if len(self._counts) == self._size:
            self._rebuild(self._size * 2)
        self._counts.append(0)
        self.add(len(self._counts) - 1, count)
        return len(self._counts) - 1

    def add(self, slot, delta):
        count = self._counts[slot] + delta
        if count < 0:
            raise ValueError(f'family {slot} would drop to {count}')
        self._counts[slot] = count
        self._total += delta
        i = slot + 1
        tree = self._tree
        size = self._size
        while i <= size:
            tree[i] += delta
            i += i & -i

    def find(self, u):
        """Slot chosen with probability proportional to its count, for u uniform in [0, 1)."""
        if self._total <= 0:
            raise ValueError('cannot select from an empty tree')
        target = int(u * self._total)
        if target >= self._total:
            target = self._total - 1
        pos = 0
        step = self._size
        tree = self._tree
        while step:
            nxt = pos + step
            if nxt <= self._size and tree[nxt] <= target:
                pos = nxt
                target -= tree[nxt]
            step //= 2
        return pos

    def prefix(self, slot):
        """Sum of counts of slots [0, slot]."""
        i = slot + 1
        s = 0
        while i > 0:
            s += self._tree[i]
            i -= i & -i
        return s

    def total(self):
        return self._total

    def count(self, slot):
        return self._counts[slot]

    def counts(self):
        return list(self._counts)
