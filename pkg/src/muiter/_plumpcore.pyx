# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for the recursive tree order.

Mirrors muiter._plump_py.PlumpKernel: an append-only arena of nodes keyed
by integer id, with memoized mutual recursion for the strict and lax
relations.  Keys pack the id pair into one 64-bit integer, so the arena is
capped at 2**31 nodes, far beyond any realistic run.
"""

from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector


cdef class PlumpKernel:
    cdef vector[vector[int]] _children
    cdef unordered_map[long long, char] _lt
    cdef unordered_map[long long, char] _leq

    def add_node(self, child_ids):
        cdef vector[int] kids
        cdef long long n = <long long> self._children.size()
        cdef long long c
        for c in child_ids:
            if c < 0 or c >= n:
                raise ValueError(f"child id {c} not yet in arena of size {n}")
            kids.push_back(<int> c)
        self._children.push_back(kids)
        return n

    def __len__(self):
        return self._children.size()

    cdef bint _lt_rec(self, int a, int b):
        cdef long long key = ((<long long> a) << 32) | <unsigned int> b
        if self._lt.count(key):
            return self._lt[key] != 0
        cdef char hit = 0
        cdef size_t k
        cdef vector[int]* kids = &self._children[b]
        for k in range(kids.size()):
            if self._leq_rec(a, kids[0][k]):
                hit = 1
                break
        self._lt[key] = hit
        return hit != 0

    cdef bint _leq_rec(self, int a, int b):
        cdef long long key = ((<long long> a) << 32) | <unsigned int> b
        if self._leq.count(key):
            return self._leq[key] != 0
        cdef char hit = 1
        cdef size_t k
        cdef vector[int]* kids = &self._children[a]
        for k in range(kids.size()):
            if not self._lt_rec(kids[0][k], b):
                hit = 0
                break
        self._leq[key] = hit
        return hit != 0

    cdef void _check(self, long long x) except *:
        if x < 0 or x >= <long long> self._children.size():
            raise ValueError(f"node id {x} outside arena")

    def lt(self, a, b):
        self._check(a)
        self._check(b)
        return self._lt_rec(<int> a, <int> b)

    def leq(self, a, b):
        self._check(a)
        self._check(b)
        return self._leq_rec(<int> a, <int> b)
