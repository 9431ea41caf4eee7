"""Pure-Python twin of the compiled echelon kernel.

Same algorithm as ``_modp.pyx``: every incoming vector is reduced from its
lowest position upward against monic pivot rows and becomes a new pivot at
the first position that has none.  Results match the compiled kernel
exactly, only slower.
"""

import heapq

import numpy as np


class EchelonModP:
    """Incremental row echelon form of a set of vectors over GF(p)."""

    def __init__(self, length, p):
        if p < 3 or p >= 1 << 32:
            raise ValueError("prime must lie in [3, 2**32)")
        self.p = int(p)
        self.length = int(length)
        self.rank = 0
        self._rows = {}  # pivot position -> (indices list, values list), leading value 1

    def _add_one(self, idx, val):
        p = self.p
        acc = {}
        for j, v in zip(idx, val):
            v %= p
            if v:
                acc[j] = (acc.get(j, 0) + v) % p
        heap = list(acc)
        heapq.heapify(heap)
        queued = set(heap)
        rows = self._rows
        while heap:
            q = heapq.heappop(heap)
            queued.discard(q)
            f = acc.get(q, 0)
            if not f:
                continue
            row = rows.get(q)
            if row is not None:
                del acc[q]
                ridx, rval = row
                for k in range(1, len(ridx)):
                    j = ridx[k]
                    nv = (acc.get(j, 0) - f * rval[k]) % p
                    acc[j] = nv
                    if j not in queued:
                        queued.add(j)
                        heapq.heappush(heap, j)
                continue
            support = [q] + sorted(j for j in heap if acc.get(j, 0))
            inv = pow(f, -1, p)
            rows[q] = (support, [acc[j] * inv % p for j in support])
            self.rank += 1
            return 1
        return 0

    def add_vectors(self, indptr, indices, data):
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        data = np.asarray(data, dtype=np.uint64)
        if len(indices) and (indices.min() < 0 or indices.max() >= self.length):
            raise IndexError("vector index out of range")
        ip = indptr.tolist()
        ix = indices.tolist()
        dv = [int(x) for x in data.tolist()]
        created = 0
        for r in range(len(ip) - 1):
            a, b = ip[r], ip[r + 1]
            created += self._add_one(ix[a:b], dv[a:b])
        return created

    def pivots(self):
        return np.array(sorted(self._rows), dtype=np.int64)

    def nnz(self):
        return sum(len(r[0]) for r in self._rows.values())

    def row(self, position):
        row = self._rows.get(position)
        if row is None:
            return None
        return np.array(row[0], dtype=np.int64), np.array(row[1], dtype=np.uint64)

    def reduced_form(self):
        p = self.p
        piv = sorted(self._rows)
        pivset = set(piv)
        free = [i for i in range(self.length) if i not in pivset]
        slot = {j: k for k, j in enumerate(free)}
        nfree = len(free)
        reduced = {}
        for q in reversed(piv):
            out = [0] * nfree
            ridx, rval = self._rows[q]
            for k in range(1, len(ridx)):
                j, c = ridx[k], rval[k]
                if j in slot:
                    out[slot[j]] = (out[slot[j]] + c) % p
                else:
                    other = reduced[j]
                    for w, x in enumerate(other):
                        if x:
                            out[w] = (out[w] - c * x) % p
            reduced[q] = out
        R = np.zeros((len(piv), nfree), dtype=np.uint64)
        for t, q in enumerate(piv):
            if nfree:
                R[t, :] = reduced[q]
        return np.array(free, dtype=np.int64), R
