# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse echelon kernel over a prime field.

Vectors are fed in CSR layout (``indptr``, ``indices``, ``data``) with
``data`` already reduced modulo ``p``.  The prime must be below 2**32 so
that every product of two residues fits in an unsigned 64-bit word.

Each stored pivot row is monic and has all of its support at or after its
pivot position.  The pure-Python twin in ``_modp_py`` implements the same
algorithm step for step, so both produce identical echelon forms.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset
from libc.stdint cimport uint64_t, int64_t, uint8_t

cnp.import_array()

ctypedef uint64_t u64
ctypedef int64_t i64


cdef inline u64 _inv(u64 a, u64 p) nogil:
    cdef i64 t = 0, newt = 1, q, tmp
    cdef i64 r = <i64>p, newr = <i64>(a % p)
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <i64>p
    return <u64>t


cdef inline void _heap_push(i64* heap, Py_ssize_t* size, i64 v) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= v:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = v


cdef inline i64 _heap_pop(i64* heap, Py_ssize_t* size) nogil:
    cdef i64 top = heap[0]
    cdef i64 last
    cdef Py_ssize_t i = 0, child, n
    size[0] -= 1
    n = size[0]
    if n == 0:
        return top
    last = heap[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[i] = heap[child]
        i = child
    heap[i] = last
    return top


cdef class EchelonModP:
    """Incremental row echelon form of a set of vectors over GF(p)."""

    cdef readonly u64 p
    cdef readonly Py_ssize_t length
    cdef readonly Py_ssize_t rank
    cdef i64* row_start
    cdef i64* row_len
    cdef i64* pool_idx
    cdef u64* pool_val
    cdef Py_ssize_t pool_size
    cdef Py_ssize_t pool_cap
    cdef u64* acc
    cdef uint8_t* mark
    cdef i64* heap
    cdef i64* scratch

    def __cinit__(self, Py_ssize_t length, u64 p):
        if p < 3 or p >= (<u64>1 << 32):
            raise ValueError("prime must lie in [3, 2**32)")
        self.p = p
        self.length = length
        self.rank = 0
        n = length if length > 0 else 1
        self.row_start = <i64*>malloc(n * sizeof(i64))
        self.row_len = <i64*>malloc(n * sizeof(i64))
        self.acc = <u64*>malloc(n * sizeof(u64))
        self.mark = <uint8_t*>malloc(n * sizeof(uint8_t))
        self.heap = <i64*>malloc(n * sizeof(i64))
        self.scratch = <i64*>malloc(n * sizeof(i64))
        self.pool_cap = 1024
        self.pool_size = 0
        self.pool_idx = <i64*>malloc(self.pool_cap * sizeof(i64))
        self.pool_val = <u64*>malloc(self.pool_cap * sizeof(u64))
        if (not self.row_start or not self.row_len or not self.acc or not self.mark
                or not self.heap or not self.scratch or not self.pool_idx or not self.pool_val):
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(n):
            self.row_len[i] = -1
            self.acc[i] = 0
        memset(self.mark, 0, n * sizeof(uint8_t))

    def __dealloc__(self):
        free(self.row_start)
        free(self.row_len)
        free(self.acc)
        free(self.mark)
        free(self.heap)
        free(self.scratch)
        free(self.pool_idx)
        free(self.pool_val)

    cdef int _reserve(self, Py_ssize_t extra) nogil:
        cdef Py_ssize_t cap = self.pool_cap
        cdef i64* ni
        cdef u64* nv
        if self.pool_size + extra <= cap:
            return 0
        while self.pool_size + extra > cap:
            cap *= 2
        ni = <i64*>realloc(self.pool_idx, cap * sizeof(i64))
        if not ni:
            return -1
        self.pool_idx = ni
        nv = <u64*>realloc(self.pool_val, cap * sizeof(u64))
        if not nv:
            return -1
        self.pool_val = nv
        self.pool_cap = cap
        return 0

    cdef int _add_one(self, const i64* idx, const u64* val, Py_ssize_t nnz) nogil:
        # returns 1 if a pivot was created, 0 if the vector reduced to zero, -1 on OOM
        cdef u64 p = self.p
        cdef u64* acc = self.acc
        cdef uint8_t* mark = self.mark
        cdef i64* heap = self.heap
        cdef Py_ssize_t hsize = 0
        cdef Py_ssize_t t, k, start, ln, cnt
        cdef i64 q, j
        cdef u64 f, c, v, inv
        for t in range(nnz):
            j = idx[t]
            v = val[t] % p
            if v == 0:
                continue
            acc[j] = (acc[j] + v) % p
            if not mark[j]:
                mark[j] = 1
                _heap_push(heap, &hsize, j)
        while hsize > 0:
            q = _heap_pop(heap, &hsize)
            mark[q] = 0
            f = acc[q]
            if f == 0:
                continue
            ln = self.row_len[q]
            if ln >= 0:
                start = self.row_start[q]
                acc[q] = 0
                # pool entry at start is the monic leading term
                for k in range(start + 1, start + ln):
                    j = self.pool_idx[k]
                    c = (f * self.pool_val[k]) % p
                    acc[j] = (acc[j] + p - c) % p
                    if not mark[j]:
                        mark[j] = 1
                        _heap_push(heap, &hsize, j)
                continue
            # new pivot at q: collect the remaining support
            cnt = 0
            self.scratch[cnt] = q
            cnt += 1
            while hsize > 0:
                j = _heap_pop(heap, &hsize)
                mark[j] = 0
                if acc[j] != 0:
                    self.scratch[cnt] = j
                    cnt += 1
            if self._reserve(cnt) != 0:
                return -1
            inv = _inv(f, p)
            start = self.pool_size
            for k in range(cnt):
                j = self.scratch[k]
                self.pool_idx[start + k] = j
                self.pool_val[start + k] = (acc[j] * inv) % p
                acc[j] = 0
            self.pool_size += cnt
            self.row_start[q] = start
            self.row_len[q] = cnt
            self.rank += 1
            return 1
        return 0

    def add_vectors(self, indptr, indices, data):
        """Reduce and absorb vectors given in CSR layout; return pivots created."""
        cdef i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
        cdef i64[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
        cdef u64[::1] dv = np.ascontiguousarray(data, dtype=np.uint64)
        cdef Py_ssize_t nvec = ip.shape[0] - 1
        cdef Py_ssize_t r, a, b, created = 0
        cdef int status = 0
        cdef i64 L = self.length
        if ix.shape[0] and (np.min(indices) < 0 or np.max(indices) >= L):
            raise IndexError("vector index out of range")
        if ix.shape[0] == 0:
            return 0
        with nogil:
            for r in range(nvec):
                a = ip[r]
                b = ip[r + 1]
                status = self._add_one(&ix[a], &dv[a], b - a)
                if status < 0:
                    break
                created += status
        if status < 0:
            raise MemoryError("echelon pool exhausted")
        return created

    def pivots(self):
        """Pivot positions in increasing order."""
        out = np.empty(self.rank, dtype=np.int64)
        cdef i64[::1] o = out
        cdef Py_ssize_t i, k = 0
        for i in range(self.length):
            if self.row_len[i] >= 0:
                o[k] = i
                k += 1
        return out

    def nnz(self):
        return self.pool_size

    def row(self, Py_ssize_t position):
        """Stored pivot row at ``position`` as (indices, values), or None."""
        if position < 0 or position >= self.length or self.row_len[position] < 0:
            return None
        cdef Py_ssize_t s = self.row_start[position], n = self.row_len[position], k
        idx = np.empty(n, dtype=np.int64)
        val = np.empty(n, dtype=np.uint64)
        cdef i64[::1] iv = idx
        cdef u64[::1] vv = val
        for k in range(n):
            iv[k] = self.pool_idx[s + k]
            vv[k] = self.pool_val[s + k]
        return idx, val

    def reduced_form(self):
        """Fully reduced echelon form restricted to the free positions.

        Returns ``(free, R)`` where ``free`` lists the non-pivot positions
        and row ``t`` of ``R`` gives the coefficients on the free positions
        of the fully reduced row whose pivot is ``pivots()[t]``.
        """
        cdef u64 p = self.p
        cdef Py_ssize_t L = self.length
        cdef Py_ssize_t nfree = L - self.rank
        free_pos = np.empty(nfree, dtype=np.int64)
        cdef i64[::1] fp = free_pos
        slot_arr = np.full(L if L > 0 else 1, -1, dtype=np.int64)
        cdef i64[::1] slot = slot_arr
        piv = self.pivots()
        cdef i64[::1] pv = piv
        cdef Py_ssize_t i, k = 0, t, s, n, e, w
        cdef i64 j, sj
        cdef u64 c, x
        for i in range(L):
            if self.row_len[i] < 0:
                fp[k] = i
                slot[i] = k
                k += 1
        for t in range(self.rank):
            slot[pv[t]] = t
        R_arr = np.zeros((self.rank, nfree), dtype=np.uint64)
        if nfree == 0 or self.rank == 0:
            return free_pos, R_arr
        cdef u64[:, ::1] R = R_arr
        with nogil:
            for t in range(self.rank - 1, -1, -1):
                s = self.row_start[pv[t]]
                n = self.row_len[pv[t]]
                for e in range(s + 1, s + n):
                    j = self.pool_idx[e]
                    c = self.pool_val[e]
                    sj = slot[j]
                    if self.row_len[j] < 0:
                        R[t, sj] = (R[t, sj] + c) % p
                    else:
                        # row sj is already fully reduced: subtract c * R[sj]
                        for w in range(nfree):
                            x = R[sj, w]
                            if x != 0:
                                R[t, w] = (R[t, w] + p - (c * x) % p) % p
        return free_pos, R_arr


cdef extern from *:
    """
    #include <stdint.h>
    static inline int oschen_mul_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int oschen_sub_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int oschen_mul_ovf(i64 a, i64 b, i64 *r) nogil
    int oschen_sub_ovf(i64 a, i64 b, i64 *r) nogil


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef class EchelonZZ:
    """Fraction-free echelon form over the integers in 64-bit words.

    Reduction of ``v`` by a stored primitive row ``r`` with pivot ``q`` is
    ``(r[q]/g) v - (v[q]/g) r`` with ``g = gcd(r[q], v[q])``; new rows are
    divided by their content.  Any 64-bit overflow raises OverflowError and
    leaves the caller to redo the work with Python integers.
    """

    cdef readonly Py_ssize_t length
    cdef readonly Py_ssize_t rank
    cdef i64* row_start
    cdef i64* row_len
    cdef i64* pool_idx
    cdef i64* pool_val
    cdef Py_ssize_t pool_size
    cdef Py_ssize_t pool_cap
    cdef i64* acc
    cdef uint8_t* mark
    cdef i64* heap
    cdef i64* scratch

    def __cinit__(self, Py_ssize_t length):
        self.length = length
        self.rank = 0
        n = length if length > 0 else 1
        self.row_start = <i64*>malloc(n * sizeof(i64))
        self.row_len = <i64*>malloc(n * sizeof(i64))
        self.acc = <i64*>malloc(n * sizeof(i64))
        self.mark = <uint8_t*>malloc(n * sizeof(uint8_t))
        self.heap = <i64*>malloc(n * sizeof(i64))
        self.scratch = <i64*>malloc(n * sizeof(i64))
        self.pool_cap = 1024
        self.pool_size = 0
        self.pool_idx = <i64*>malloc(self.pool_cap * sizeof(i64))
        self.pool_val = <i64*>malloc(self.pool_cap * sizeof(i64))
        if (not self.row_start or not self.row_len or not self.acc or not self.mark
                or not self.heap or not self.scratch or not self.pool_idx or not self.pool_val):
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(n):
            self.row_len[i] = -1
            self.acc[i] = 0
        memset(self.mark, 0, n * sizeof(uint8_t))

    def __dealloc__(self):
        free(self.row_start)
        free(self.row_len)
        free(self.acc)
        free(self.mark)
        free(self.heap)
        free(self.scratch)
        free(self.pool_idx)
        free(self.pool_val)

    cdef int _reserve(self, Py_ssize_t extra) nogil:
        cdef Py_ssize_t cap = self.pool_cap
        cdef i64* ni
        cdef i64* nv
        if self.pool_size + extra <= cap:
            return 0
        while self.pool_size + extra > cap:
            cap *= 2
        ni = <i64*>realloc(self.pool_idx, cap * sizeof(i64))
        if not ni:
            return -1
        self.pool_idx = ni
        nv = <i64*>realloc(self.pool_val, cap * sizeof(i64))
        if not nv:
            return -1
        self.pool_val = nv
        self.pool_cap = cap
        return 0

    cdef void _clear(self, Py_ssize_t hsize) nogil:
        cdef Py_ssize_t t
        for t in range(hsize):
            self.acc[self.heap[t]] = 0
            self.mark[self.heap[t]] = 0

    cdef int _add_one(self, const i64* idx, const i64* val, Py_ssize_t nnz) nogil:
        # 1: new pivot, 0: reduced to zero, -1: out of memory, -2: overflow
        cdef i64* acc = self.acc
        cdef uint8_t* mark = self.mark
        cdef i64* heap = self.heap
        cdef Py_ssize_t hsize = 0
        cdef Py_ssize_t t, k, start, ln, cnt
        cdef i64 q, j, a, b, g, x, y, content
        for t in range(nnz):
            j = idx[t]
            if val[t] == 0:
                continue
            if oschen_sub_ovf(acc[j], -val[t], &x):
                self._clear(hsize)
                return -2
            acc[j] = x
            if not mark[j]:
                mark[j] = 1
                _heap_push(heap, &hsize, j)
        while hsize > 0:
            q = _heap_pop(heap, &hsize)
            mark[q] = 0
            b = acc[q]
            if b == 0:
                continue
            ln = self.row_len[q]
            if ln >= 0:
                start = self.row_start[q]
                a = self.pool_val[start]
                g = _gcd(a, b)
                a = a // g
                b = b // g
                acc[q] = 0
                if a != 1:
                    for t in range(hsize):
                        j = heap[t]
                        if oschen_mul_ovf(acc[j], a, &x):
                            self._clear(hsize)
                            return -2
                        acc[j] = x
                for k in range(start + 1, start + ln):
                    j = self.pool_idx[k]
                    if oschen_mul_ovf(b, self.pool_val[k], &y):
                        self._clear(hsize)
                        return -2
                    if not mark[j]:
                        mark[j] = 1
                        acc[j] = 0
                        _heap_push(heap, &hsize, j)
                    if oschen_sub_ovf(acc[j], y, &x):
                        self._clear(hsize)
                        return -2
                    acc[j] = x
                continue
            cnt = 0
            self.scratch[cnt] = q
            cnt += 1
            content = b
            while hsize > 0:
                j = _heap_pop(heap, &hsize)
                mark[j] = 0
                if acc[j] != 0:
                    self.scratch[cnt] = j
                    cnt += 1
                    content = _gcd(content, acc[j])
            if self._reserve(cnt) != 0:
                return -1
            start = self.pool_size
            for k in range(cnt):
                j = self.scratch[k]
                self.pool_idx[start + k] = j
                self.pool_val[start + k] = acc[j] // content
                acc[j] = 0
            self.pool_size += cnt
            self.row_start[q] = start
            self.row_len[q] = cnt
            self.rank += 1
            return 1
        return 0

    def add_vectors(self, indptr, indices, data):
        """Absorb integer vectors in CSR layout; return pivots created."""
        cdef i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
        cdef i64[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
        cdef i64[::1] dv = np.ascontiguousarray(data, dtype=np.int64)
        cdef Py_ssize_t nvec = ip.shape[0] - 1
        cdef Py_ssize_t r, a, b, created = 0
        cdef int status = 0
        if ix.shape[0] == 0:
            return 0
        if np.min(indices) < 0 or np.max(indices) >= self.length:
            raise IndexError("vector index out of range")
        with nogil:
            for r in range(nvec):
                a = ip[r]
                b = ip[r + 1]
                status = self._add_one(&ix[a], &dv[a], b - a)
                if status < 0:
                    break
                created += status
        if status == -1:
            raise MemoryError("echelon pool exhausted")
        if status == -2:
            raise OverflowError("64-bit overflow in fraction-free elimination")
        return created

    def pivots(self):
        out = np.empty(self.rank, dtype=np.int64)
        cdef i64[::1] o = out
        cdef Py_ssize_t i, k = 0
        for i in range(self.length):
            if self.row_len[i] >= 0:
                o[k] = i
                k += 1
        return out

    def row(self, Py_ssize_t position):
        if position < 0 or position >= self.length or self.row_len[position] < 0:
            return None
        cdef Py_ssize_t s = self.row_start[position], n = self.row_len[position], k
        idx = np.empty(n, dtype=np.int64)
        val = np.empty(n, dtype=np.int64)
        cdef i64[::1] iv = idx
        cdef i64[::1] vv = val
        for k in range(n):
            iv[k] = self.pool_idx[s + k]
            vv[k] = self.pool_val[s + k]
        return idx, val
