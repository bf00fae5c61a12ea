# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled set kernels on int64 coordinate matrices.

Mirrors odotile._kernels.pure exactly.  Inputs too wide or too large for
the int64 comfort zone raise CoordLimitExceeded so the dispatcher can
reroute the call to the pure path.
"""

import numpy as np

BACKEND_NAME = "cython"
INT64_COORD_LIMIT = 1 << 20
_MAX_RANK = 8


class CoordLimitExceeded(Exception):
    """Input rejected by the compiled path's size guards."""


def _as_matrix(rows):
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] == 0 or arr.shape[1] > _MAX_RANK:
        raise CoordLimitExceeded("row shape unsupported by compiled path")
    if arr.size and int(np.abs(arr).max()) > INT64_COORD_LIMIT:
        raise CoordLimitExceeded("coordinate outside int64 guard")
    return np.ascontiguousarray(arr)


cdef inline int row_cmp(long long[:, ::1] M, Py_ssize_t i, Py_ssize_t j,
                        Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(r):
        if M[i, k] < M[j, k]:
            return -1
        if M[i, k] > M[j, k]:
            return 1
    return 0


cdef inline int row_cmp2(long long[:, ::1] M, Py_ssize_t i,
                         long long[:, ::1] N, Py_ssize_t j,
                         Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(r):
        if M[i, k] < N[j, k]:
            return -1
        if M[i, k] > N[j, k]:
            return 1
    return 0


cdef inline int cmp_row_buf(long long[:, ::1] M, Py_ssize_t i,
                            long long *y, Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(r):
        if M[i, k] < y[k]:
            return -1
        if M[i, k] > y[k]:
            return 1
    return 0


cdef void sort_rows(long long[:, ::1] M, Py_ssize_t[::1] idx,
                    Py_ssize_t[::1] tmp, Py_ssize_t n,
                    Py_ssize_t r) noexcept nogil:
    # bottom-up mergesort of row indices, lexicographic on coordinates
    cdef Py_ssize_t width = 1
    cdef Py_ssize_t lo, mid, hi, a, b, k, i
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width
            if mid > n:
                mid = n
            hi = mid + width
            if hi > n:
                hi = n
            a = lo
            b = mid
            k = lo
            while a < mid and b < hi:
                if row_cmp(M, idx[a], idx[b], r) <= 0:
                    tmp[k] = idx[a]
                    a += 1
                else:
                    tmp[k] = idx[b]
                    b += 1
                k += 1
            while a < mid:
                tmp[k] = idx[a]
                a += 1
                k += 1
            while b < hi:
                tmp[k] = idx[b]
                b += 1
                k += 1
            lo = hi
        for i in range(n):
            idx[i] = tmp[i]
        width *= 2


cdef bint sorted_contains(long long[:, ::1] M, Py_ssize_t[::1] order,
                          Py_ssize_t n, long long *y,
                          Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    cdef int c
    while lo < hi:
        mid = (lo + hi) // 2
        c = cmp_row_buf(M, order[mid], y, r)
        if c == 0:
            return True
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return False


cdef inline void apply_mul(int kind, long long[:, ::1] A, Py_ssize_t i,
                           long long[:, ::1] B, Py_ssize_t j,
                           long long[:, ::1] out, Py_ssize_t row,
                           Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t k
    if kind == 1:  # heisenberg
        out[row, 0] = A[i, 0] + B[j, 0]
        out[row, 1] = A[i, 1] + B[j, 1]
        out[row, 2] = A[i, 2] + B[j, 2] + A[i, 0] * B[j, 1]
    else:
        for k in range(r):
            out[row, k] = A[i, k] + B[j, k]


def _sorted_order(M_np):
    cdef long long[:, ::1] M = M_np
    cdef Py_ssize_t n = M.shape[0], r = M.shape[1]
    idx_np = np.arange(n, dtype=np.intp)
    tmp_np = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_np
    cdef Py_ssize_t[::1] tmp = tmp_np
    sort_rows(M, idx, tmp, n, r)
    return idx_np


def product(int kind, A, B):
    """Pointwise product set {a*b : a in A, b in B} as a frozenset of tuples."""
    A_np = _as_matrix(A)
    B_np = _as_matrix(B)
    cdef long long[:, ::1] Am = A_np
    cdef long long[:, ::1] Bm = B_np
    cdef Py_ssize_t n = Am.shape[0], m = Bm.shape[0], r = Am.shape[1]
    if n == 0 or m == 0:
        return frozenset()
    out_np = np.empty((n * m, r), dtype=np.int64)
    cdef long long[:, ::1] out = out_np
    cdef Py_ssize_t i, j, row = 0
    for i in range(n):
        for j in range(m):
            apply_mul(kind, Am, i, Bm, j, out, row, r)
            row += 1
    idx_np = np.arange(n * m, dtype=np.intp)
    tmp_np = np.empty(n * m, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_np
    cdef Py_ssize_t[::1] tmp = tmp_np
    sort_rows(out, idx, tmp, n * m, r)
    keep = []
    cdef Py_ssize_t t
    for t in range(n * m):
        if t == 0 or row_cmp(out, idx[t], idx[t - 1], r) != 0:
            keep.append(idx[t])
    return frozenset(map(tuple, out_np[keep].tolist()))


def boundary(int kind, S, K):
    """S-boundary of K: points of SK seen from both K and its complement."""
    S_np = _as_matrix(S)
    K_np = _as_matrix(K)
    cdef long long[:, ::1] Sm = S_np
    cdef long long[:, ::1] Km = K_np
    cdef Py_ssize_t ns = Sm.shape[0], nk = Km.shape[0], r = Km.shape[1]
    if ns == 0 or nk == 0:
        return frozenset()
    sk_np = np.empty((ns * nk, r), dtype=np.int64)
    cdef long long[:, ::1] sk = sk_np
    cdef Py_ssize_t i, j, k, row = 0
    for i in range(ns):
        for j in range(nk):
            apply_mul(kind, Sm, i, Km, j, sk, row, r)
            row += 1
    idx_np = np.arange(ns * nk, dtype=np.intp)
    tmp_np = np.empty(ns * nk, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_np
    cdef Py_ssize_t[::1] tmp = tmp_np
    sort_rows(sk, idx, tmp, ns * nk, r)
    korder_np = _sorted_order(K_np)
    cdef Py_ssize_t[::1] korder = korder_np
    sinv_np = np.empty((ns, r), dtype=np.int64)
    cdef long long[:, ::1] sinv = sinv_np
    for i in range(ns):
        if kind == 1:
            sinv[i, 0] = -Sm[i, 0]
            sinv[i, 1] = -Sm[i, 1]
            sinv[i, 2] = -Sm[i, 2] + Sm[i, 0] * Sm[i, 1]
        else:
            for k in range(r):
                sinv[i, k] = -Sm[i, k]
    cdef long long ybuf[8]
    cdef Py_ssize_t t, x
    cdef bint hit_in, hit_out
    keep = []
    for t in range(ns * nk):
        if t > 0 and row_cmp(sk, idx[t], idx[t - 1], r) == 0:
            continue
        x = idx[t]
        hit_in = False
        hit_out = False
        for i in range(ns):
            if kind == 1:
                ybuf[0] = sinv[i, 0] + sk[x, 0]
                ybuf[1] = sinv[i, 1] + sk[x, 1]
                ybuf[2] = sinv[i, 2] + sk[x, 2] + sinv[i, 0] * sk[x, 1]
            else:
                for k in range(r):
                    ybuf[k] = sinv[i, k] + sk[x, k]
            if sorted_contains(Km, korder, nk, ybuf, r):
                hit_in = True
            else:
                hit_out = True
            if hit_in and hit_out:
                keep.append(x)
                break
    return frozenset(map(tuple, sk_np[keep].tolist()))


def symdiff_count(int kind, K, s, str side):
    """|K symdiff sK| (side="left") or |K symdiff Ks| (side="right")."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    K_np = _as_matrix(K)
    s_np = _as_matrix([tuple(s)])
    cdef long long[:, ::1] Km = K_np
    cdef long long[:, ::1] sm = s_np
    cdef Py_ssize_t n = Km.shape[0], r = Km.shape[1]
    if n == 0:
        return 0
    cdef bint left = side == "left"
    shifted_np = np.empty((n, r), dtype=np.int64)
    cdef long long[:, ::1] sh = shifted_np
    cdef Py_ssize_t i
    for i in range(n):
        if left:
            apply_mul(kind, sm, 0, Km, i, sh, i, r)
        else:
            apply_mul(kind, Km, i, sm, 0, sh, i, r)
    korder_np = _sorted_order(K_np)
    sorder_np = _sorted_order(shifted_np)
    cdef Py_ssize_t[::1] ko = korder_np
    cdef Py_ssize_t[::1] so = sorder_np
    # K and its translate have equal size, so |K ^ sK| = 2*(n - |K & sK|)
    cdef Py_ssize_t a = 0, b = 0, inter = 0
    cdef int c
    while a < n and b < n:
        c = row_cmp2(Km, ko[a], sh, so[b], r)
        if c == 0:
            inter += 1
            a += 1
            b += 1
        elif c < 0:
            a += 1
        else:
            b += 1
    return 2 * (n - inter)
