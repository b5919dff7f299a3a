# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hard-decision Viterbi over a fixed trellis.

Same contract as viterbi_py.viterbi_frames: batch of zero-tail terminated
frames, tie-break to the lowest (predecessor state, input) pair.
"""

import numpy as np

DEF INF = 1152921504606846976  # 1 << 60


def viterbi_frames(next_state, outputs, received, int end_state=0):
    cdef int[:, ::1] ns_v = np.ascontiguousarray(next_state, dtype=np.int32)
    cdef unsigned char[:, :, ::1] out_v = np.ascontiguousarray(outputs, dtype=np.uint8)
    cdef unsigned char[:, :, ::1] rec_v = np.ascontiguousarray(received, dtype=np.uint8)

    cdef Py_ssize_t S = ns_v.shape[0]
    cdef Py_ssize_t U = ns_v.shape[1]
    cdef Py_ssize_t n = out_v.shape[2]
    cdef Py_ssize_t B = rec_v.shape[0]
    cdef Py_ssize_t J = rec_v.shape[1]

    paths_arr = np.zeros((B, J), dtype=np.int32)
    dists_arr = np.zeros(B, dtype=np.int64)
    metric_arr = np.empty(S, dtype=np.int64)
    metric_next_arr = np.empty(S, dtype=np.int64)
    backptr_arr = np.zeros((J, S), dtype=np.int32)

    cdef int[:, ::1] paths = paths_arr
    cdef long long[::1] dists = dists_arr
    cdef long long[::1] metric = metric_arr
    cdef long long[::1] metric_next = metric_next_arr
    cdef int[:, ::1] backptr = backptr_arr

    cdef Py_ssize_t b, t, s, u, j, state
    cdef long long m, cand
    cdef int d, nxt, bp

    for b in range(B):
        for s in range(S):
            metric[s] = INF
        metric[0] = 0
        for t in range(J):
            for s in range(S):
                metric_next[s] = INF
            for s in range(S):
                m = metric[s]
                if m >= INF:
                    continue
                for u in range(U):
                    d = 0
                    for j in range(n):
                        if out_v[s, u, j] != rec_v[b, t, j]:
                            d += 1
                    cand = m + d
                    nxt = ns_v[s, u]
                    if cand < metric_next[nxt]:
                        metric_next[nxt] = cand
                        backptr[t, nxt] = <int>(s * U + u)
            for s in range(S):
                metric[s] = metric_next[s]
        state = end_state
        dists[b] = metric[state]
        for t in range(J - 1, -1, -1):
            bp = backptr[t, state]
            paths[b, t] = bp % <int>U
            state = bp // <int>U
    return paths_arr, dists_arr
