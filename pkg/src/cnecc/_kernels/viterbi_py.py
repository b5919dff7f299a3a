"""Pure-Python Viterbi kernel, semantics-identical to the compiled one.

Branch metrics are vectorized with numpy; the add-compare-select stage
iterates incoming transitions in ascending (state, input) order so ties
resolve to the lowest predecessor, exactly like the C loop.
"""

import numpy as np

_INF = 1 << 60


def viterbi_frames(next_state, outputs, received, end_state=0):
    """Decode a batch of zero-tail terminated frames.

    next_state: (S, U) int32; outputs: (S, U, n) uint8;
    received: (B, J, n) uint8. Returns (input-index paths (B, J) int32,
    final path metrics (B,) int64). Frames start and end in end_state's
    companion start state 0 and are forced to end in end_state.
    """
    next_state = np.asarray(next_state)
    outputs = np.asarray(outputs)
    received = np.asarray(received)
    S, U = next_state.shape
    B, J, n = received.shape
    flat_next = next_state.reshape(-1)  # index s*U + u, ascending tie order
    incoming = [np.nonzero(flat_next == ns)[0] for ns in range(S)]
    paths = np.zeros((B, J), dtype=np.int32)
    dists = np.zeros(B, dtype=np.int64)
    for b in range(B):
        metric = np.full(S, _INF, dtype=np.int64)
        metric[0] = 0
        backptr = np.zeros((J, S), dtype=np.int32)
        for t in range(J):
            d = np.count_nonzero(outputs != received[b, t], axis=2)  # (S, U)
            cand = (metric[:, None] + d).reshape(-1)
            nxt = np.full(S, _INF, dtype=np.int64)
            for ns in range(S):
                inc = incoming[ns]
                if inc.size == 0:
                    continue
                vals = cand[inc]
                i = int(vals.argmin())  # argmin keeps the first minimum
                if vals[i] < _INF:
                    nxt[ns] = vals[i]
                    backptr[t, ns] = inc[i]
            metric = nxt
        state = end_state
        dists[b] = metric[state]
        for t in range(J - 1, -1, -1):
            bp = int(backptr[t, state])
            paths[b, t] = bp % U
            state = bp // U
    return paths, dists
