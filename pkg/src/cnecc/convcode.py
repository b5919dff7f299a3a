"""Rate-k/n convolutional codes from polynomial generator matrices:
controller-canonical trellis, free distance, the error-event spacing
parameter, catastrophicity, and hard-decision minimum-Hamming-weight
Viterbi decoding of zero-tail terminated frames.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .galois import Field, FieldMismatchError, Poly, PolyMatrix, is_prime_power


class CatastrophicGeneratorError(ValueError):
    """The generator maps some infinite-weight input to finite output weight
    (a zero-weight nontrivial cycle exists in its state graph)."""


class GeneratorMatrix:
    """A k x n polynomial generator matrix with rank k over F_q(z)."""

    __slots__ = ("field", "k", "n", "entries", "row_degrees", "degree")

    def __init__(self, field: Field, rows):
        entries = tuple(tuple(row) for row in rows)
        k = len(entries)
        if k == 0 or len(entries[0]) == 0:
            raise ValueError("empty generator matrix")
        n = len(entries[0])
        for row in entries:
            if len(row) != n:
                raise ValueError("ragged generator matrix")
            for e in row:
                if not isinstance(e, Poly) or e.field != field:
                    raise FieldMismatchError("generator entries must share the field")
        if k >= n:
            raise ValueError(f"rate must satisfy k < n, got {k}/{n}")
        if PolyMatrix(entries).rank() != k:
            raise ValueError("generator matrix is rank deficient over F_q(z)")
        row_degrees = tuple(max(e.degree for e in row) for row in entries)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_degrees", row_degrees)
        object.__setattr__(self, "degree", sum(row_degrees))

    def __setattr__(self, *_):
        raise AttributeError("GeneratorMatrix is immutable")

    @classmethod
    def parse(cls, field: Field, text: str) -> "GeneratorMatrix":
        """Rows separated by ';' or newlines, entries comma-separated in
        sparse form like '1+z^2' or '2*z^3'."""
        rows = [r for r in text.replace("\n", ";").split(";") if r.strip()]
        return cls(field, [[Poly.parse(field, e) for e in r.split(",")] for r in rows])

    def to_str(self) -> str:
        return "; ".join(", ".join(e.to_str() for e in row) for row in self.entries)

    def as_matrix(self) -> PolyMatrix:
        return PolyMatrix(self.entries)

    def scaled(self, p: Poly) -> "GeneratorMatrix":
        """The equivalent generator p(z) * G(z)."""
        if p.is_zero():
            raise ValueError("scale polynomial must be nonzero")
        return GeneratorMatrix(self.field, [[p * e for e in row] for row in self.entries])

    def __matmul__(self, m: PolyMatrix) -> "GeneratorMatrix":
        return GeneratorMatrix(self.field, (self.as_matrix() @ m).entries)

    def encode(self, blocks, tail: bool = True):
        """v(z) = u(z) G(z), blockwise.

        blocks: sequence of k-tuples over F_q. Returns len(blocks) output
        n-tuples, plus max(row_degrees) flush blocks when tail is set.
        """
        f = self.field
        u_polys = [Poly(f, [blk[i] for blk in blocks]) for i in range(self.k)]
        out_polys = []
        for j in range(self.n):
            acc = Poly.zero(f)
            for i in range(self.k):
                acc = acc + u_polys[i] * self.entries[i][j]
            out_polys.append(acc)
        length = len(blocks) + (max(self.row_degrees) if tail else 0)
        return [tuple(pj[t] for pj in out_polys) for t in range(length)]

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorMatrix)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.entries))

    def __repr__(self):
        return f"GeneratorMatrix({self.field}, [{self.to_str()}])"


class Trellis:
    """Controller-canonical state machine of a polynomial generator.

    States are mixed-radix encodings of the per-row delay registers
    (q**degree states); transitions are deterministic and the zero state
    maps to itself with zero output under zero input.
    """

    __slots__ = ("gen", "num_states", "num_inputs", "next_state", "outputs", "inputs")

    def __init__(self, gen: GeneratorMatrix):
        f = gen.field
        q = f.q
        nus = gen.row_degrees
        delta = gen.degree
        num_states = q**delta
        num_inputs = q**gen.k
        # taps[i][d][j]: coefficient of z^d in entry (i, j).
        taps = [
            [[gen.entries[i][j][d] for j in range(gen.n)] for d in range(nus[i] + 1)]
            for i in range(gen.k)
        ]
        offsets = [sum(nus[:i]) for i in range(gen.k)]
        next_state = np.zeros((num_states, num_inputs), dtype=np.int32)
        outputs = np.zeros((num_states, num_inputs, gen.n), dtype=np.uint8)
        inputs = np.zeros((num_inputs, gen.k), dtype=np.uint8)
        for u_idx in range(num_inputs):
            rest = u_idx
            for i in range(gen.k):
                inputs[u_idx, i] = rest % q
                rest //= q
        for s in range(num_states):
            digits = []
            rest = s
            for _ in range(delta):
                digits.append(rest % q)
                rest //= q
            for u_idx in range(num_inputs):
                u = inputs[u_idx]
                out = [0] * gen.n
                for i in range(gen.k):
                    reg = digits[offsets[i] : offsets[i] + nus[i]]
                    vals = [int(u[i])] + reg  # u at t, t-1, ..., t-nu_i
                    for d, v in enumerate(vals):
                        if v == 0:
                            continue
                        for j in range(gen.n):
                            t = taps[i][d][j]
                            if t:
                                out[j] = f.add(out[j], f.mul(v, t))
                ns_digits = []
                for i in range(gen.k):
                    reg = digits[offsets[i] : offsets[i] + nus[i]]
                    ns_digits.extend(([int(u[i])] + reg)[: nus[i]])
                ns = 0
                for d in reversed(ns_digits):
                    ns = ns * q + d
                next_state[s, u_idx] = ns
                outputs[s, u_idx] = out
        self.gen = gen
        self.num_states = num_states
        self.num_inputs = num_inputs
        self.next_state = next_state
        self.outputs = outputs
        self.inputs = inputs

    def input_index(self, block) -> int:
        q = self.gen.field.q
        idx = 0
        for v in reversed(block):
            idx = idx * q + int(v)
        return idx

    def walk(self, blocks):
        """Encode by stepping the state machine; for cross-checks."""
        state = 0
        out = []
        for blk in blocks:
            u_idx = self.input_index(blk)
            out.append(tuple(int(x) for x in self.outputs[state, u_idx]))
            state = int(self.next_state[state, u_idx])
        return out


@lru_cache(maxsize=None)
def build_trellis(gen: GeneratorMatrix) -> Trellis:
    return Trellis(gen)


@dataclass(frozen=True)
class CodeProfile:
    """Free distance, the error-event spacing parameter, catastrophicity."""

    d_free: int
    t_dfree: float  # int-valued, or math.inf for catastrophic behavior
    catastrophic: bool


def is_catastrophic(gen: GeneratorMatrix) -> bool:
    """Massey-Sain criterion: the monic gcd of all k x k minors must be a
    power of z for a non-catastrophic generator."""
    g = Poly.zero(gen.field)
    for cols in itertools.combinations(range(gen.n), gen.k):
        sub = PolyMatrix([[gen.entries[i][c] for c in cols] for i in range(gen.k)])
        d = sub.det()
        g = d.monic() if g.is_zero() else g.gcd(d)
        if not g.is_zero() and g.degree == 0:
            return False
    if g.is_zero():
        raise ValueError("rank-deficient generator")
    return not g.is_monomial()


def _states_on_zero_weight_walks(tr: Trellis, wt) -> set:
    """States admitting an infinite zero-output walk, excluding the trivial
    zero-state self loop; nonempty only for catastrophic generators."""
    S, U = tr.num_states, tr.num_inputs
    succ = [
        [
            int(tr.next_state[s, u])
            for u in range(U)
            if wt[s, u] == 0 and not (s == 0 and u == 0)
        ]
        for s in range(S)
    ]
    alive = set(range(S))
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(t in alive for t in succ[s]):
                alive.discard(s)
                changed = True
    return alive


def free_distance(gen: GeneratorMatrix, allow_catastrophic: bool = False) -> int:
    """Minimum Hamming weight over F_q of a nonzero codeword: Dijkstra on
    the state graph from the zero state back to it, with the first
    transition forced to use a nonzero input block.

    Raises CatastrophicGeneratorError for catastrophic generators unless
    allow_catastrophic is set, in which case the minimum is taken over the
    code's minimal behavior (reaching a zero-weight cycle terminates)."""
    catastrophic = is_catastrophic(gen)
    if catastrophic and not allow_catastrophic:
        raise CatastrophicGeneratorError(
            "zero-weight nontrivial cycle in the state graph; free distance "
            "search requires a non-catastrophic generator"
        )
    tr = build_trellis(gen)
    S, U = tr.num_states, tr.num_inputs
    wt = np.count_nonzero(tr.outputs, axis=2)
    targets = {0}
    if catastrophic:
        targets |= _states_on_zero_weight_walks(tr, wt)
    dist = [None] * S
    heap = []
    for u in range(1, U):
        ns = int(tr.next_state[0, u])
        w = int(wt[0, u])
        if dist[ns] is None or w < dist[ns]:
            dist[ns] = w
            heapq.heappush(heap, (w, ns))
    while heap:
        d, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        if s in targets:
            # First target popped is the global minimum.
            if d == 0:
                raise ValueError("zero-weight codeword found; generator degenerate")
            return d
        for u in range(U):
            ns = int(tr.next_state[s, u])
            nd = d + int(wt[s, u])
            if dist[ns] is None or nd < dist[ns]:
                dist[ns] = nd
                heapq.heappush(heap, (nd, ns))
    raise ValueError("free distance search exhausted the state graph")


def t_dfree(gen: GeneratorMatrix):
    """One plus the longest weight-limited (< d_free) codeword prefix that
    diverges from the zero state at time 0 (nonzero first input block).

    Dynamic program over (state, accumulated weight) layers, keeping the
    minimum weight per state; returns math.inf when the prefix length is
    unbounded (catastrophic behavior)."""
    d = free_distance(gen, allow_catastrophic=True)
    tr = build_trellis(gen)
    S, U = tr.num_states, tr.num_inputs
    wt = np.count_nonzero(tr.outputs, axis=2)
    cutoff = S * d + 2  # any longer path repeats a (state, weight) pair
    frontier: dict[int, int] = {}
    for u in range(1, U):
        w = int(wt[0, u])
        if w < d:
            ns = int(tr.next_state[0, u])
            if w < frontier.get(ns, d):
                frontier[ns] = w
    if not frontier:
        return 1
    depth = 1
    while True:
        if depth > cutoff:
            return math.inf
        nxt: dict[int, int] = {}
        for s, w in frontier.items():
            for u in range(U):
                nw = w + int(wt[s, u])
                if nw < d:
                    ns = int(tr.next_state[s, u])
                    if nw < nxt.get(ns, d):
                        nxt[ns] = nw
        if not nxt:
            return depth + 1
        frontier = nxt
        depth += 1


def code_profile(gen: GeneratorMatrix) -> CodeProfile:
    return CodeProfile(
        d_free=free_distance(gen, allow_catastrophic=True),
        t_dfree=t_dfree(gen),
        catastrophic=is_catastrophic(gen),
    )


def viterbi_decode(gen: GeneratorMatrix, received, num_info: int | None = None):
    """Hard-decision minimum-Hamming-weight decoding of one zero-tail
    terminated frame; ties resolve to the lowest predecessor state.

    received: sequence of n-tuples over F_q. Returns len(received) k-tuples
    (or the first num_info of them)."""
    tr = build_trellis(gen)
    r = np.asarray(received, dtype=np.uint8).reshape(1, len(received), gen.n)
    idx, _ = _kernels.viterbi_frames(tr.next_state, tr.outputs, r, 0)
    blocks = tr.inputs[idx[0]]
    if num_info is not None:
        blocks = blocks[:num_info]
    return [tuple(int(x) for x in b) for b in blocks]


def brute_force_min_weight(gen: GeneratorMatrix, max_degree: int | None = None) -> int:
    """Independent free-distance oracle: exhaustive minimum codeword weight
    over all nonzero information polynomials of degree <= 2*degree + n
    (or max_degree). Vectorized for prime fields."""
    f = gen.field
    D = max_degree if max_degree is not None else 2 * gen.degree + gen.n
    L = D + 1
    num = f.q ** (gen.k * L)
    if num > 5_000_000:
        raise ValueError(f"oracle enumeration of {num} inputs exceeds budget")
    if f.m != 1:
        return _brute_force_generic(gen, L)
    p = f.p
    width = L + max(gen.row_degrees)
    # Stacked Toeplitz operator: (k*L) x (n*width); out_j = sum_i conv(u_i, g_ij).
    op = np.zeros((gen.k * L, gen.n * width), dtype=np.int64)
    for i in range(gen.k):
        for j in range(gen.n):
            for d, c in enumerate(gen.entries[i][j].coeffs):
                for t in range(L):
                    op[i * L + t, j * width + t + d] = c
    best = None
    chunk = 1 << 14
    for start in range(1, num, chunk):
        idx = np.arange(start, min(start + chunk, num), dtype=np.int64)
        digits = np.empty((len(idx), gen.k * L), dtype=np.int64)
        rest = idx.copy()
        for pos in range(gen.k * L):
            digits[:, pos] = rest % p
            rest //= p
        out = (digits @ op) % p
        m = int(np.count_nonzero(out, axis=1).min())
        if best is None or m < best:
            best = m
    return best


def _brute_force_generic(gen: GeneratorMatrix, L: int) -> int:
    f = gen.field
    best = None
    for digits in itertools.product(range(f.q), repeat=gen.k * L):
        if not any(digits):
            continue
        rows = [Poly(f, digits[i * L : (i + 1) * L]) for i in range(gen.k)]
        w = 0
        for j in range(gen.n):
            acc = Poly.zero(f)
            for i in range(gen.k):
                acc = acc + rows[i] * gen.entries[i][j]
            w += acc.weight()
        if best is None or w < best:
            best = w
    return best


def singleton_bound(n: int, k: int, degree: int) -> int:
    """Generalized Singleton bound on the free distance of an (n, k) code
    of the given degree."""
    return (n - k) * (degree // k + 1) + degree + 1


def singleton_check(gen: GeneratorMatrix):
    """(bound, is_mds) for the code of this generator."""
    bound = singleton_bound(gen.n, gen.k, gen.degree)
    return bound, free_distance(gen, allow_catastrophic=True) == bound


def mds_field_condition(n: int, k: int, degree: int) -> int:
    """Smallest prime power q with n | (q-1) and q >= degree*n^2/(k*(n-k)) + 2,
    the known sufficient field size for constructing an MDS code."""
    need = degree * n * n / (k * (n - k)) + 2
    q = max(2, math.ceil(need))
    while True:
        if is_prime_power(q) and (q - 1) % n == 0 and q >= need:
            return q
        q += 1
