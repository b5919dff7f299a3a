"""End-to-end unit-delay channel y(z) = x(z) M_T(z) + w(z) F_T(z) and the
seeded Monte-Carlo bit-error-rate machinery under the probabilistic
edge-error model (P(i edges in error) = p^i, values uniform on F_q \\ {0}).

Frames are finite approximations of the semi-infinite streams: frame_len
information blocks, zero-tail terminated on the decoding trellis, with the
error process running over the whole decode window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .convcode import GeneratorMatrix, build_trellis
from .design import CneccDesign, DecodeMode, decode_generator
from .galois import Field, Poly, PolyMatrix


class ErrorModelError(ValueError):
    """Invalid error model parameters."""


@dataclass(frozen=True)
class ErrorModel:
    """One of three error processes on the network edges.

    probabilistic: i.i.d. across time; i edges are in error with
    probability p**i, none with probability q = 1 - sum_i p**i; the edge
    subset is uniform among size-i subsets and each erroneous edge carries
    a uniform nonzero value.

    spaced: one error vector drawn uniformly from the nonzero pattern-set
    vectors every `spacing` network uses (random phase per frame).

    scripted: an explicit list of (time, edge_index, value) events.
    """

    kind: str
    p: float = 0.0
    spacing: int = 0
    script: tuple = ()

    @classmethod
    def probabilistic(cls, p: float):
        if not 0.0 < p < 1.0:
            raise ErrorModelError("p must lie in (0, 1)")
        return cls(kind="probabilistic", p=p)

    @classmethod
    def spaced(cls, spacing: int):
        if spacing < 1:
            raise ErrorModelError("spacing must be at least 1")
        return cls(kind="spaced", spacing=spacing)

    @classmethod
    def scripted(cls, events):
        return cls(kind="scripted", script=tuple(tuple(e) for e in events))


def no_error_probability(p: float, num_edges: int) -> float:
    """q with q + sum_{i=1..|E|} p^i = 1."""
    q = 1.0 - sum(p**i for i in range(1, num_edges + 1))
    if q < 0:
        raise ErrorModelError(f"p = {p} leaves no probability for the no-error event")
    return q


def sample_error_counts(rng, p: float, num_edges: int, shape):
    """Number of erroneous edges per time step, distributed per the model."""
    cum = np.cumsum([no_error_probability(p, num_edges)] + [p**i for i in range(1, num_edges + 1)])
    draws = rng.random(shape)
    return np.minimum(np.searchsorted(cum, draws, side="right"), num_edges)


def sample_probabilistic_errors(rng, p: float, field: Field, num_edges: int, steps: int, frames: int):
    """Dense error matrix (frames, steps, |E|) for the probabilistic model."""
    counts = sample_error_counts(rng, p, num_edges, (frames, steps))
    w = np.zeros((frames * steps, num_edges), dtype=np.uint8)
    flat_counts = counts.reshape(-1)
    for c in range(1, num_edges + 1):
        cells = np.nonzero(flat_counts == c)[0]
        if cells.size == 0:
            continue
        edges = rng.random((cells.size, num_edges)).argsort(axis=1)[:, :c]
        values = rng.integers(1, field.q, size=(cells.size, c), dtype=np.int64)
        w[cells[:, None], edges] = values.astype(np.uint8)
    return w.reshape(frames, steps, num_edges)


def _nonzero_vectors(w_phi: np.ndarray) -> np.ndarray:
    keep = np.any(w_phi != 0, axis=1)
    return w_phi[keep]


def sample_spaced_errors(rng, spacing: int, vectors: np.ndarray, steps: int, frames: int):
    """One pattern-set vector every `spacing` steps, uniform phase."""
    ne = vectors.shape[1]
    w = np.zeros((frames, steps, ne), dtype=np.uint8)
    phases = rng.integers(0, spacing, size=frames)
    for b in range(frames):
        times = np.arange(int(phases[b]), steps, spacing)
        if times.size:
            picks = rng.integers(0, len(vectors), size=times.size)
            w[b, times] = vectors[picks]
    return w


def scripted_errors(script, num_edges: int, steps: int, frames: int):
    w = np.zeros((frames, steps, num_edges), dtype=np.uint8)
    for t, e, v in script:
        if t < steps:
            w[:, t, e] = v
    return w


def poly_matrix_taps(pm: PolyMatrix) -> np.ndarray:
    """(degree+1, rows, cols) coefficient stack view of a PolyMatrix."""
    d = pm.max_degree()
    taps = np.zeros((d + 1, pm.rows, pm.cols), dtype=np.uint8)
    for i in range(pm.rows):
        for j in range(pm.cols):
            for deg, c in enumerate(pm[i, j].coeffs):
                taps[deg, i, j] = c
    return taps


def generator_taps(gen: GeneratorMatrix) -> np.ndarray:
    return poly_matrix_taps(gen.as_matrix())


def conv_blocks(field: Field, blocks: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Blockwise polynomial-matrix convolution: blocks (B, T, k) with taps
    (D, k, n) giving (B, T+D-1, n), exact over the field."""
    B, T, k = blocks.shape
    D, _, n = taps.shape
    if field.m == 1:
        acc = np.zeros((B, T + D - 1, n), dtype=np.int64)
        b64 = blocks.astype(np.int64)
        for d in range(D):
            acc[:, d : d + T] += b64 @ taps[d].astype(np.int64)
        return (acc % field.p).astype(np.uint8)
    acc = np.zeros((B, T + D - 1, n), dtype=np.int64)
    for d in range(D):
        term = field.np_matmul(blocks.reshape(B * T, k), taps[d]).reshape(B, T, n)
        acc[:, d : d + T] = field.np_add(acc[:, d : d + T], term)
    return acc.astype(np.uint8)


def channel(field: Field, x_blocks, m_matrix: PolyMatrix, f_matrix: PolyMatrix, errors, length: int | None = None):
    """y(z) = x(z) M_T(z) + w(z) F_T(z), coefficientwise.

    x_blocks: sequence of n-tuples; errors: (time, edge_index, value)
    triples. Returns `length` blocks (default: the full support)."""
    n = m_matrix.cols
    T = len(x_blocks)
    max_t = max((t for t, _, _ in errors), default=0)
    full = max(T + m_matrix.max_degree(), max_t + 1 + f_matrix.max_degree())
    length = full if length is None else length
    x = np.zeros((1, max(T, 1), n), dtype=np.uint8)
    for t, blk in enumerate(x_blocks):
        x[0, t] = blk
    y = np.zeros((1, length, n), dtype=np.int64)
    xm = conv_blocks(field, x, poly_matrix_taps(m_matrix))
    upto = min(length, xm.shape[1])
    y[:, :upto] = xm[:, :upto]
    steps = max(max_t + 1, 1)
    w = np.zeros((1, steps, f_matrix.rows), dtype=np.uint8)
    for t, e, v in errors:
        w[0, t, e] = field.add(int(w[0, t, e]), field.check(v))
    wf = conv_blocks(field, w, poly_matrix_taps(f_matrix))
    upto = min(length, wf.shape[1])
    y[:, :upto] = field.np_add(y[:, :upto], wf[:, :upto].astype(np.int64))
    return [tuple(int(v) for v in y[0, t]) for t in range(length)]


@dataclass
class _SinkPlan:
    sink: str
    gen: GeneratorMatrix
    gen_taps: np.ndarray    # (Dg, k, n)
    f_eff_taps: np.ndarray  # (Df, |E|, n): F_T, postmultiplied by P_T for input-trellis sinks
    window: int             # decode window = frame_len + max row degree

    @classmethod
    def build(cls, design: CneccDesign, sink: str, frame_len: int, force_input_trellis: bool):
        gen = decode_generator(design, sink, force_input_trellis)
        sa = design.sinks[sink]
        mode = DecodeMode.INPUT_TRELLIS if force_input_trellis else sa.mode
        if mode is DecodeMode.INPUT_TRELLIS:
            f_eff = sa.f_matrix @ sa.proc_matrix
        else:
            f_eff = sa.f_matrix
        return cls(
            sink=sink,
            gen=gen,
            gen_taps=generator_taps(gen),
            f_eff_taps=poly_matrix_taps(f_eff),
            window=frame_len + max(gen.row_degrees),
        )


@dataclass
class SinkCounter:
    frames: int = 0
    bits: int = 0
    bit_errors: int = 0
    block_errors: int = 0
    err_sq_sum: int = 0  # sum of squared per-frame error counts, for CIs

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0


def cell_rng(seed: int, *key) -> np.random.Generator:
    """Independent deterministic stream for one sweep cell."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed,) + key)))


def simulate_frames(
    design: CneccDesign,
    model: ErrorModel,
    frames: int,
    frame_len: int,
    rng: np.random.Generator,
    force_input_trellis: bool = False,
    sinks=None,
    batch: int = 256,
):
    """Encode random frames, push them through every sink's channel with a
    shared error process, decode per the sink's mode, and tally
    information-symbol errors (tail excluded)."""
    if design.input_code is None:
        raise ValueError("design has no input code to simulate")
    field = design.transfer.code.field
    code = design.input_code
    sinks = list(sinks if sinks is not None else design.graph.sinks)
    plans = [_SinkPlan.build(design, t, frame_len, force_input_trellis) for t in sinks]
    horizon = max(p.window for p in plans)
    ne = design.graph.num_edges
    counters = {t: SinkCounter() for t in sinks}
    vectors = _nonzero_vectors(design.w_phi) if model.kind == "spaced" else None
    done = 0
    while done < frames:
        b = min(batch, frames - done)
        u = rng.integers(0, field.q, size=(b, frame_len, code.k), dtype=np.int64).astype(np.uint8)
        if model.kind == "probabilistic":
            w = sample_probabilistic_errors(rng, model.p, field, ne, horizon, b)
        elif model.kind == "spaced":
            w = sample_spaced_errors(rng, model.spacing, vectors, horizon, b)
        elif model.kind == "scripted":
            w = scripted_errors(model.script, ne, horizon, b)
        else:
            raise ErrorModelError(f"unknown model kind {model.kind!r}")
        for plan in plans:
            j = plan.window
            rec = conv_blocks(field, u, plan.gen_taps)  # exactly j blocks
            noise = conv_blocks(field, w[:, :j], plan.f_eff_taps)[:, :j]
            if field.m == 1:
                rec = ((rec.astype(np.int64) + noise) % field.p).astype(np.uint8)
            else:
                rec = field.np_add(rec.astype(np.int64), noise.astype(np.int64)).astype(np.uint8)
            tr = build_trellis(plan.gen)
            idx, _ = _kernels.viterbi_frames(tr.next_state, tr.outputs, rec, 0)
            decoded = tr.inputs[idx][:, :frame_len]  # (b, L, k)
            diff = decoded != u
            per_frame = np.count_nonzero(diff, axis=(1, 2))
            c = counters[plan.sink]
            c.frames += b
            c.bits += b * frame_len * code.k
            c.bit_errors += int(per_frame.sum())
            c.block_errors += int(np.count_nonzero(per_frame))
            c.err_sq_sum += int((per_frame.astype(np.int64) ** 2).sum())
        done += b
    return counters


def run_trial(
    design: CneccDesign,
    model: ErrorModel,
    rng: np.random.Generator,
    frame_len: int = 200,
    force_input_trellis: bool = False,
    sinks=None,
):
    """One frame through every sink; returns per-sink bit error counts."""
    counters = simulate_frames(
        design, model, 1, frame_len, rng, force_input_trellis, sinks, batch=1
    )
    return {t: c.bit_errors for t, c in counters.items()}


def spaced_error_check(
    design: CneccDesign,
    spacing: int,
    frames: int,
    frame_len: int,
    seed: int,
    force_input_trellis: bool = False,
):
    """Spaced pattern-set errors at the given separation must decode with
    no information-symbol error when the design is valid and the spacing
    is at least the input code's error-event interval."""
    rng = cell_rng(seed, 1)
    return simulate_frames(
        design,
        ErrorModel.spaced(spacing),
        frames,
        frame_len,
        rng,
        force_input_trellis=force_input_trellis,
    )


@dataclass(frozen=True)
class SimPoint:
    code: str
    sink: str
    p: float
    frames: int
    bits: int
    bit_errors: int
    ber: float
    block_errors: int
    err_sq_sum: int = 0

    def ci95(self) -> float:
        """Half-width of a 95% normal CI on the BER, from per-frame counts."""
        if self.frames < 2 or self.bits == 0:
            return math.inf
        mean = self.bit_errors / self.frames
        var = max(self.err_sq_sum / self.frames - mean * mean, 0.0)
        half = 1.96 * math.sqrt(var / self.frames)
        return half * self.frames / self.bits


@dataclass
class SimResult:
    seed: int
    frame_len: int
    points: list = dc_field(default_factory=list)

    def point(self, code, sink, p) -> SimPoint:
        for pt in self.points:
            if pt.code == code and pt.sink == sink and math.isclose(pt.p, p):
                return pt
        raise KeyError((code, sink, p))

    def csv_lines(self):
        yield "code,sink,p,frames,bits,bit_errors,ber,block_errors"
        for pt in self.points:
            yield (
                f"{pt.code},{pt.sink},{pt.p:.6g},{pt.frames},{pt.bits},"
                f"{pt.bit_errors},{pt.ber:.10g},{pt.block_errors}"
            )

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in self.csv_lines():
                fh.write(line + "\n")


def ber_sweep(
    designs: dict,
    p_grid,
    frames: int,
    frame_len: int,
    seed: int,
    force_input_trellis: bool = True,
    sinks=None,
) -> SimResult:
    """BER per (code, sink, p) for pre-built designs {name: CneccDesign},
    deterministic given the seed: every sweep cell gets its own substream
    derived from (seed, code index, p index)."""
    result = SimResult(seed=seed, frame_len=frame_len)
    if frames <= 0:
        return result
    for ci, (name, design) in enumerate(designs.items()):
        for pi, p in enumerate(p_grid):
            rng = cell_rng(seed, ci, pi)
            counters = simulate_frames(
                design,
                ErrorModel.probabilistic(p),
                frames,
                frame_len,
                rng,
                force_input_trellis=force_input_trellis,
                sinks=sinks,
            )
            for sink, c in counters.items():
                result.points.append(
                    SimPoint(
                        code=name,
                        sink=sink,
                        p=float(p),
                        frames=c.frames,
                        bits=c.bits,
                        bit_errors=c.bit_errors,
                        ber=c.ber,
                        block_errors=c.block_errors,
                        err_sq_sum=c.err_sq_sum,
                    )
                )
    return result
