"""Source-code design for network error correction on unit-delay networks:
error-pattern enumeration, per-sink error images and processing matrices,
the error-reflection set W_s and its weight t_s, decoding-mode selection,
sink decoding, bound calculators, and the instantaneous comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import _kernels
from .convcode import (
    GeneratorMatrix,
    CodeProfile,
    build_trellis,
    code_profile,
    free_distance,
    is_catastrophic,
    mds_field_condition,
    singleton_bound,
)
from .galois import Field, Poly, PolyMatrix, ff_inv, is_prime_power
from .netgraph import NetworkGraph, TransferSet, instantaneous_transfer


class PatternError(ValueError):
    """Bad error pattern set."""


class EnumerationBudgetError(ValueError):
    """Error-vector enumeration would exceed the desk-scale budget."""


class ErrorPatternSet:
    """A collection of edge subsets; an error vector matches the set when
    its support lies inside some member pattern."""

    def __init__(self, patterns, graph: NetworkGraph | None = None):
        pats = tuple(frozenset(p) for p in patterns)
        if graph is not None:
            known = set(graph.edge_index)
            for p in pats:
                bad = p - known
                if bad:
                    raise PatternError(f"unknown edge ids in pattern: {sorted(bad)}")
        self.patterns = pats

    @classmethod
    def all_single(cls, graph: NetworkGraph):
        return cls([{e.id} for e in graph.edges], graph)

    @classmethod
    def all_double(cls, graph: NetworkGraph):
        ids = [e.id for e in graph.edges]
        return cls([{a, b} for a, b in combinations(ids, 2)], graph)

    @classmethod
    def parse(cls, text: str, graph: NetworkGraph):
        """One pattern per line (space-separated edge ids), or the
        shorthand directives 'all-single' / 'all-double'."""
        stripped = text.strip()
        if stripped == "all-single":
            return cls.all_single(graph)
        if stripped == "all-double":
            return cls.all_double(graph)
        pats = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line == "all-single":
                pats.extend([{e.id} for e in graph.edges])
            elif line == "all-double":
                ids = [e.id for e in graph.edges]
                pats.extend([{a, b} for a, b in combinations(ids, 2)])
            else:
                pats.append(set(line.split()))
        if not pats:
            raise PatternError("empty pattern file")
        return cls(pats, graph)

    def __len__(self):
        return len(self.patterns)


def enumerate_error_vectors(
    patterns: ErrorPatternSet,
    field: Field,
    graph: NetworkGraph,
    budget: int = 2_000_000,
):
    """All error vectors w in F_q^{|E|} supported on some pattern (the zero
    vector included), deduplicated, as a (N, |E|) uint8 array in a stable
    lexicographic order."""
    cost = sum(field.q ** len(p) for p in patterns.patterns)
    if cost > budget:
        raise EnumerationBudgetError(
            f"pattern enumeration cost {cost} exceeds budget {budget}"
        )
    ne = graph.num_edges
    seen = {(0,) * ne}
    for pat in patterns.patterns:
        idxs = sorted(graph.edge_index[e] for e in pat)
        for values in product(range(field.q), repeat=len(idxs)):
            w = [0] * ne
            for i, v in zip(idxs, values):
                w[i] = v
            seen.add(tuple(w))
    return np.array(sorted(seen), dtype=np.uint8)


def vec_weight(vec) -> int:
    """Hamming weight over F_q of an n-tuple of polynomials: the count of
    nonzero coefficients across all components and powers."""
    return sum(p.weight() for p in vec)


def sink_error_images(w_phi: np.ndarray, f_matrix: PolyMatrix) -> frozenset:
    """{w F_T(z)}: the set of n-tuples over F_q[z] a sink can see due to
    a single-instant error matching the pattern set."""
    f = f_matrix.field
    n = f_matrix.cols
    out = set()
    for w in w_phi:
        img = []
        for j in range(n):
            acc = Poly.zero(f)
            for e, we in enumerate(w):
                if we:
                    acc = acc + f_matrix[e, j].scale(int(we))
            img.append(acc)
        out.add(tuple(img))
    return frozenset(out)


def choose_processing(m_matrix: PolyMatrix, override: Poly | None = None):
    """Processing function and matrix for a sink: p_T = det(M_T)/g with g
    the monic gcd of the adjugate entries, and P_T = p_T M_T^{-1} = adj/g,
    which is polynomial by construction. A user override of p_T is
    accepted when it keeps P_T polynomial."""
    det, adj = m_matrix.det_adjugate()
    if det.is_zero():
        raise ZeroDivisionError("M_T(z) singular over F_q(z)")
    g = Poly.zero(m_matrix.field)
    for row in adj.entries:
        for e in row:
            g = e.monic() if g.is_zero() else g.gcd(e)
    if override is not None:
        entries = []
        for row in adj.entries:
            out_row = []
            for e in row:
                num = override * e
                quo, rem = divmod(num, det)
                if not rem.is_zero():
                    raise ValueError(
                        f"override p_T = {override} does not keep P_T polynomial"
                    )
                out_row.append(quo)
            entries.append(out_row)
        return override, PolyMatrix(entries)
    p = det.exact_div(g)
    pm = PolyMatrix([[e.exact_div(g) for e in row] for row in adj.entries])
    return p, pm


class DecodeMode(enum.Enum):
    OUTPUT_TRELLIS = "output-trellis"
    INPUT_TRELLIS = "input-trellis"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SinkAnalysis:
    """Everything the construction derives for one sink."""

    sink: str
    m_matrix: PolyMatrix
    f_matrix: PolyMatrix
    w_images: frozenset          # W_T
    t_sink: int                  # t_T
    proc_poly: Poly              # p_T
    proc_matrix: PolyMatrix      # P_T
    reflections: frozenset       # {w_T(z) P_T(z)}
    output_gen: GeneratorMatrix | None = None
    output_profile: CodeProfile | None = None
    m_cap: float | None = None   # m_T (math.inf when t_T = 0)
    mode: DecodeMode | None = None


@dataclass(frozen=True)
class CneccDesign:
    graph: NetworkGraph
    transfer: TransferSet
    patterns: ErrorPatternSet
    w_phi: np.ndarray
    sinks: dict
    w_source: frozenset          # W_s
    t_source: int                # t_s
    r: int                       # max_T w_H(p_T)
    t_delay: int
    input_code: GeneratorMatrix | None = None
    input_profile: CodeProfile | None = None

    @property
    def valid(self) -> bool:
        """Free-distance requirement d_free(C_s) >= 2 t_s + 1."""
        if self.input_profile is None:
            return False
        return self.input_profile.d_free >= 2 * self.t_source + 1


def compute_m_cap(d_free_out: int, t_sink: int):
    """Largest m with d_free(C_T) >= 2 m t_T + 1 (infinite when t_T = 0)."""
    if t_sink == 0:
        return math.inf
    return (d_free_out - 1) // (2 * t_sink)


def select_decode_mode(
    output_catastrophic: bool,
    m_cap,
    t_dfree_out,
    t_dfree_in,
) -> DecodeMode:
    """Output-trellis decoding needs m_T >= 1, the spacing condition
    T_dfree(C_T) <= m_T T_dfree(C_s), and a non-catastrophic G_O."""
    if output_catastrophic:
        return DecodeMode.INPUT_TRELLIS
    if m_cap < 1:
        return DecodeMode.INPUT_TRELLIS
    if t_dfree_out > m_cap * t_dfree_in:
        return DecodeMode.INPUT_TRELLIS
    return DecodeMode.OUTPUT_TRELLIS


def verify_code(input_code: GeneratorMatrix, t_source: int, n: int) -> bool:
    """Construction step 5: the chosen code must have free distance at
    least 2 t_s + 1 (and the right number of output streams)."""
    if input_code.n != n:
        raise ValueError(
            f"code has {input_code.n} outputs but the network dimension is {n}"
        )
    return free_distance(input_code, allow_catastrophic=True) >= 2 * t_source + 1


def design_cnecc(
    transfer: TransferSet,
    patterns: ErrorPatternSet,
    input_code: GeneratorMatrix | None = None,
    p_overrides: dict | None = None,
) -> CneccDesign:
    """Run the construction for a network whose transfer set is computed:
    enumerate W_Phi, per-sink W_T and processing, pool W_s and t_s, and,
    when an input code is supplied, derive output codes and decode modes."""
    graph = transfer.graph
    fieldq = transfer.code.field
    w_phi = enumerate_error_vectors(patterns, fieldq, graph)
    input_profile = None
    if input_code is not None:
        if input_code.field != fieldq:
            raise ValueError("input code and network code fields differ")
        input_profile = code_profile(input_code)

    sinks = {}
    w_source = set()
    r = 0
    for t in graph.sinks:
        m_mat = transfer.m_sink[t]
        f_mat = transfer.f_sink[t]
        images = sink_error_images(w_phi, f_mat)
        t_sink = max(vec_weight(v) for v in images)
        override = (p_overrides or {}).get(t)
        p_poly, p_mat = choose_processing(m_mat, override)
        refl = frozenset(
            tuple((PolyMatrix([list(v)]) @ p_mat).entries[0]) for v in images
        )
        w_source |= refl
        r = max(r, p_poly.weight())
        out_gen = out_prof = m_cap = mode = None
        if input_code is not None:
            out_gen = input_code @ m_mat
            cat = is_catastrophic(out_gen)
            out_prof = code_profile(out_gen)
            m_cap = compute_m_cap(out_prof.d_free, t_sink)
            mode = select_decode_mode(
                cat, m_cap, out_prof.t_dfree, input_profile.t_dfree
            )
        sinks[t] = SinkAnalysis(
            sink=t,
            m_matrix=m_mat,
            f_matrix=f_mat,
            w_images=images,
            t_sink=t_sink,
            proc_poly=p_poly,
            proc_matrix=p_mat,
            reflections=refl,
            output_gen=out_gen,
            output_profile=out_prof,
            m_cap=m_cap,
            mode=mode,
        )
    t_source = max(vec_weight(v) for v in w_source)
    return CneccDesign(
        graph=graph,
        transfer=transfer,
        patterns=patterns,
        w_phi=w_phi,
        sinks=sinks,
        w_source=frozenset(w_source),
        t_source=t_source,
        r=r,
        t_delay=transfer.t_delay,
        input_code=input_code,
        input_profile=input_profile,
    )


def decode_generator(design: CneccDesign, sink: str, force_input_trellis=False):
    """The generator whose trellis the sink decodes on: G_{O,T} for
    output-trellis sinks, p_T(z) G_I(z) otherwise (whose information input
    is u(z) directly, so no post-division is needed)."""
    if design.input_code is None:
        raise ValueError("design has no input code")
    sa = design.sinks[sink]
    mode = DecodeMode.INPUT_TRELLIS if force_input_trellis else sa.mode
    if mode is DecodeMode.OUTPUT_TRELLIS:
        return sa.output_gen
    return design.input_code.scaled(sa.proc_poly)


def decode_at_sink(
    design: CneccDesign,
    sink: str,
    y_blocks,
    num_info: int,
    force_input_trellis: bool = False,
):
    """Decode one received frame at a sink per its selected mode.

    Output-trellis sinks run Viterbi directly on the received blocks;
    input-trellis sinks first multiply by P_T(z) and decode on the trellis
    of p_T(z) G_I(z). The frame is assumed zero-tail terminated."""
    sa = design.sinks[sink]
    mode = DecodeMode.INPUT_TRELLIS if force_input_trellis else sa.mode
    gen = decode_generator(design, sink, force_input_trellis)
    field = gen.field
    if mode is DecodeMode.INPUT_TRELLIS:
        y_blocks = apply_processing(field, y_blocks, sa.proc_matrix)
    j = num_info + max(gen.row_degrees)
    rec = np.zeros((len(y_blocks) if len(y_blocks) > j else j, gen.n), dtype=np.uint8)
    for t, blk in enumerate(y_blocks):
        rec[t] = blk
    rec = rec[:j]
    tr = build_trellis(gen)
    idx, _ = _kernels.viterbi_frames(tr.next_state, tr.outputs, rec.reshape(1, j, gen.n), 0)
    return [tuple(int(x) for x in tr.inputs[i]) for i in idx[0][:num_info]]


def apply_processing(field: Field, y_blocks, p_matrix: PolyMatrix):
    """y(z) P_T(z) evaluated blockwise."""
    n = p_matrix.rows
    deg = p_matrix.max_degree()
    taps = [
        [[p_matrix[i, j][d] for j in range(p_matrix.cols)] for i in range(n)]
        for d in range(deg + 1)
    ]
    out_len = len(y_blocks) + deg
    out = [[0] * p_matrix.cols for _ in range(out_len)]
    for t, blk in enumerate(y_blocks):
        for d, tap in enumerate(taps):
            row = out[t + d]
            for i, v in enumerate(blk):
                if v:
                    for j in range(p_matrix.cols):
                        c = tap[i][j]
                        if c:
                            row[j] = field.add(row[j], field.mul(int(v), c))
    return [tuple(row) for row in out]


# -- bound calculators -------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Machine-checkable bound suite for one designed instance."""

    n: int
    k: int
    r: int
    t_delay: int
    t_source: int
    reach: int                     # (n+1)(T_delay - 1) + 1
    w_s_weight_bound: int          # r n [(n+1)(T_delay-1)+1]
    w_s_weight_ok: bool
    mds_degree_recommended: int    # ceil((2 t_s - 1) k / n)
    mds_degree_worst_case: int     # 2 r k [(n+1)(T_delay-1)+1]
    field_size_divisibility: int   # n | (q-1)
    field_size_lower: int          # strict lower bound from the construction
    field_size_smallest: int       # smallest prime power satisfying both
    spacing_upper_bound: int | None        # (d_free - 1) delta + 1 for C_s
    spacing_worst_case: int        # closed form for the worst-case MDS choice
    singleton: int | None
    singleton_is_mds: bool | None
    mds_construction_q: int        # field size needed to build the recommended MDS code

    def records(self):
        out = []
        for key, val in self.__dict__.items():
            out.append((key, val))
        return out


def bound_report(design: CneccDesign, k: int | None = None) -> BoundReport:
    n = design.transfer.code.n
    if k is None:
        k = design.input_code.k if design.input_code is not None else n - 1
    r = design.r
    td = design.t_delay
    reach = (n + 1) * (td - 1) + 1
    w_bound = r * n * reach
    lower = max(
        len(design.graph.sinks), 2 * r * n * n * reach // (n - k) + 2
    )
    q = lower + 1
    while not (is_prime_power(q) and (q - 1) % n == 0):
        q += 1
    delta_rec = math.ceil((2 * design.t_source - 1) * k / n)
    delta_worst = 2 * r * k * reach
    spacing_worst = (
        4 * r * r * n * k * reach * reach + 2 * r * k * (n - k) * reach + 1
    )
    spacing_ub = singleton = is_mds = None
    if design.input_profile is not None:
        prof = design.input_profile
        delta = design.input_code.degree
        spacing_ub = (prof.d_free - 1) * delta + 1
        singleton = singleton_bound(design.input_code.n, design.input_code.k, delta)
        is_mds = prof.d_free == singleton
    return BoundReport(
        n=n,
        k=k,
        r=r,
        t_delay=td,
        t_source=design.t_source,
        reach=reach,
        w_s_weight_bound=w_bound,
        w_s_weight_ok=design.t_source <= w_bound,
        mds_degree_recommended=delta_rec,
        mds_degree_worst_case=delta_worst,
        field_size_divisibility=n,
        field_size_lower=lower,
        field_size_smallest=q,
        spacing_upper_bound=spacing_ub,
        spacing_worst_case=spacing_worst,
        singleton=singleton,
        singleton_is_mds=is_mds,
        mds_construction_q=mds_field_condition(n, k, delta_rec),
    )


def instantaneous_comparison(design: CneccDesign):
    """Per (error vector, sink): Hamming weight of the reflection in the
    instantaneous network (w F_T M_T^{-1} with all kernels delay-free)
    versus the unit-delay reflection weight; the former never exceeds the
    latter."""
    graph = design.graph
    code = design.transfer.code
    field = code.field
    inst_m, inst_f = instantaneous_transfer(graph, code)
    out = []
    for t in graph.sinks:
        sa = design.sinks[t]
        minv = ff_inv(field, inst_m[t])
        ft = inst_f[t]
        n = code.n
        for w in design.w_phi:
            img = [0] * n
            for e, we in enumerate(w):
                if we:
                    for j in range(n):
                        img[j] = field.add(img[j], field.mul(int(we), ft[e][j]))
            inst = [0] * n
            for j in range(n):
                for i in range(n):
                    inst[j] = field.add(inst[j], field.mul(img[i], minv[i][j]))
            inst_wt = sum(1 for v in inst if v)
            # Unit-delay reflection of the same error vector.
            refl_row = PolyMatrix([list(_image_of(design, t, w))]) @ sa.proc_matrix
            delay_wt = vec_weight(refl_row.entries[0])
            out.append((t, tuple(int(x) for x in w), inst_wt, delay_wt))
    return out


def _image_of(design: CneccDesign, sink: str, w):
    f_mat = design.sinks[sink].f_matrix
    f = f_mat.field
    img = []
    for j in range(f_mat.cols):
        acc = Poly.zero(f)
        for e, we in enumerate(w):
            if we:
                acc = acc + f_mat[e, j].scale(int(we))
        img.append(acc)
    return tuple(img)


def sorted_vecs(vecs):
    """Canonical (lexicographic on coefficient tuples) ordering of a W set."""
    return sorted(vecs, key=lambda v: tuple(p.coeffs for p in v))


def format_vec(vec) -> str:
    return "(" + ", ".join(p.to_str() for p in vec) + ")"
