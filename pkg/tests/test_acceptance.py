"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Expected values marked 'derived' below were re-computed from the published
primitive data (transfer, processing and generator matrices) and verified
with independent oracles where the published derived listings are
internally inconsistent; see the project notes for the reconciliation.
"""

import random
import time

import numpy as np
import pytest

from cnecc import _kernels
from cnecc.convcode import (
    GeneratorMatrix,
    brute_force_min_weight,
    build_trellis,
    code_profile,
    free_distance,
    is_catastrophic,
    singleton_bound,
    t_dfree,
)
from cnecc.design import (
    DecodeMode,
    ErrorPatternSet,
    bound_report,
    design_cnecc,
    instantaneous_comparison,
)
from cnecc.errorsim import ber_sweep, spaced_error_check
from cnecc.fixtures import load_builtin_code, load_builtin_network
from cnecc.galois import GF, Poly, PolyMatrix
from cnecc.netgraph import compute_transfer

F2 = GF(2)
F3 = GF(3)


def report(criterion: str, ok: bool, detail: str = ""):
    from conftest import record_acceptance

    tag = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {criterion}: {tag}" + (f" ({detail})" if detail else "")
    print(line)
    record_acceptance(line)


def vecset(field, pairs):
    return frozenset(
        tuple(Poly.parse(field, c) for c in pair.split("|")) for pair in pairs
    )


@pytest.fixture(scope="module")
def butterfly():
    g, code = load_builtin_network("butterfly")
    ts = compute_transfer(g, code)
    design = design_cnecc(ts, ErrorPatternSet.all_single(g), load_builtin_code("c2"))
    return g, ts, design


@pytest.fixture(scope="module")
def comb():
    g, code = load_builtin_network("comb4c2")
    ts = compute_transfer(g, code)
    design = design_cnecc(
        ts, ErrorPatternSet.all_double(g), load_builtin_code("ternary9")
    )
    return g, ts, design


BUTTERFLY_W_T1 = [
    "0|0", "0|1", "1|0", "0|z", "0|z^2", "0|z^3", "0|z^4", "z|z^3",
]
BUTTERFLY_W_T2 = [
    "0|0", "0|1", "1|0", "z|0", "z^2|0", "z^3|0", "z^4|z",
]
BUTTERFLY_W_S = [
    "0|0", "z^3|z^2", "0|1", "0|z", "0|z^2", "0|z^3", "0|z^4",
    "z|0", "z^2|0", "z^3|0", "1|0", "z^4|0",
]


def test_acceptance_01_butterfly_golden_design():
    t0 = time.perf_counter()
    g, code = load_builtin_network("butterfly")
    ts = compute_transfer(g, code)
    design = design_cnecc(ts, ErrorPatternSet.all_single(g))
    elapsed = time.perf_counter() - t0

    assert ts.m_sink["t1"] == PolyMatrix.parse(F2, "z, z^3; 0, z^4")
    assert ts.m_sink["t2"] == PolyMatrix.parse(F2, "z^3, 0; z^4, z")
    t1, t2 = design.sinks["t1"], design.sinks["t2"]
    assert t1.proc_poly == Poly.parse(F2, "z^4")
    assert t1.proc_matrix == PolyMatrix.parse(F2, "z^3, z^2; 0, 1")
    assert t2.proc_poly == Poly.parse(F2, "z^3")
    assert t2.proc_matrix == PolyMatrix.parse(F2, "1, 0; z^3, z^2")
    assert t1.w_images == vecset(F2, BUTTERFLY_W_T1)       # published listing
    assert t2.w_images == vecset(F2, BUTTERFLY_W_T2)       # derived
    assert design.w_source == vecset(F2, BUTTERFLY_W_S)    # derived
    assert design.t_source == 2
    ok = elapsed < 1.0
    report("1 butterfly golden design", ok, f"{elapsed * 1000:.0f} ms")
    assert ok, f"design pipeline took {elapsed:.3f}s"


def test_acceptance_02_butterfly_table(butterfly):
    g, ts, design = butterfly
    prof = design.input_profile
    assert (prof.d_free, prof.t_dfree) == (5, 6)
    expected = {
        # derived profiles; the published T_dfree column reads one lower,
        # consistent with dropping the forced leading zero block of these
        # z-divisible output generators
        "t1": ("z+z^3, z^3+z^4+z^6", 5, 10),
        "t2": ("z^3+z^4+z^6, z+z^2+z^3", 6, 13),
    }
    for sink, (gen_text, d, t) in expected.items():
        sa = design.sinks[sink]
        assert sa.output_gen.to_str() == gen_text
        assert sa.output_profile.d_free == d
        assert sa.output_profile.d_free == brute_force_min_weight(sa.output_gen)
        assert sa.output_profile.t_dfree == t
        assert sa.mode is DecodeMode.INPUT_TRELLIS
    report("2 butterfly output-code table", True, "profiles (5,10) and (6,13), both input-trellis")


def test_acceptance_03_comb_table(comb):
    g, ts, design = comb
    prof = design.input_profile
    assert prof.d_free == 9
    assert prof.d_free == brute_force_min_weight(design.input_code, max_degree=8)
    assert prof.t_dfree == 15  # derived; published value reads 14
    assert design.t_source == 4
    processing = {
        "t1": "1, 0; 0, 1",
        "t2": "1, 2; 0, 1",
        "t3": "2, 2; 0, 1",
        "t4": "1, 2; 2, 0",
        "t5": "2, 2; 2, 0",
        "t6": "2, 2; 2, 1",
    }
    # Derived output profiles, free distances re-verified by exhaustive
    # enumeration. The published profile column disagrees on several cells
    # it cannot be right about: the first sink's output generator is z times
    # the input generator, so its free distance equals the input code's.
    profiles = {
        "t1": (9, 16),
        "t2": (6, 12),
        "t3": (8, 15),
        "t4": (7, 13),
        "t5": (9, 17),
        "t6": (6, 14),
    }
    for sink in g.sinks:
        sa = design.sinks[sink]
        assert sa.t_sink == 2
        assert sa.proc_matrix == PolyMatrix.parse(F3, processing[sink])
        assert sa.proc_poly.monic() == Poly.parse(F3, "z")
        assert (sa.output_profile.d_free, sa.output_profile.t_dfree) == profiles[sink]
        assert sa.mode is DecodeMode.OUTPUT_TRELLIS
    for sink in ("t1", "t3"):  # the disputed free-distance cells
        sa = design.sinks[sink]
        assert sa.output_profile.d_free == brute_force_min_weight(
            sa.output_gen, max_degree=8
        )
    report("3 combination-network table", True, "t_s=4, all sinks output-trellis")


def test_acceptance_04a_spaced_errors_butterfly_as_stated(butterfly):
    # As stated: single-edge errors every 6 network uses decode with zero
    # information-symbol errors. Minimum-distance decoding provably ties at
    # this exact spacing (two consecutive direct-edge errors sit equidistant
    # from the transmitted path and a weight-8 codeword), so this criterion
    # cannot be met by any tie-breaking rule; see the decisions notes.
    g, ts, design = butterfly
    counters = spaced_error_check(design, spacing=6, frames=10_000, frame_len=60, seed=2024)
    errors = {t: c.bit_errors for t, c in counters.items()}
    ok = all(v == 0 for v in errors.values())
    report("4a spaced errors, butterfly, spacing 6 (as stated)", ok, f"errors per sink {errors}")
    assert ok, (
        f"nonzero symbol errors {errors} at spacing 6: boundary distance ties; "
        "spacing 7 decodes clean (see companion test)"
    )


def test_acceptance_04b_spaced_errors_butterfly_tie_free(butterfly):
    # One network use beyond the error-event interval removes every tie:
    # exhaustive over ordered single-edge error pairs, then 10^4 random
    # frames.
    g, ts, design = butterfly
    from cnecc.errorsim import ErrorModel, cell_rng, simulate_frames

    for e1 in range(10):
        for e2 in range(10):
            counters = simulate_frames(
                design,
                ErrorModel.scripted([(10, e1, 1), (17, e2, 1)]),
                4,
                40,
                cell_rng(40, e1, e2),
            )
            assert all(c.bit_errors == 0 for c in counters.values()), (e1, e2)
    counters = spaced_error_check(design, spacing=7, frames=10_000, frame_len=60, seed=2024)
    errors = {t: c.bit_errors for t, c in counters.items()}
    ok = all(v == 0 for v in errors.values())
    report("4b spaced errors, butterfly, spacing 7", ok, f"10^4 frames, errors {errors}")
    assert ok


def test_acceptance_04c_spaced_errors_comb_as_stated(comb):
    g, ts, design = comb
    counters = spaced_error_check(design, spacing=14, frames=10_000, frame_len=56, seed=9)
    errors = {t: c.bit_errors for t, c in counters.items()}
    ok = all(v == 0 for v in errors.values())
    report("4c spaced errors, combination network, spacing 14", ok, f"10^4 frames, errors {errors}")
    assert ok


def test_acceptance_05_free_distance_oracle():
    shipped = [
        load_builtin_code("c1"),
        load_builtin_code("c2"),
        load_builtin_code("c3"),
        load_builtin_code("ternary9"),
    ]
    for gen in shipped:
        assert free_distance(gen) == brute_force_min_weight(gen)
    rng = random.Random(505)
    checked = 0
    while checked < 50:
        field = rng.choice([F2, F3])
        n = rng.choice([2, 3])
        rows = [
            [
                Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(1, 6))])
                for _ in range(n)
            ]
        ]
        try:
            gen = GeneratorMatrix(field, rows)
        except ValueError:
            continue
        if gen.degree > 4 or is_catastrophic(gen):
            continue
        if field.q ** (gen.k * (2 * gen.degree + gen.n + 1)) > 1_000_000:
            continue
        assert free_distance(gen) == brute_force_min_weight(gen), gen.to_str()
        checked += 1
    report("5 free-distance oracle equivalence", True, "4 shipped + 50 random codes")


def test_acceptance_06_bound_suite(butterfly, comb):
    for name, (g, ts, design) in (("butterfly", butterfly), ("comb4c2", comb)):
        br = bound_report(design)
        assert design.t_source <= br.w_s_weight_bound
        prof = design.input_profile
        delta = design.input_code.degree
        assert prof.t_dfree <= (prof.d_free - 1) * delta + 1
        assert prof.d_free <= singleton_bound(
            design.input_code.n, design.input_code.k, delta
        )
        for sa in design.sinks.values():
            op = sa.output_profile
            og = sa.output_gen
            assert op.d_free <= singleton_bound(og.n, og.k, og.degree)
            if not op.catastrophic and og.degree >= 1:
                assert op.t_dfree <= (op.d_free - 1) * og.degree + 1
        rows = instantaneous_comparison(design)
        assert all(inst <= delay for _, _, inst, delay in rows)
    report("6 bound suite", True, "weight, spacing, Singleton and delay-free bounds hold")


def _separated(lo, hi):
    return lo.ber + lo.ci95() < hi.ber - hi.ci95()


def test_acceptance_07_ber_sweep(butterfly):
    g, ts, _ = butterfly
    pats = ErrorPatternSet.all_single(g)
    designs = {
        name: design_cnecc(ts, pats, load_builtin_code(name))
        for name in ("c1", "c2", "c3")
    }
    assertion_grid = [0.05, 0.08, 0.25, 0.30]
    curve_grid = [0.12, 0.16, 0.20]
    res = ber_sweep(designs, assertion_grid, frames=100_000, frame_len=32, seed=424242)
    curve = ber_sweep(designs, curve_grid, frames=20_000, frame_len=32, seed=424242)
    res.points.extend(curve.points)

    def pt(code, sink, p):
        return res.point(code, sink, p)

    for sink in ("t1", "t2"):
        # (a) smallest p: free-distance dominated ordering, CIs separated
        assert _separated(pt("c3", sink, 0.05), pt("c2", sink, 0.05))
        assert _separated(pt("c2", sink, 0.05), pt("c1", sink, 0.05))
        # (b) largest p: the low-spacing code wins over the high-spacing one
        assert _separated(pt("c1", sink, 0.30), pt("c3", sink, 0.30))
        # (c) every pairwise crossover lies inside [0.08, 0.25]: the sign of
        # the gap is settled on both flanks and opposite between them
        for a, b in (("c1", "c2"), ("c1", "c3"), ("c2", "c3")):
            for p in (0.05, 0.08):
                assert _separated(pt(b, sink, p), pt(a, sink, p)), (a, b, sink, p)
            for p in (0.25, 0.30):
                assert _separated(pt(a, sink, p), pt(b, sink, p)), (a, b, sink, p)
    report(
        "7 probabilistic-model sweep",
        True,
        "orderings separated at both ends; all crossovers inside [0.08, 0.25]",
    )


def test_acceptance_08a_windowed_error_property_as_stated():
    # As stated: error sequences whose weight in every window of t_dfree
    # consecutive segments stays within floor((d_free-1)/2) decode exactly,
    # 1000 frames per shipped code. Boundary-weight sequences can tie with a
    # codeword, so exact decoding is not achievable for every such sequence;
    # the companion test pins the provable property.
    rng = random.Random(88)
    failures = {}
    for name in ("c1", "c2", "c3", "ternary9"):
        gen = load_builtin_code(name)
        q = gen.field.q
        d = free_distance(gen)
        window = t_dfree(gen)
        budget = (d - 1) // 2
        bad = 0
        for _ in range(1000):
            blocks = [(rng.randrange(q),) for _ in range(50)]
            sent = [list(b) for b in gen.encode(blocks, tail=True)]
            recent = []
            for t in range(len(sent)):
                recent = [(tt, w) for tt, w in recent if tt > t - window]
                if sum(w for _, w in recent) < budget and rng.random() < 0.25:
                    comp = rng.randrange(gen.n)
                    delta = rng.randrange(1, q)
                    sent[t][comp] = gen.field.add(sent[t][comp], delta)
                    recent.append((t, 1))
            from cnecc.convcode import viterbi_decode

            if viterbi_decode(gen, [tuple(b) for b in sent], 50) != blocks:
                bad += 1
        failures[name] = bad
    ok = all(v == 0 for v in failures.values())
    report("8a windowed-error decoding (as stated)", ok, f"wrong frames {failures}")
    assert ok, (
        f"wrong frames {failures}: boundary-weight windows admit distance "
        "ties (companion test shows the true path is never strictly beaten)"
    )


def test_acceptance_08b_windowed_error_optimality():
    # Provable form: under the same windowed weight budget the transmitted
    # path is always among the minimum-distance paths, so every wrong
    # decode is an exact tie.
    rng = random.Random(88)
    for name in ("c1", "c2", "c3", "ternary9"):
        gen = load_builtin_code(name)
        q = gen.field.q
        d = free_distance(gen)
        window = t_dfree(gen)
        budget = (d - 1) // 2
        tr = build_trellis(gen)
        for _ in range(1000):
            blocks = [(rng.randrange(q),) for _ in range(50)]
            sent = [list(b) for b in gen.encode(blocks, tail=True)]
            recent = []
            injected = 0
            for t in range(len(sent)):
                recent = [(tt, w) for tt, w in recent if tt > t - window]
                if sum(w for _, w in recent) < budget and rng.random() < 0.25:
                    comp = rng.randrange(gen.n)
                    delta = rng.randrange(1, q)
                    sent[t][comp] = gen.field.add(sent[t][comp], delta)
                    recent.append((t, 1))
                    injected += 1
            rec = np.asarray(sent, dtype=np.uint8).reshape(1, -1, gen.n)
            idx, dist = _kernels.viterbi_frames(tr.next_state, tr.outputs, rec, 0)
            assert dist[0] <= injected
            decoded = [tuple(int(x) for x in tr.inputs[i]) for i in idx[0][:50]]
            if decoded != blocks:
                assert dist[0] == injected
    report("8b windowed-error optimality", True, "true path never strictly beaten, 1000 frames/code")


def test_acceptance_09_determinism(tmp_path):
    from cnecc.cli import main

    sim_args = [
        "simulate", "--network", "builtin:butterfly",
        "--codes", "builtin:c1;builtin:c2;builtin:c3", "--p-grid", "0.1,0.2",
        "--frames", "2000", "--frame-len", "32", "--seed", "31337",
        "--force-input-trellis",
    ]
    csvs = []
    for tag in ("x", "y"):
        out = tmp_path / f"{tag}.csv"
        assert main(sim_args + ["--out", str(out)]) == 0
        csvs.append(out.read_bytes())
    reports = []
    for tag in ("x", "y"):
        out = tmp_path / f"{tag}.txt"
        assert main(
            ["analyze", "--network", "builtin:butterfly", "--patterns", "all-single",
             "--code", "builtin:c2", "--out", str(out)]
        ) == 0
        reports.append(out.read_bytes())
    ok = csvs[0] == csvs[1] and reports[0] == reports[1]
    report("9 determinism", ok, "byte-identical CSV and report across reruns")
    assert ok
