"""Command-line front end: `cnecc analyze` runs the construction and bound
suite on a network, `cnecc simulate` runs seeded BER sweeps and writes CSV
plus a reproduction manifest.

Exit codes: 0 success, 1 invalid input, 2 design-constraint violation
(free distance below 2 t_s + 1) under --strict.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .convcode import GeneratorMatrix
from .design import (
    CneccDesign,
    ErrorPatternSet,
    bound_report,
    design_cnecc,
    format_vec,
    sorted_vecs,
    verify_code,
)
from .errorsim import ber_sweep
from .fixtures import BUILTIN_CODES, load_builtin_code, load_builtin_network, network_text
from .netgraph import compute_transfer, load_network, random_network_code


def _sha256(data: str) -> str:
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


def _load_network_arg(spec: str):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        return load_builtin_network(name), _sha256(network_text(name))
    text = Path(spec).read_text(encoding="utf-8")
    from .netgraph import parse_network

    return parse_network(text, name=spec), _sha256(text)


def _load_code_arg(spec: str, field) -> GeneratorMatrix:
    if spec.startswith("builtin:"):
        return load_builtin_code(spec.split(":", 1)[1])
    if spec in BUILTIN_CODES:
        return load_builtin_code(spec)
    path = Path(spec)
    if path.exists():
        return GeneratorMatrix.parse(field, path.read_text(encoding="utf-8"))
    return GeneratorMatrix.parse(field, spec)


def _load_patterns_arg(spec: str, graph) -> ErrorPatternSet:
    if spec in ("all-single", "all-double"):
        return ErrorPatternSet.parse(spec, graph)
    return ErrorPatternSet.parse(Path(spec).read_text(encoding="utf-8"), graph)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def _analyze_report(design: CneccDesign, strict: bool):
    g = design.graph
    code = design.transfer.code
    lines = []
    records = []

    def rec(key, val):
        records.append((key, _fmt(val)))

    lines.append(f"network: {g.name or 'unnamed'}")
    lines.append(
        f"  field F_{code.field.q}, |V|={len(g.nodes)}, |E|={g.num_edges}, "
        f"dimension n={code.n}"
    )
    n_min, per_sink = g.min_cut()
    lines.append(
        "  min-cut: "
        + str(n_min)
        + " ("
        + ", ".join(f"{t}: {v}" for t, v in per_sink.items())
        + ")"
    )
    lines.append(f"  delay spread T_delay = {design.t_delay}")
    rec("network.field", code.field.q)
    rec("network.edges", g.num_edges)
    rec("network.dimension", code.n)
    rec("network.min_cut", n_min)
    rec("network.t_delay", design.t_delay)
    lines.append(f"  patterns: {len(design.patterns)}  error vectors: {len(design.w_phi)}")
    rec("design.patterns", len(design.patterns))
    rec("design.error_vectors", len(design.w_phi))
    for t in g.sinks:
        sa = design.sinks[t]
        lines.append(f"sink {t}:")
        lines.append(f"  M_T(z) = {sa.m_matrix.to_str()}")
        lines.append(f"  p_T(z) = {sa.proc_poly.to_str()}")
        lines.append(f"  P_T(z) = {sa.proc_matrix.to_str()}")
        lines.append(f"  |W_T| = {len(sa.w_images)}   t_T = {sa.t_sink}")
        rec(f"sink.{t}.m_matrix", sa.m_matrix.to_str())
        rec(f"sink.{t}.p_poly", sa.proc_poly.to_str())
        rec(f"sink.{t}.p_matrix", sa.proc_matrix.to_str())
        rec(f"sink.{t}.w_t_size", len(sa.w_images))
        rec(f"sink.{t}.t_t", sa.t_sink)
        if sa.output_gen is not None:
            prof = sa.output_profile
            lines.append(f"  G_O(z) = {sa.output_gen.to_str()}")
            lines.append(
                f"  output code: d_free = {prof.d_free}, T_dfree = {_fmt(prof.t_dfree)}, "
                f"catastrophic = {_fmt(prof.catastrophic)}, m_T = {_fmt(sa.m_cap)}"
            )
            lines.append(f"  decoding on: {sa.mode}")
            rec(f"sink.{t}.output_gen", sa.output_gen.to_str())
            rec(f"sink.{t}.d_free_out", prof.d_free)
            rec(f"sink.{t}.t_dfree_out", prof.t_dfree)
            rec(f"sink.{t}.catastrophic", prof.catastrophic)
            rec(f"sink.{t}.m_cap", sa.m_cap)
            rec(f"sink.{t}.mode", sa.mode)
    lines.append(f"W_s ({len(design.w_source)} reflections):")
    for v in sorted_vecs(design.w_source):
        lines.append(f"  {format_vec(v)}")
    lines.append(f"t_s = {design.t_source}   r = {design.r}")
    rec("design.w_s_size", len(design.w_source))
    rec("design.t_s", design.t_source)
    rec("design.r", design.r)
    violation = False
    if design.input_code is not None:
        prof = design.input_profile
        need = 2 * design.t_source + 1
        ok = verify_code(design.input_code, design.t_source, code.n)
        lines.append(f"input code: {design.input_code.to_str()}")
        lines.append(
            f"  d_free = {prof.d_free}, T_dfree = {_fmt(prof.t_dfree)}, "
            f"required d_free >= {need}: {'ok' if ok else 'VIOLATED'}"
        )
        rec("code.generator", design.input_code.to_str())
        rec("code.d_free", prof.d_free)
        rec("code.t_dfree", prof.t_dfree)
        rec("code.required_d_free", need)
        rec("code.requirement_ok", ok)
        if not ok:
            violation = True
    br = bound_report(design)
    lines.append("bounds:")
    for key, val in br.records():
        lines.append(f"  {key} = {_fmt(val)}")
        rec(f"bounds.{key}", val)
    lines.append("[records]")
    for key, val in records:
        lines.append(f"{key}={val}")
    return "\n".join(lines) + "\n", violation


def _write_manifest(path: Path, command: str, args, hashes: dict, seed):
    manifest = {
        "command": command,
        "argv": list(args),
        "inputs": hashes,
        "seed": seed,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _cmd_analyze(args) -> int:
    (graph, netcode), net_hash = _load_network_arg(args.network)
    if netcode is None or args.random_code:
        err = _needs_random_code(args, netcode)
        if err:
            print(f"error: {err}", file=sys.stderr)
            return 1
        netcode = _draw_random_code(graph, netcode, args.seed)
    transfer = compute_transfer(graph, netcode)
    patterns = _load_patterns_arg(args.patterns, graph)
    input_code = None
    if args.code:
        input_code = _load_code_arg(args.code, netcode.field)
    design = design_cnecc(transfer, patterns, input_code)
    report, violation = _analyze_report(design, args.strict)
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8")
        _write_manifest(
            Path(args.out).with_suffix(Path(args.out).suffix + ".manifest.json"),
            "analyze",
            sys.argv[1:],
            {"network": net_hash},
            args.seed,
        )
    else:
        sys.stdout.write(report)
    if violation:
        if args.strict:
            return 2
        print("warning: input code fails the free-distance requirement", file=sys.stderr)
    return 0


def _needs_random_code(args, netcode):
    if netcode is None and not args.random_code:
        return "network file declares no kernels; pass --random-code --seed"
    if args.seed is None:
        return "--random-code requires --seed"
    return None


def _draw_random_code(graph, netcode, seed):
    from .galois import GF

    if netcode is not None:
        field = netcode.field
    else:
        field = getattr(graph, "declared_field", None) or GF(2)
    return random_network_code(graph, graph.min_cut()[0], field, seed)


def _cmd_simulate(args) -> int:
    (graph, netcode), net_hash = _load_network_arg(args.network)
    if netcode is None or args.random_code:
        err = _needs_random_code(args, netcode)
        if err:
            print(f"error: {err}", file=sys.stderr)
            return 1
        netcode = _draw_random_code(graph, netcode, args.seed)
    transfer = compute_transfer(graph, netcode)
    patterns = _load_patterns_arg(args.patterns, graph)
    p_grid = [float(p) for p in args.p_grid.split(",")]
    designs = {}
    code_texts = {}
    for spec in args.codes.split(";"):
        spec = spec.strip()
        code = _load_code_arg(spec, netcode.field)
        name = spec.split(":", 1)[1] if spec.startswith("builtin:") else spec
        designs[name] = design_cnecc(transfer, patterns, code)
        code_texts[name] = code.to_str()
    result = ber_sweep(
        designs,
        p_grid,
        frames=args.frames,
        frame_len=args.frame_len,
        seed=args.seed,
        force_input_trellis=args.force_input_trellis,
    )
    out = Path(args.out)
    result.write_csv(out)
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"),
        "simulate",
        sys.argv[1:],
        {"network": net_hash, "codes": code_texts},
        args.seed,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnecc",
        description=(
            "Construct and analyze convolutional network-error-correcting "
            "codes for unit-delay multicast networks, and simulate their "
            "bit error rates under a probabilistic edge-error model."
        ),
    )
    parser.add_argument("--version", action="version", version=f"cnecc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the construction and bound suite")
    pa.add_argument("--network", required=True, help="network file or builtin:<name>")
    pa.add_argument(
        "--patterns",
        required=True,
        help="pattern file, or 'all-single' / 'all-double'",
    )
    pa.add_argument("--code", help="input code: text, file, or builtin:<name>")
    pa.add_argument("--random-code", action="store_true", help="draw a random network code")
    pa.add_argument("--seed", type=int, help="seed for --random-code")
    pa.add_argument("--out", help="write the report here (stdout otherwise)")
    pa.add_argument(
        "--strict",
        action="store_true",
        help="exit 2 when the code fails the free-distance requirement",
    )
    pa.set_defaults(func=_cmd_analyze)

    ps = sub.add_parser("simulate", help="seeded Monte-Carlo BER sweep")
    ps.add_argument("--network", required=True)
    ps.add_argument("--patterns", default="all-single")
    ps.add_argument("--codes", required=True, help="';'-separated code specs")
    ps.add_argument("--p-grid", required=True, help="comma-separated p values")
    ps.add_argument("--frames", type=int, required=True)
    ps.add_argument("--frame-len", type=int, default=200)
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--out", required=True, help="CSV output path")
    ps.add_argument("--random-code", action="store_true")
    ps.add_argument(
        "--force-input-trellis",
        action="store_true",
        help="decode every sink on the input-code trellis regardless of mode",
    )
    ps.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
