"""Command-line front end.

    stabverify analyze DATA [--trials N] [--seed S] [--partitions ...] ...
    stabverify simulate --graph path:4 --noise z=0.02 --shots 100000 --out f.json
    stabverify robustness INPUT [--partitions all] [--method auto|dense|reduced]

DATA is a measurement-record JSON file; bundled example datasets table1.json
and table2.json resolve by name if no local file shadows them.  Exit codes:
0 success, 2 malformed input, 3 robustness solve not possible or not
converged (a partial report is still emitted).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__
from .bounds import GeneratorData, bound_report, er_lower_from_state
from .pauli import Graph, LocalFrame, NotTwoColorableError, two_coloring
from .presets import FRAME_PRESET_GRAPHS, FRAME_PRESETS, GRAPH_PRESETS
from .reconstruct import (
    GraphDiagonalState,
    MeasurementRecord,
    RecordFormatError,
    load_record,
    ml_fit,
    raw_fidelity,
    raw_purity,
    record_from_json_dict,
    save_record,
)
from .sdp import all_bipartitions, ppt_robustness, RobustnessProblem, symmetry_reduced_robustness
from .simulate import NoiseModel, apply_noise, exact_expectations, generator_indices, sample_record
from .solver import SdpConvergenceError

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_SDP = 3


@dataclass
class Report:
    """Analysis results; every numeric leaf carries a provenance tag."""

    sections: dict = field(default_factory=dict)

    def add(self, section: str, name: str, value: float, provenance: str,
            sigma: float | None = None):
        leaf = {"value": float(value), "provenance": provenance}
        if sigma is not None:
            leaf["sigma"] = float(sigma)
        self.sections.setdefault(section, {})[name] = leaf

    def set_section(self, section: str, payload):
        self.sections[section] = payload

    def to_json(self) -> str:
        return json.dumps(self.sections, indent=1)

    def to_text(self) -> str:
        lines = []
        for section, payload in self.sections.items():
            lines.append(f"[{section}]")
            if isinstance(payload, dict):
                for name, leaf in payload.items():
                    if isinstance(leaf, dict) and "value" in leaf:
                        txt = f"  {name:<18} {leaf['value']:.12g}"
                        if "sigma" in leaf:
                            txt += f" +/- {leaf['sigma']:.12g}"
                        txt += f"   ({leaf['provenance']})"
                        lines.append(txt)
                    else:
                        lines.append(f"  {name:<18} {json.dumps(leaf)}")
            else:
                lines.append(f"  {json.dumps(payload)}")
        return "\n".join(lines) + "\n"

    def emit(self, fmt: str):
        if fmt == "json":
            sys.stdout.write(self.to_json() + "\n")
        else:
            sys.stdout.write(self.to_text())


def _resolve_data_path(path: str) -> str:
    import os

    if os.path.exists(path):
        return path
    if os.path.basename(path) == path:  # bare names may refer to bundled data
        bundled = resources.files("stabverify").joinpath("data", path)
        if bundled.is_file():
            return str(bundled)
    raise FileNotFoundError(f"no such file: {path}")


def _parse_graph(spec: str, frame_name: str | None = None) -> Graph:
    if spec in GRAPH_PRESETS:
        return GRAPH_PRESETS[spec]
    if spec.startswith("path:"):
        n = int(spec.split(":", 1)[1])
        # a preset frame pins the vertex labeling of its own chain
        if frame_name in FRAME_PRESET_GRAPHS and FRAME_PRESET_GRAPHS[frame_name].n == n:
            return FRAME_PRESET_GRAPHS[frame_name]
        return Graph.path(n)
    with open(spec) as fh:
        return Graph.from_json_dict(json.load(fh))


def _parse_frame(spec: str | None, n: int) -> LocalFrame:
    if spec is None or spec == "identity":
        return LocalFrame.identity(n)
    if spec in FRAME_PRESETS:
        frame = FRAME_PRESETS[spec]
        if frame.n != n:
            raise ValueError(f"frame preset {spec} is for {frame.n} qubits, graph has {n}")
        return frame
    with open(spec) as fh:
        return LocalFrame.from_json_list(json.load(fh))


def _parse_noise(specs, n: int) -> NoiseModel:
    eps = [0.0] * n
    w = 0.0
    for spec in specs or []:
        key, _, val = spec.partition("=")
        key = key.strip().lower()
        if key == "z":
            parts = [float(v) for v in val.split(",")]
            if len(parts) == 1:
                eps = [parts[0]] * n
            elif len(parts) == n:
                eps = parts
            else:
                raise ValueError(f"noise z= needs 1 or {n} values, got {len(parts)}")
        elif key == "w":
            w = float(val)
        else:
            raise ValueError(f"unknown noise component {key!r} (use z= or w=)")
    return NoiseModel(tuple(eps), w)


def _parse_partitions(specs, n: int):
    if specs is None:
        return None
    out = []
    for spec in specs:
        if spec == "all":
            return all_bipartitions(n)
        out.append(tuple(int(tok) for tok in spec.split(",") if tok.strip()))
    return out


def _input_digest(record: MeasurementRecord, path: str) -> dict:
    return {
        "path": path,
        "n": record.n,
        "edges": sorted(list(e) for e in record.graph.edges),
        "measured_indices": record.measured_indices(),
        "full_group": record.has_full_group(),
        "generators_present": record.has_generators(),
    }


def cmd_analyze(args) -> int:
    try:
        path = _resolve_data_path(args.data)
        record = load_record(path)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    report = Report()
    report.set_section("input", _input_digest(record, args.data))
    b_size = None
    try:
        b_size = two_coloring(record.graph).b_size
    except (NotTwoColorableError, ValueError) as exc:
        report.set_section("two_coloring", {"error": str(exc)})

    state = None
    if record.has_full_group():
        f, fs = raw_fidelity(record)
        m, _ = record.full_vector()
        report.add("raw", "fidelity", f, "raw", sigma=fs)
        report.add("raw", "purity", raw_purity(m), "raw")
        state = ml_fit(record)
        report.add("ml", "fidelity", state.fidelity, "ml")
        report.add("ml", "purity", state.purity(), "ml")
        report.add("ml", "entropy", state.entropy(), "ml")
        if b_size is not None:
            report.add("ml", "er_lower", er_lower_from_state(state, b_size), "ml")

    if record.has_generators() and b_size is not None:
        a, s = record.generator_values()
        rep = bound_report(GeneratorData(a, s), b_size, trials=args.trials, seed=args.seed)
        for name in ("f_min", "p_min", "rg_min", "lrg_min", "er_min"):
            bv = getattr(rep, name)
            report.add("generator_bounds", name, bv.value, "generator-bound", sigma=bv.sigma)

    code = EXIT_OK
    partitions = _parse_partitions(args.partitions, record.n)
    if partitions:
        if state is None:
            report.set_section(
                "sdp",
                {"error": "PPT robustness needs a reconstructed state (full "
                          "stabilizer group); generator-only data gives the "
                          "rg_min bound instead"},
            )
            code = EXIT_SDP
        else:
            code = _run_sdp(report, state, record.graph, record.frame,
                            partitions, args.method)
    report.emit(args.format)
    return code


def _run_sdp(report: Report, state: GraphDiagonalState, graph, frame,
             partitions, method: str) -> int:
    try:
        if method == "dense":
            from .operators import graph_diagonal_operator

            rho = graph_diagonal_operator(state.p, graph, frame)
            sol = ppt_robustness(RobustnessProblem(rho, partitions))
        else:
            sol = symmetry_reduced_robustness(state, graph, frame, partitions)
        payload = sol.to_json_dict()
        payload["value"] = {"value": sol.value, "provenance": "sdp"}
        payload["provenance"] = "sdp"  # applies to every number in this section
        report.set_section("sdp", payload)
        return EXIT_OK
    except SdpConvergenceError as exc:
        partial = {"error": str(exc)}
        if exc.result is not None:
            partial["best_objective"] = exc.result.objective
            partial["best_gap"] = exc.result.gap
        report.set_section("sdp", partial)
        return EXIT_SDP


def cmd_simulate(args) -> int:
    try:
        graph = _parse_graph(args.graph, args.frame)
        frame = _parse_frame(args.frame, graph.n)
        model = _parse_noise(args.noise, graph.n)
        if args.shots < 1:
            raise ValueError("--shots must be at least 1")
        state = apply_noise(graph, model)
        if args.indices == "generators":
            ks = generator_indices(graph.n)
        else:
            ks = range(1, 1 << graph.n)
        record = sample_record(state, graph, frame, indices=ks,
                               shots=args.shots, seed=args.seed)
        save_record(record, args.out)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    m = exact_expectations(state)
    from .pauli import stabilizer_group, transformed_generators
    group = stabilizer_group(transformed_generators(graph, frame))
    print(f"wrote {args.out} ({len(record.entries)} entries, {args.shots} shots)")
    print("exact expectations:")
    for k in record.measured_indices():
        print(f"  k={k:0{graph.n}b} {str(group[k]):>{graph.n + 1}}  m = {m[k]:.12g}")
    return EXIT_OK


def cmd_robustness(args) -> int:
    try:
        path = _resolve_data_path(args.input)
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    report = Report()
    try:
        if "p" in data:
            graph = Graph.from_json_dict(data["graph"])
            frame = (LocalFrame.from_json_list(data["frame"])
                     if data.get("frame") else LocalFrame.identity(graph.n))
            state = GraphDiagonalState(np.asarray(data["p"], dtype=float))
            record = None
        else:
            record = record_from_json_dict(data)
            graph, frame = record.graph, record.frame
            if not record.has_full_group():
                print(
                    "error: PPT robustness needs a state, which requires the "
                    "full stabilizer group (or a p-vector file); with "
                    "generator-only data use the analytic bound rg_min from "
                    "'stabverify analyze'",
                    file=sys.stderr,
                )
                return EXIT_SDP
            state = ml_fit(record)
    except (ValueError, RecordFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    partitions = _parse_partitions(args.partitions, graph.n) or all_bipartitions(graph.n)
    report.set_section("input", {
        "path": args.input, "n": graph.n,
        "partitions": [list(t) for t in partitions],
    })
    code = _run_sdp(report, state, graph, frame, partitions, args.method)
    report.emit(args.format)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stabverify",
        description="Entanglement verification for graph-state experiments "
                    "from stabilizer measurement data.",
    )
    ap.add_argument("--version", action="version", version=f"stabverify {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full analysis of a measurement record")
    pa.add_argument("data", help="record JSON file (or bundled name, e.g. table1.json)")
    pa.add_argument("--format", choices=("text", "json"), default="text")
    pa.add_argument("--trials", type=int, default=10_000,
                    help="Monte-Carlo trials for error bars (default 10000)")
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--partitions", action="append",
                    help="'all' or comma-separated qubits; repeatable; "
                         "enables the PPT robustness solve")
    pa.add_argument("--method", choices=("reduced", "dense"), default="reduced",
                    help="robustness solver path (default reduced)")
    pa.set_defaults(fn=cmd_analyze)

    ps = sub.add_parser("simulate", help="write a synthetic measurement record")
    ps.add_argument("--graph", required=True,
                    help="path:N, paper4, paper6, or a graph JSON file")
    ps.add_argument("--frame", default=None,
                    help="identity (default), paper4, paper6, or a frame JSON file")
    ps.add_argument("--noise", action="append",
                    help="z=eps or z=e1,...,en (graph-basis flips), w=weight "
                         "(depolarizing); repeatable")
    ps.add_argument("--shots", type=int, default=10_000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--indices", choices=("all", "generators"), default="all")
    ps.add_argument("--out", required=True)
    ps.set_defaults(fn=cmd_simulate)

    pr = sub.add_parser("robustness", help="PPT robustness of a reconstructed state")
    pr.add_argument("input", help="record JSON (full group) or state JSON with a 'p' vector")
    pr.add_argument("--partitions", action="append",
                    help="'all' (default) or comma-separated qubits; repeatable")
    pr.add_argument("--method", choices=("reduced", "dense"), default="reduced")
    pr.add_argument("--format", choices=("text", "json"), default="text")
    pr.set_defaults(fn=cmd_robustness)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
