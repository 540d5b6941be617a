"""Command-line entry point: gen, normalize, verify, metrics, decode, sweep.

Machine output (JSON/CSV) goes to files or stdout; human-readable logging
goes to stderr.  Every command is deterministic given its flags and seed, so
re-running produces byte-identical outputs.  Exit codes: 0 success, 1 domain
error, 2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

import numpy as np

from . import datasets, diagram, metrics, rewrite, semantics
from .errors import ResourceCapError, WplzxError
from .masd import (
    NORMALIZED,
    RAW,
    DefectGraph,
    WindingModel,
    lambda_sweep,
    masd_decode,
    sample_surface_code,
)
from .masd.surface import CONSTANT, TWO_SECTOR, UNIFORM, build_code

SWEEP_COLUMNS = [
    "lambda",
    "p_phys",
    "distance",
    "trials",
    "logical_error_rate",
    "drg_toy_mean",
    "drg_pm_mean",
    "mean_cost",
    "mode",
]

METRIC_COLUMNS = ["seed", "n_qubits", "n_spiders", "pqvr", "csc_total", "csc_cnot", "fp"]


def log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"


# --- gen ---


def cmd_gen(args) -> int:
    cfg = datasets.preset(args.preset, seed=args.seed)
    overrides = {}
    if args.qubits is not None:
        overrides["qubits"] = args.qubits
    if args.layers is not None:
        overrides["layers"] = args.layers
    if args.spiders_min is not None:
        overrides["spiders_min"] = args.spiders_min
    if args.spiders_max is not None:
        overrides["spiders_max"] = args.spiders_max
    if args.density is not None:
        overrides["density"] = args.density
    if overrides:
        cfg = datasets.replace(cfg, **overrides)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    counts = {}
    for i in range(args.count):
        if args.preset.startswith("d1"):
            d = datasets.gen_random_wplzx(cfg, instance=i)
            name = f"{args.preset}-s{args.seed}-{i:03d}.diagram.json"
            (out / name).write_text(diagram.serialize(d), encoding="utf-8")
            counts[name] = {"spiders": len(d.spiders), "wires": len(d.wires)}
        else:
            c = datasets.gen_hea(cfg, instance=i)
            name = f"{args.preset}-s{args.seed}-{i:03d}.circuit.txt"
            (out / name).write_text(datasets.serialize_circuit(c), encoding="utf-8")
            counts[name] = {"gates": c.gate_count, "cnots": c.cnot_count}
        files.append(name)
    manifest = {
        "preset": args.preset,
        "seed": args.seed,
        "count": args.count,
        "config": {
            "qubits": cfg.qubits,
            "layers": cfg.layers,
            "spiders_min": cfg.spiders_min,
            "spiders_max": cfg.spiders_max,
            "grid_orders": list(cfg.grid_orders),
            "density": cfg.density,
            "rotation_basis": list(cfg.rotation_basis),
        },
        "files": files,
        "counts": counts,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    log(f"wrote {len(files)} files + manifest to {out}")
    return 0


# --- normalize ---


def _load_diagram(path: str) -> diagram.Diagram:
    return diagram.deserialize(Path(path).read_text(encoding="utf-8"))


def cmd_normalize(args) -> int:
    d = _load_diagram(args.input)
    norm, labels, trace = rewrite.wzcc_normalize(d)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "normalized.diagram.json").write_text(diagram.serialize(norm), encoding="utf-8")
    (out / "labels.json").write_text(
        json.dumps([lab.to_json() for lab in labels], sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    (out / "trace.jsonl").write_text(trace.to_jsonl(), encoding="utf-8")
    log(
        f"normalized {len(d.spiders)} -> {len(norm.spiders)} spiders "
        f"({len(labels)} regions, {len(trace)} rewrites)"
    )
    return 0


# --- verify ---


def cmd_verify(args) -> int:
    d = _load_diagram(args.input)
    if args.trace is not None:
        trace = rewrite.RewriteTrace.from_jsonl(Path(args.trace).read_text(encoding="utf-8"))
        candidate = rewrite.apply_trace(d, trace)
        how = "trace replay"
    else:
        candidate, _, _ = rewrite.wzcc_normalize(d)
        how = "normalization"
    before = semantics.evaluate(d, max_open_wires=args.max_wires)
    after = semantics.evaluate(candidate, max_open_wires=args.max_wires)

    # The oracle must agree with itself across contraction orders before its
    # verdict means anything (big interference-heavy networks can exhaust
    # double precision).
    before_seq = semantics.evaluate(d, max_open_wires=args.max_wires, order="sequential")
    scale = max(float(np.max(np.abs(before))), float(np.max(np.abs(after))), 1e-300)
    self_dev = float(np.max(np.abs(before - before_seq))) / scale
    if self_dev > args.tol:
        sys.stdout.write(
            f"verdict INCONCLUSIVE\nmethod {how}\noracle_instability {self_dev!r}\n"
            f"tol {args.tol!r}\n"
        )
        log("matrix oracle is not order-stable at this scale; shrink the diagram")
        return 3

    deviation = semantics.max_phase_deviation(after / scale, before / scale)
    sound = deviation <= args.tol
    verdict = "SOUND" if sound else "UNSOUND"
    sys.stdout.write(
        f"verdict {verdict}\nmethod {how}\nmax_deviation {deviation!r}\ntol {args.tol!r}\n"
    )
    return 0 if sound else 1


# --- metrics ---


def _pair_files(raw: str, opt: str) -> list[tuple[Path, Path]]:
    rp, op = Path(raw), Path(opt)
    if rp.is_file() and op.is_file():
        return [(rp, op)]
    if rp.is_dir() and op.is_dir():
        raws = sorted(p for p in rp.iterdir() if p.name != "manifest.json" and p.is_file())
        opts = sorted(p for p in op.iterdir() if p.name != "manifest.json" and p.is_file())
        if len(raws) != len(opts):
            raise WplzxError(
                f"pairing mismatch: {len(raws)} raw files vs {len(opts)} optimized"
            )
        return list(zip(raws, opts))
    raise WplzxError("--raw and --opt must both be files or both directories")


def _state_of(d: diagram.Diagram) -> np.ndarray | None:
    """|0..0>-column state, or None when it cannot be trusted.

    Untrusted means: too many open wires, contraction over the size cap, or
    an order-unstable contraction (cancellation-heavy networks where double
    precision cannot support a fidelity number).
    """
    if d.n_inputs + d.n_outputs > semantics.MAX_OPEN_WIRES:
        return None
    try:
        mat = semantics.evaluate(d)
        mat_seq = semantics.evaluate(d, order="sequential")
    except semantics.DimensionOverflow:
        return None
    scale = float(np.max(np.abs(mat)))
    if scale < 1e-300 or np.max(np.abs(mat - mat_seq)) > 1e-6 * scale:
        return None
    state = mat[:, 0]
    norm = np.linalg.norm(state)
    if norm < 1e-9 * scale:
        return None
    return state / norm


def _metric_row(idx: int, raw_path: Path, opt_path: Path, grid: int) -> dict:
    seed = idx
    for tok in raw_path.stem.split("-"):
        if tok.startswith("s") and tok[1:].isdigit():
            seed = int(tok[1:])
            break
    if raw_path.suffix == ".txt" or raw_path.name.endswith(".circuit.txt"):
        raw_c = datasets.parse_circuit(raw_path.read_text(encoding="utf-8"))
        opt_c = datasets.parse_circuit(opt_path.read_text(encoding="utf-8"))
        raw_phases, snapped = datasets.snapped_phases(raw_c, lambda q: grid)
        raw_d = datasets.circuit_to_diagram(raw_c)
        opt_d = datasets.circuit_to_diagram(opt_c)
        rep = metrics.report(
            raw_phases,
            snapped,
            raw_c.gate_count,
            opt_c.gate_count,
            raw_c.cnot_count,
            opt_c.cnot_count,
            _state_of(raw_d),
            _state_of(opt_d),
        )
        n_qubits = raw_c.n_qubits
        n_spiders = len(raw_d.spiders)
    else:
        raw_d = diagram.deserialize(raw_path.read_text(encoding="utf-8"))
        opt_d = diagram.deserialize(opt_path.read_text(encoding="utf-8"))
        thetas = [rewrite.node_total_angle(n).radians() for n in raw_d.spiders]
        grids = [n.label.grid for n in raw_d.spiders]
        snapped = [
            datasets.snap_to_grid(t, a).radians() for t, a in zip(thetas, grids)
        ]
        rep = metrics.report(
            thetas,
            snapped,
            len(raw_d.spiders),
            len(opt_d.spiders),
            0,
            0,
            _state_of(raw_d),
            _state_of(opt_d),
        )
        n_qubits = raw_d.n_inputs
        n_spiders = len(raw_d.spiders)
    return {
        "seed": seed,
        "n_qubits": n_qubits,
        "n_spiders": n_spiders,
        "pqvr": rep.pqvr,
        "csc_total": rep.csc_total,
        "csc_cnot": rep.csc_cnot,
        "fp": rep.fp,
    }


def cmd_metrics(args) -> int:
    pairs = _pair_files(args.raw, args.opt)
    rows = [
        _metric_row(i, rp, op, args.grid) for i, (rp, op) in enumerate(pairs)
    ]
    text = _csv(rows, METRIC_COLUMNS)
    numeric = ["pqvr", "csc_total", "csc_cnot", "fp"]
    footer_mean = {"seed": "mean", "n_qubits": "", "n_spiders": ""}
    footer_std = {"seed": "stddev", "n_qubits": "", "n_spiders": ""}
    for col in numeric:
        vals = [row[col] for row in rows if not np.isnan(row[col])]
        footer_mean[col] = float(np.mean(vals)) if vals else float("nan")
        footer_std[col] = (
            statistics.pstdev(vals) if len(vals) > 1 else 0.0
        )
    text += ",".join(_fmt(footer_mean[c]) for c in METRIC_COLUMNS) + "\n"
    text += ",".join(_fmt(footer_std[c]) for c in METRIC_COLUMNS) + "\n"
    _write_text(args.out, text)
    log(f"metrics over {len(rows)} pairs")
    return 0


# --- decode / sweep ---


def cmd_decode(args) -> int:
    g = DefectGraph.deserialize(Path(args.graph).read_text(encoding="utf-8"))
    matching, report = masd_decode(g, args.lam, mode=args.mode, beta=args.beta)
    lines = [
        "pairs " + ";".join(f"{u}-{v}" for u, v in matching.pairs),
        f"total_cost {matching.total_cost!r}",
        f"exact {matching.exact}",
        f"drg_toy {report.drg_toy!r}",
        f"drg_pm {report.drg_pm!r}",
        f"mode {report.mode}",
        f"lambda {report.lam!r}",
    ]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _winding_model(args) -> WindingModel:
    return WindingModel(
        kind=args.winding,
        a=args.winding_a,
        k_left=args.k_left,
        k_right=args.k_right,
        k_const=args.k_const,
    )


def cmd_curvature(args) -> int:
    from .geometry import curvature_sweep

    vals = [float(x) for x in np.linspace(args.lo, args.hi, args.points)]
    rows = curvature_sweep(vals, vals, h=args.h)
    cols = ["lambda_perp", "lambda_par", "b_eff", "R", "grad_norm"]
    _write_text(args.out, _csv(rows, cols))
    log(f"curvature landscape over {len(rows)} grid points")
    return 0


def cmd_sweep(args) -> int:
    lambdas = [float(tok) for tok in args.lambdas.split(",") if tok != ""]
    if not lambdas:
        raise WplzxError("empty lambda list")
    code = build_code(args.distance)
    model = _winding_model(args)
    instances = []
    for t in range(args.trials):
        sample, graph = sample_surface_code(
            args.distance, args.p, args.seed, trial=t, winding=model, code=code
        )
        instances.append((sample, graph))
    rows = lambda_sweep(instances, lambdas, mode=args.mode, beta=args.beta, code=code)
    _write_text(args.out, _csv(rows, SWEEP_COLUMNS))
    log(f"swept {len(lambdas)} lambda values over {args.trials} trials")
    return 0


# --- parser ---


SUBPARSERS: dict[str, argparse.ArgumentParser] = {}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wplzx", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded corpus")
    g.add_argument("--preset", required=True, choices=sorted(datasets.PRESETS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", required=True)
    g.add_argument("--qubits", type=int)
    g.add_argument("--layers", type=int)
    g.add_argument("--spiders-min", type=int)
    g.add_argument("--spiders-max", type=int)
    g.add_argument("--density", type=float)
    g.set_defaults(func=cmd_gen)

    n = sub.add_parser("normalize", help="normalize a diagram file")
    n.add_argument("--input", required=True)
    n.add_argument("--out", required=True)
    n.set_defaults(func=cmd_normalize)

    v = sub.add_parser("verify", help="matrix-check a normalization or trace replay")
    v.add_argument("--input", required=True)
    v.add_argument("--trace")
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--max-wires", type=int, default=semantics.MAX_OPEN_WIRES)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("metrics", help="compression/fidelity metrics over pairs")
    m.add_argument("--raw", required=True)
    m.add_argument("--opt", required=True)
    m.add_argument("--grid", type=int, default=8, help="grid order for phase alignment")
    m.add_argument("--out", default="-")
    m.set_defaults(func=cmd_metrics)

    d = sub.add_parser("decode", help="decode one defect-graph file")
    d.add_argument("--graph", required=True)
    d.add_argument("--lambda", dest="lam", type=float, default=0.0)
    d.add_argument("--mode", choices=[NORMALIZED, RAW], default=NORMALIZED)
    d.add_argument("--beta", type=float, default=1.0)
    d.add_argument("--out", default="-")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("sweep", help="Monte-Carlo lambda sweep on surface codes")
    s.add_argument("--lambdas", required=True, help="comma-separated lambda grid")
    s.add_argument("--distance", type=int, default=3)
    s.add_argument("--p", type=float, default=0.05)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=[NORMALIZED, RAW], default=NORMALIZED)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--winding", choices=[UNIFORM, TWO_SECTOR, CONSTANT], default=TWO_SECTOR)
    s.add_argument("--winding-a", type=int, default=8)
    s.add_argument("--k-left", type=int, default=0)
    s.add_argument("--k-right", type=int, default=1)
    s.add_argument("--k-const", type=int, default=0)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("curvature", help="curvature landscape CSV over anisotropy grid")
    c.add_argument("--lo", type=float, default=0.1)
    c.add_argument("--hi", type=float, default=1.0)
    c.add_argument("--points", type=int, default=10)
    c.add_argument("--h", type=float, default=1e-5)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_curvature)

    SUBPARSERS.clear()
    SUBPARSERS.update(
        gen=g, normalize=n, verify=v, metrics=m, decode=d, sweep=s, curvature=c
    )
    for subparser in SUBPARSERS.values():
        subparser.add_argument(
            "--config", help="JSON file of flag overrides applied as defaults"
        )
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    # --config supplies defaults; explicit flags still win.
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            cfg_path = argv[idx + 1]
        except IndexError:
            parser.error("--config needs a path")
        overrides = json.loads(Path(cfg_path).read_text(encoding="utf-8"))
        for sp in SUBPARSERS.values():
            known = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in overrides.items() if k in known})

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        log(f"resource cap: {exc}")
        return 3
    except WplzxError as exc:
        log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
