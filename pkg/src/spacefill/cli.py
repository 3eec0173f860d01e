"""Command-line interface: curve generation, evaluation, and serve mode.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .curve import write_curve
from .datasets import BUILTIN_DATASETS, builtin_dataset
from .errors import SpacefillError
from .evaluate import compare_methods, linearize
from .field import ScalarField, load_scalar_field, write_scalar_field
from .methods import DEFAULT_SPLIT_THRESHOLD, METHOD_NAMES, build_curve
from .multiscale import reconstruct_to_grid
from .tree import read_tree, write_tree

__all__ = ["main", "cmd_gen", "cmd_eval", "cmd_serve"]


class _UsageError(Exception):
    pass


def _parse_ints(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.replace("x", ",").split(",") if p)
    except ValueError:
        raise _UsageError(f"cannot parse {name} value {text!r}") from None


def _load_input(source: str) -> tuple[str, ScalarField]:
    if source in BUILTIN_DATASETS:
        return source, builtin_dataset(source)
    path = Path(source)
    return path.stem, load_scalar_field(path)


def _median_member(fields: list[ScalarField]) -> int:
    """Index of the member whose mean value is the (lower) median of means."""
    means = [float(f.values.mean()) for f in fields]
    order = sorted(range(len(means)), key=lambda i: (means[i], i))
    return order[(len(order) - 1) // 2]


def cmd_gen(args) -> int:
    """Generate a curve, linearized values, and a run manifest."""
    if not 0.0 <= args.alpha <= 1.0:
        raise _UsageError(f"--alpha must lie in [0, 1], got {args.alpha}")
    if args.method not in METHOD_NAMES:
        raise _UsageError(
            f"unknown method {args.method!r}; valid methods: {', '.join(METHOD_NAMES)}"
        )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    named = [_load_input(source) for source in args.input]
    fields = [f for _, f in named]
    dims = fields[0].dims
    for name, f in named[1:]:
        if f.dims != dims:
            raise SpacefillError(f"ensemble member {name} has dims {f.dims}, expected {dims}")
    median_idx = _median_member(fields)
    field = fields[median_idx]

    block = _parse_ints(args.block, "--block") if args.block else None
    tree = read_tree(args.tree) if args.tree else None
    generated = build_curve(
        args.method,
        field,
        alpha=args.alpha,
        block_size=block,
        rng_seed=args.seed,
        tree=tree,
        split_threshold=args.threshold,
    )
    curve = generated.curve
    write_curve(curve, out / "curve.txt")
    write_scalar_field(field, out / "field.json", "field.raw")

    series = linearize(field, curve, tree=generated.tree)
    lines = ["rank,u,t" if series.radial is not None else "rank,u"]
    for i, u in enumerate(series.values):
        if series.radial is not None:
            lines.append(f"{i},{float(u)!r},{float(series.radial[i])!r}")
        else:
            lines.append(f"{i},{float(u)!r}")
    (out / "values.csv").write_text("\n".join(lines) + "\n")

    if generated.tree is not None:
        write_tree(generated.tree, out / "tree.txt")
        recon = reconstruct_to_grid(curve, generated.tree)
        write_scalar_field(recon, out / "reconstruction.json", "reconstruction.raw")

    if len(fields) > 1:
        members = []
        for _, f in named:
            members.append(linearize(f, curve, tree=generated.tree).values)
        stack = np.vstack(members)
        bands = {
            "min": stack.min(axis=0).tolist(),
            "q25": np.quantile(stack, 0.25, axis=0).tolist(),
            "median": np.quantile(stack, 0.5, axis=0).tolist(),
            "q75": np.quantile(stack, 0.75, axis=0).tolist(),
            "max": stack.max(axis=0).tolist(),
        }
        (out / "bands.json").write_text(json.dumps(bands, sort_keys=True) + "\n")

    manifest = {
        "command": "gen",
        "versions": {
            "spacefill": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "method": args.method,
        "alpha": args.alpha,
        "block": list(block) if block else None,
        "seed": args.seed,
        "threshold": args.threshold,
        "input": list(args.input),
        "median_member": median_idx,
        "tree": args.tree if args.tree else (generated.notes.get("tree") or None),
        "dims": list(dims),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out / 'curve.txt'} ({len(curve)} steps)")
    return 0


def cmd_eval(args) -> int:
    """Autocorrelation comparison across datasets and methods."""
    if not args.datasets:
        raise _UsageError("--datasets must list at least one dataset")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHOD_NAMES:
            raise _UsageError(f"unknown method {m!r}; valid methods: {', '.join(METHOD_NAMES)}")
    named = [_load_input(source) for source in args.datasets]
    report = compare_methods(named, methods, alpha=args.alpha, max_lag=args.max_lag)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    report.write_csv(out / "report.csv")
    report.write_svgs(out)
    for dataset, method, message in report.errors:
        print(f"warning: {dataset}/{method}: {message}", file=sys.stderr)
    if len(report.errors) == len(named) * len(methods):
        raise SpacefillError("every dataset/method combination failed")
    print(f"wrote {out / 'report.csv'}")
    return 0


def cmd_serve(args) -> int:
    """Serve a generated artifact directory for the browser viewer."""
    from .server import make_server

    try:
        server = make_server(args.dir, host=args.host, port=args.port, static_dir=args.static)
    except OSError as exc:
        raise SpacefillError(f"cannot bind {args.host}:{args.port}: {exc}") from exc
    print(f"serving {args.dir} on http://{args.host}:{args.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spacefill", description=__doc__)
    parser.add_argument("--version", action="version", version=f"spacefill {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a curve and linearization")
    gen.add_argument(
        "--input",
        action="append",
        required=True,
        help="field descriptor path or builtin dataset name (repeat for ensembles)",
    )
    gen.add_argument("--method", required=True, help=f"one of {', '.join(METHOD_NAMES)}")
    gen.add_argument("--alpha", type=float, default=0.1)
    gen.add_argument("--block", default=None, help="block size, e.g. 8,8 or 4,4,4")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--tree", default=None, help="tree file for oursms")
    gen.add_argument("--threshold", type=float, default=DEFAULT_SPLIT_THRESHOLD)
    gen.add_argument("--output", required=True)
    gen.set_defaults(func=cmd_gen)

    ev = sub.add_parser("eval", help="autocorrelation comparison report")
    ev.add_argument("--datasets", nargs="+", required=True)
    ev.add_argument("--methods", required=True, help="comma-separated method names")
    ev.add_argument("--alpha", type=float, default=0.1)
    ev.add_argument("--max-lag", type=int, default=64)
    ev.add_argument("--output", required=True)
    ev.set_defaults(func=cmd_eval)

    srv = sub.add_parser("serve", help="serve generated artifacts over HTTP")
    srv.add_argument("--dir", required=True)
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--static", default=None, help="viewer asset directory")
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SpacefillError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
