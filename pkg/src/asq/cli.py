"""Command-line interface: gen / solve / quantize / dequantize / bench / verify.

Exit codes: 0 success, 2 validation or usage error, 3 runtime error
(including verify mismatches).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, bench, io, quantize, solvers
from .core import QuantizedVector, validate_and_sort
from .errors import AsqError


def _default_out(input_path: str, suffix: str) -> str:
    stem = input_path.rsplit(".", 1)[0] if "." in input_path else input_path
    return stem + suffix


def _cmd_gen(args) -> int:
    dist = bench.parse_distribution(args.dist)
    values = bench.sample(dist, args.d, args.seed)
    io.write_vector(args.out, values)
    print(f"wrote {values.shape[0]} samples of {dist.spec} (seed {args.seed}) to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    weights = None
    if args.algo == "weighted":
        raw, weights = io.read_weighted(args.input, args.weights)
    else:
        if args.weights is not None:
            print("error: --weights is only valid with --algo weighted", file=sys.stderr)
            return 2
        raw = io.read_vector(args.input)
    report, sort_time = bench.solve_named(args.algo, raw, args.s, args.m, weights)
    out = args.out or _default_out(args.input, ".codebook.json")
    io.write_codebook(
        out,
        report.codebook,
        algorithm=report.algorithm.value,
        d=raw.shape[0],
        s=args.s,
        m=args.m,
        seed=args.seed,
    )
    print(
        f"{args.algo}: {report.codebook.n_levels} levels, "
        f"expected_mse={report.codebook.expected_mse:.9g}, "
        f"solve={report.wall_time:.6f}s, sort={sort_time:.6f}s -> {out}"
    )
    return 0


def _cmd_quantize(args) -> int:
    values = io.read_vector(args.input)
    codebook, _ = io.read_codebook(args.codebook)
    qv = quantize.encode(values, codebook, quantize.RandomSource(args.seed))
    out = args.out or _default_out(args.input, ".u32")
    io.write_indices(out, qv.indices)
    print(f"quantized {qv.d} entries onto {codebook.n_levels} levels (seed {args.seed}) -> {out}")
    return 0


def _cmd_dequantize(args) -> int:
    indices = io.read_indices(args.input)
    codebook, _ = io.read_codebook(args.codebook)
    values = quantize.decode(QuantizedVector(indices=indices, codebook=codebook))
    out = args.out or _default_out(args.input, ".dq.f64")
    io.write_vector(out, values)
    print(f"decoded {values.shape[0]} entries -> {out}")
    return 0


def _cmd_bench(args) -> int:
    config = bench.SweepConfig.from_json(args.config)
    out = args.out or config.output_path
    records = bench.run_sweep(config, out)
    failed = sum(1 for r in records if r.status != "ok")
    print(f"wrote {len(records)} rows to {out} ({failed} failed)")
    return 0 if failed == 0 else 3


def _cmd_verify(args) -> int:
    raw = io.read_vector(args.input)
    si = validate_and_sort(raw)
    s = args.s
    checks: list[tuple[str, float]] = []
    checks.append(("quiver", solvers.quiver(si, s).objective))
    checks.append(("accq", solvers.accelerated_quiver(si, s).objective))
    if si.d <= 16384:
        checks.append(("baseline", solvers.baseline_dp(si, s).objective))
    else:
        print(f"baseline: skipped (d={si.d} > 16384 would be quadratic)")
    if si.d <= 16 and s <= 6:
        checks.append(("exhaustive", solvers.exhaustive_opt(si, s).objective))
    ref_name, ref = checks[0]
    scale = max(abs(ref), 1e-300)
    ok = True
    for name, obj in checks:
        rel = abs(obj - ref) / scale
        status = "ok" if rel <= 1e-9 else "MISMATCH"
        if status != "ok":
            ok = False
        print(f"{name}: objective={obj:.12g} (vs {ref_name}: rel diff {rel:.3g}) {status}")
    if ok:
        print(f"verify: all solvers agree on {args.input} at s={s}")
        return 0
    print("verify: objective mismatch", file=sys.stderr)
    return 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="asq",
        description="Optimal and near-optimal codebooks for unbiased stochastic quantization.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a synthetic distribution to a vector file")
    g.add_argument("--dist", default="lognormal(0,1)", help="e.g. lognormal(0,1), normal, exponential(2), truncnorm(0,1,-1,1), weibull(1,1)")
    g.add_argument("--d", type=int, required=True, help="number of samples")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("out", help="output vector file (.f64/.f32/.txt)")
    g.set_defaults(func=_cmd_gen)

    so = sub.add_parser("solve", help="compute a codebook for a vector file")
    so.add_argument("--algo", required=True, choices=list(bench.ALGORITHM_NAMES))
    so.add_argument("--s", type=int, required=True, help="maximum number of levels")
    so.add_argument("--m", type=int, default=None, help="grid/candidate resolution (approx, cp-*)")
    so.add_argument("--seed", type=int, default=None, help="recorded in the codebook JSON")
    so.add_argument("--weights", default=None, help="weights vector file (weighted algo with .f64 input)")
    so.add_argument("--out", default=None, help="codebook JSON path (default: <input>.codebook.json)")
    so.add_argument("input", help="vector file; two-column .txt for --algo weighted")
    so.set_defaults(func=_cmd_solve)

    q = sub.add_parser("quantize", help="stochastically round a vector onto a codebook")
    q.add_argument("--codebook", required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", default=None, help="index file (default: <input>.u32)")
    q.add_argument("input", help="vector file")
    q.set_defaults(func=_cmd_quantize)

    dq = sub.add_parser("dequantize", help="map an index file back to level values")
    dq.add_argument("--codebook", required=True)
    dq.add_argument("--out", default=None, help="output vector file (default: <input>.dq.f64)")
    dq.add_argument("input", help="index file (.u32)")
    dq.set_defaults(func=_cmd_dequantize)

    b = sub.add_parser("bench", help="run a sweep config and write a CSV")
    b.add_argument("--out", default=None, help="override the config's output_path")
    b.add_argument("config", help="sweep config JSON")
    b.set_defaults(func=_cmd_bench)

    v = sub.add_parser("verify", help="cross-check solver objectives on a vector file")
    v.add_argument("--s", type=int, default=8, help="number of levels to verify at")
    v.add_argument("input", help="vector file")
    v.set_defaults(func=_cmd_verify)

    return p


def cli_main(argv=None) -> int:
    """Run the CLI; returns the exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse exits 2 on usage error, 0 on --help
        code = e.code if e.code is not None else 0
        return code if isinstance(code, int) else 2
    try:
        return int(args.func(args))
    except AsqError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
