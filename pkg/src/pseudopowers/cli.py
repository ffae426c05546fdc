"""Command-line surface.

Subcommands: constants, sample, sumset, lemmasums, run, export.
Exit codes: 0 success, 2 validation/domain error, 3 guard refusal, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .constants import ThresholdTable
from .errors import DomainError, FormatError, GuardExceededError
from .experiments import run_monte_carlo
from .model import sample_sequence
from .sumset import s_fold_sumset
from .weights import weight_convolution
from . import runio


def _cmd_constants(args) -> int:
    table = ThresholdTable.for_s(args.s)
    print(json.dumps(table.as_dict(), sort_keys=True, indent=1))
    return 0


def _cmd_sample(args) -> int:
    sample = sample_sequence(args.s, args.N, args.seed, args.trial)
    runio.save_sequence(sample, args.out)
    print(f"wrote {args.out} ({len(sample)} elements)")
    return 0


def _cmd_sumset(args) -> int:
    sample = runio.load_sequence(args.infile)
    s = args.s if args.s is not None else sample.s
    N = args.N if args.N is not None else sample.N
    bitmap = s_fold_sumset(sample, s, N=N, distinct=args.distinct)
    runio.save_bitmap(bitmap, args.out)
    print(f"wrote {args.out} ({len(bitmap)} members up to {N})")
    return 0


def _cmd_lemmasums(args) -> int:
    if not 1 <= args.t <= args.s:
        raise DomainError(f"t must be in [1, s], got t={args.t}, s={args.s}")
    table = weight_convolution(args.s, args.t, args.Z)
    lines = ["z,weight,normalized_ratio"]
    for z in range(1, args.Z + 1):
        value = table.value(args.t, z)
        ratio = value * z ** (1.0 - args.t / args.s)
        lines.append(f"{z},{value!r},{ratio!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_run(args) -> int:
    config = runio.parse_config(Path(args.config).read_text(encoding="utf-8"))
    if args.save_sequences:
        total = config.N * config.trials
        if total > 2 * 10**8:
            raise GuardExceededError(
                f"sequence saving refused: N * trials = {total} above the size gate"
            )
    result = run_monte_carlo(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(
        json.dumps(runio.config_to_dict(config), sort_keys=True, indent=1) + "\n",
        encoding="ascii",
    )
    digests = runio.emit_results(result, out)
    extra: dict[str, str] = {}
    if args.save_sequences:
        seq_dir = out / "sequences"
        seq_dir.mkdir(exist_ok=True)
        for tid in config.effective_trial_ids():
            sample = sample_sequence(config.s, config.N, config.seed, tid)
            p = runio.save_sequence(sample, seq_dir / f"trial_{tid}.txt")
            extra[f"sequences/{p.name}"] = runio.sha256_file(p)
    if not args.no_figures:
        from .figures import render_figures

        for p in render_figures(result, out):
            extra[f"figures/{p.name}"] = runio.sha256_file(p)
    runio.write_manifest(out, config, digests, extra_files=extra)
    summary = {
        "out_dir": str(out),
        "trials": config.trials,
        "x_mean": result.x_mean,
        "results_sha256": digests["results.json"],
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_export(args) -> int:
    sample = runio.load_sequence(args.infile)
    if not args.ndjson:
        raise DomainError("export currently supports only --ndjson")
    if args.out:
        with Path(args.out).open("w", encoding="ascii") as fp:
            runio.export_ndjson(sample, fp)
        print(f"wrote {args.out}")
    else:
        runio.export_ndjson(sample, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudopowers",
        description="Monte Carlo laboratory for random pseudo s-th power sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print the s-derived constants as JSON")
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("sample", help="sample one sequence and write it to a file")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("sumset", help="compute an s-fold sumset bitmap from a sequence file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--s", type=int, default=None, help="fold count (default: sequence s)")
    p.add_argument("--N", type=int, default=None, help="bitmap limit (default: sequence N)")
    p.add_argument("--distinct", action="store_true", help="require pairwise distinct parts")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sumset)

    p = sub.add_parser("lemmasums", help="emit composition-weight CSV rows")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--Z", type=int, required=True)
    p.add_argument("--emit", choices=["csv"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_lemmasums)

    p = sub.add_parser("run", help="execute a configured scenario and emit artifacts")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.add_argument("--save-sequences", action="store_true",
                   help="persist every trial's sequence (size-gated)")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("export", help="convert a sequence file to NDJSON")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ndjson", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GuardExceededError as exc:
        print(f"guard refusal: {exc}", file=sys.stderr)
        return 3
    except (DomainError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
