"""Command-line entry point: ``cswatermark {embed,attack,detect,experiment,psnr}``.

Exit codes: 0 success (or watermark detected), 1 usage / invalid input,
2 I/O or file-format error, 3 watermark not detected, 4 solver did not
converge within its iteration budget.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cs_attack import DENSITIES, acquire, measurement_fraction, plan_measurements
from .experiment import run_experiment
from .image_core import ImageFormatError, cameraman, format_db, load_pgm, psnr, save_pgm
from .tv_solver import SolverConfig, reconstruct
from .watermark import EmbedConfig, WatermarkKey, detect, embed, wrong_seed_range

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NOT_DETECTED = 3
EXIT_NOT_CONVERGED = 4

log = logging.getLogger("cswatermark")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="")


def _solver_args(p):
    d = SolverConfig()
    p.add_argument("--max-iters", type=int, default=d.max_iterations)
    p.add_argument("--step", type=float, default=d.step_size)
    p.add_argument("--epsilon", type=float, default=d.smoothing_epsilon)
    p.add_argument("--tolerance", type=float, default=d.stop_tolerance)
    p.add_argument("--density", choices=DENSITIES, default="inverse_square",
                   help="sampling density for the random (v2) coefficients")


def _solver_config(args) -> SolverConfig:
    return SolverConfig(args.max_iters, args.step, args.epsilon, args.tolerance)


def cmd_embed(args) -> int:
    image = load_pgm(args.input)
    key = WatermarkKey.for_image(args.seed, image)
    marked = embed(image, key, EmbedConfig(args.alpha, args.method))
    quality = psnr(image, marked)
    out = Path(args.output)
    key_path = Path(args.key) if args.key else out.with_name(out.name + ".key.json")
    save_pgm(marked, out)
    _write_text(key_path, key.dumps() + "\n")
    print(f"embed PSNR: {format_db(quality.psnr_db)} dB")
    print(f"key written to {key_path}")
    return EXIT_OK


def cmd_attack(args) -> int:
    image = load_pgm(args.input)
    if image.shape[0] != image.shape[1]:
        raise UsageError(f"attack needs a square image, got {image.shape[1]}x{image.shape[0]}")
    config = _solver_config(args)
    plan = plan_measurements(image.shape[0], args.v1, args.v2, args.selection_seed,
                             args.density)
    result = reconstruct(acquire(image, plan), config)
    quality = psnr(image, result.image)
    out = Path(args.output)
    save_pgm(result.image, out)
    report = {
        **plan.to_dict(),
        "fraction_percent": measurement_fraction(plan),
        "solver": config.to_dict(),
        "iterations_used": result.iterations_used,
        "converged": result.converged,
        "final_tv": result.final_tv,
        "initial_tv": result.initial_tv,
        "data_residual": result.data_residual,
        "psnr_db": format_db(quality.psnr_db),
        "mse": quality.mse,
    }
    json_path = Path(args.json) if args.json else out.with_suffix(".json")
    _write_text(json_path, json.dumps(report, indent=2) + "\n")
    print(f"measurements: {plan.total} ({measurement_fraction(plan):.2f}%)")
    print(f"PSNR vs input: {format_db(quality.psnr_db)} dB after {result.iterations_used} iterations")
    if not result.converged:
        log.warning("solver stopped at max_iterations=%d without converging",
                    config.max_iterations)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_detect(args) -> int:
    image = load_pgm(args.input)
    key = WatermarkKey.loads(Path(args.key).read_text(encoding="utf-8"))
    seeds = wrong_seed_range(key.seed, args.wrong_count, args.wrong_seed_base)
    report = detect(image, key, seeds)
    if args.output:
        _write_text(Path(args.output), json.dumps(report.to_dict(), indent=2) + "\n")
    if args.csv:
        lines = ["index,seed,response,is_right"]
        trials = [(key.seed, report.right_response, True)]
        trials += list(zip(report.wrong_seeds, report.wrong_responses, [False] * len(seeds)))
        for idx, (seed, resp, right) in enumerate(trials):
            lines.append(f"{idx},{seed},{resp!r},{'true' if right else 'false'}")
        _write_text(Path(args.csv), "\n".join(lines) + "\n")
    print(f"right response {report.right_response:.2f}, max wrong "
          f"{report.max_wrong_response:.2f}, separation {report.separation:.2f}")
    print("detected" if report.decision else "not detected")
    return EXIT_OK if report.decision else EXIT_NOT_DETECTED


def cmd_experiment(args) -> int:
    if args.input:
        image, label = load_pgm(args.input), str(args.input)
    else:
        image, label = cameraman(), "bundled:cameraman256.pgm"
    result = run_experiment(
        image, watermark_seed=args.seed, alpha=args.alpha,
        selection_seed=args.selection_seed, wrong_count=args.wrong_count,
        wrong_seed_base=args.wrong_seed_base, solver=_solver_config(args),
        density=args.density, image_label=label)
    out = Path(args.output)
    _write_text(out, result.table_csv())
    _write_text(out.with_suffix(".json"), result.to_json() + "\n")
    _write_text(out.with_name(out.stem + "_responses.csv"), result.responses_csv())
    print(f"embed PSNR: {format_db(result.embed_psnr_db)} dB")
    for row in result.rows:
        print(f"v1={row.v1_count:5d} v2={row.v2_count:5d} {row.fraction_percent:6.2f}%  "
              f"PSNR {row.psnr_db:6.2f} dB  "
              f"{'Succeeded' if row.detection_succeeded else 'FAILED'}")
    stalled = [r for r in result.rows if not r.converged]
    if stalled:
        log.warning("rows without convergence: %s",
                    ", ".join(f"({r.v1_count},{r.v2_count})" for r in stalled))
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_psnr(args) -> int:
    report = psnr(load_pgm(args.reference, multiple=1), load_pgm(args.input, multiple=1))
    if args.output:
        _write_text(Path(args.output), json.dumps(report.to_dict()) + "\n")
    print(f"MSE {report.mse:.6f}  PSNR {format_db(report.psnr_db)} dB")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cswatermark",
                     description="Wavelet watermarking under a compressive-sensing attack.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="embed a watermark into HL2")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--alpha", type=float, default=7.0)
    p.add_argument("--method", choices=["additive", "multiplicative"], default="additive")
    p.add_argument("--key", help="key JSON path (default: OUTPUT.key.json)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("attack", help="CS attack followed by TV reconstruction")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--v1", type=int, required=True)
    p.add_argument("--v2", type=int, required=True)
    p.add_argument("--selection-seed", type=int, default=0)
    p.add_argument("--json", help="report path (default: OUTPUT with .json suffix)")
    _solver_args(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("detect", help="correlation detection against wrong keys")
    p.add_argument("--input", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--wrong-count", type=int, default=100)
    p.add_argument("--wrong-seed-base", type=int, default=1000)
    p.add_argument("--output", help="DetectionReport JSON path")
    p.add_argument("--csv", help="per-key response CSV path")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("experiment", help="run all measurement settings")
    p.add_argument("--input", help="PGM image (default: bundled 256x256 cameraman)")
    p.add_argument("--output", required=True, help="table CSV path")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--alpha", type=float, default=7.0)
    p.add_argument("--selection-seed", type=int, default=0)
    p.add_argument("--wrong-count", type=int, default=100)
    p.add_argument("--wrong-seed-base", type=int, default=1000)
    _solver_args(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("psnr", help="PSNR between two PGM images")
    p.add_argument("--reference", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="QualityReport JSON path")
    p.set_defaults(func=cmd_psnr)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ImageFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
