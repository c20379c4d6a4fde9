"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error,
3 numerical error (ill-conditioned system, unsolvable instance, divergence).
"""
import argparse
import csv
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import formats
from .errors import (ContractError, DimensionError, FormatError, NumericalError,
                     SizeGuardError)
from .maps import constant_map, gen_pinwheel_map, gen_random_map, DEFAULT_N_ALPHA
from .oracle import certify_instance, iteration_crosscheck
from .reconstruction import IterationConfig, fit_decay_rate, reconstruct
from .transform import (REFERENCE_PARAMS, WaveletParams, build_system, forward,
                        frame_reports, inverse)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3

SUMMARY_HEADER = ["image", "map", "iters", "final_delta_pct", "final_delta_raw_pct",
                  "slope_log10", "r2", "wall_s", "status"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _params(args, n, m=None):
    """Wavelet parameters: explicit --s/--p/--r, else the reference values scaled to ``n``."""
    base = WaveletParams.scaled(n, m if m is not None else args.m)
    try:
        return WaveletParams(n=n, m=base.m,
                             s=args.s if args.s is not None else base.s,
                             p=args.p if args.p is not None else base.p,
                             r=args.r if args.r is not None else base.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _make_map(kind, n, m, rho=None, seed=0, j=0, n_alpha=DEFAULT_N_ALPHA):
    if kind == "random":
        return gen_random_map(n, m, seed)
    if kind == "pinwheel":
        if rho is None:
            raise UsageError("pinwheel maps need --rho")
        return gen_pinwheel_map(n, m, rho, n_alpha=n_alpha, seed=seed)
    if kind == "constant":
        try:
            return constant_map(n, m, j)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown map kind {kind!r}")


# -- subcommands ---------------------------------------------------------------

def cmd_system(args):
    params = _params(args, args.n)
    system = build_system(params)
    print(f"n={params.n} m={params.m} s={params.s:g} p={params.p:g} r={params.r:g}")
    print(f"{'convention':<10} {'A':>12} {'B':>12} {'B/A':>12} {'cond':>10}")
    for name, rep in frame_reports(params).items():
        print(f"{name:<10} {rep.a:12.6e} {rep.b:12.6e} {rep.ratio:12.6e} {rep.cond:10.4f}")
    if args.calderon_out:
        formats.write_image(args.calderon_out, formats.scaled_to_uint8(np.fft.fftshift(system.calderon)))
    if args.dual_out:
        logd = np.full(system.dual_mult.shape, np.nan)
        logd[system.mask] = np.log10(system.dual_mult[system.mask])
        logd[~system.mask] = np.nanmin(logd)
        formats.write_image(args.dual_out, formats.scaled_to_uint8(np.fft.fftshift(logd)))
    return EXIT_OK


def cmd_map(args):
    fmap = _make_map(args.kind, args.n, args.m, rho=args.rho, seed=args.seed, j=args.j,
                     n_alpha=args.n_alpha)
    formats.write_map(args.out, fmap)
    preview = args.preview or f"{args.out}.pgm"
    formats.write_image(preview, fmap.theta * (255.0 / max(fmap.m - 1, 1)))
    print(f"wrote {args.kind} map n={fmap.n} m={fmap.m} to {args.out} (preview {preview})")
    return EXIT_OK


def cmd_transform(args):
    if args.direction == "forward":
        img = formats.read_image(args.input)
        system = build_system(_params(args, img.shape[0]))
        formats.write_stack(args.output, forward(img, system))
    else:
        F = formats.read_stack(args.input)
        system = build_system(_params(args, F.shape[1], m=F.shape[0]))
        formats.write_image(args.output, np.real(inverse(F, system)))
    print(f"{args.direction}: {args.input} -> {args.output}")
    return EXIT_OK


def _iteration_config(args):
    try:
        return IterationConfig(max_iters=args.iters, tol_delta=args.tol_delta,
                               tol_stall=args.tol_stall, record_every=args.record_every)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_reconstruct(args):
    img = formats.read_image(args.image)
    fmap = formats.read_map(args.map)
    if fmap.n != img.shape[0]:
        raise DimensionError(f"map is {fmap.n}x{fmap.n} but image is {img.shape[0]}x{img.shape[1]}")
    system = build_system(_params(args, fmap.n, m=fmap.m))
    report = reconstruct(img, system, fmap, _iteration_config(args))
    if args.report:
        formats.write_report(args.report, report)
    if args.out:
        formats.write_image(args.out, report.final_image)
    if args.first_out:
        formats.write_image(args.first_out, report.first_image)
    print(f"iterations      : {report.n_iter} ({report.stop_reason})")
    print(f"delta first     : {report.delta[0]:.6f} %")
    print(f"delta final     : {report.delta[-1]:.6f} % (raw source: {report.delta_raw[-1]:.6f} %)")
    print(f"max |imag|      : {report.max_imag:.3e}")
    return EXIT_OK


def _map_specs(cfg):
    kinds = [k.strip() for k in cfg.get("map.kind", "random").split(",") if k.strip()]
    rhos = [float(r) for r in cfg.get("map.rho", "").split(",") if r.strip()]
    specs = []
    for kind in kinds:
        if kind == "pinwheel":
            if not rhos:
                raise UsageError("config: map.kind=pinwheel needs map.rho")
            specs += [(f"pinwheel{rho:g}", kind, rho) for rho in rhos]
        elif kind == "constant":
            specs.append((f"constant{cfg.get('map.j', 0)}", kind, None))
        else:
            specs.append((kind, kind, None))
    return specs


def _bench_images(dataset, cfg):
    patterns = [p.strip() for p in cfg.get("images", "*.pgm,*.png").split(",") if p.strip()]
    found = []
    for pat in patterns:
        if any(ch in pat for ch in "*?["):
            found += sorted(dataset.glob(pat))
        else:
            found.append(dataset / pat)
    return found


def cmd_bench(args):
    cfg = formats.read_config(args.config)
    dataset = Path(args.dataset)
    out = Path(args.out or cfg.get("out", "bench_out"))
    out.mkdir(parents=True, exist_ok=True)
    images = _bench_images(dataset, cfg) if dataset.is_dir() else []
    specs = _map_specs(cfg)
    it_cfg = IterationConfig(max_iters=cfg.get("iters", 1000), record_every=cfg.get("record_every", 1))
    rows = []

    n = cfg.get("n")
    if n is None:
        for path in images:
            try:
                n = formats.read_image(path).shape[0]
                break
            except (FormatError, OSError):
                continue
    system = maps = None
    if n is not None:
        m = cfg.get("m", REFERENCE_PARAMS["m"])
        base = WaveletParams.scaled(n, m)
        system = build_system(WaveletParams(n=n, m=m, s=cfg.get("s", base.s),
                                            p=cfg.get("p", base.p), r=cfg.get("r", base.r)))
        seed = cfg.get("map.seed", 0)
        maps = {name: _make_map(kind, n, m, rho=rho, seed=seed, j=cfg.get("map.j", 0),
                                n_alpha=cfg.get("map.n_alpha", DEFAULT_N_ALPHA))
                for name, kind, rho in specs}

    def run(path, name):
        row = dict(image=path.name, map=name, iters="", final_delta_pct="", final_delta_raw_pct="",
                   slope_log10="", r2="", wall_s="", status="ok")
        try:
            img = formats.read_image(path)
            if img.shape[0] != n:
                raise DimensionError(f"image is {img.shape[0]}x{img.shape[1]}, bench grid is n={n}")
            t0 = time.perf_counter()
            report = reconstruct(img, system, maps[name], it_cfg)
            row["wall_s"] = f"{time.perf_counter() - t0:.3f}"
            formats.write_report(out / f"{path.stem}__{name}.csv", report)
            formats.write_image(out / f"{path.stem}__{name}_final.pgm", report.final_image)
            formats.write_image(out / f"{path.stem}__{name}_first.pgm", report.first_image)
            row.update(iters=report.n_iter, final_delta_pct=f"{report.delta[-1]:.6g}",
                       final_delta_raw_pct=f"{report.delta_raw[-1]:.6g}")
            if len(report.delta) >= 20:
                fit = fit_decay_rate(np.column_stack([report.iters, report.delta]))
                row.update(slope_log10=f"{fit.slope:.6g}", r2=f"{fit.r2:.6g}")
        except FileNotFoundError:
            row["status"] = "missing"
        except (FormatError, DimensionError, ContractError, OSError) as exc:
            row["status"] = f"error: {exc}"
        return row

    jobs = [(path, name) for path in images for name, _, _ in specs]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(lambda job: run(*job), jobs))

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    for row in rows:
        print(f"{row['image']:<24} {row['map']:<14} delta={row['final_delta_pct'] or '-':<12} "
              f"slope={row['slope_log10'] or '-':<12} {row['status']}")
    if not rows:
        print(f"no images found in {dataset}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_DATA


def cmd_oracle(args):
    params = _params(args, args.n)
    if params.n * params.n * params.m > 4096:
        raise SizeGuardError(f"oracle needs n^2 m <= 4096, got {params.n}^2 * {params.m} = "
                             f"{params.n * params.n * params.m}")
    system = build_system(params)
    fmap = _make_map(args.map_kind, params.n, params.m, rho=args.rho, seed=args.seed, j=args.j)
    cert, P, Q = certify_instance(system, fmap)
    print(f"n={params.n} m={params.m} s={params.s:g} p={params.p:g} r={params.r:g} "
          f"map={args.map_kind} seed={args.seed}")
    print(cert.format())
    if args.crosscheck:
        if not cert.solvable:
            print("crosscheck skipped: instance not solvable")
        else:
            chk = iteration_crosscheck(system, fmap, P, Q, cert, seed=args.seed)
            print(f"iterations          : {chk.steps}")
            print(f"|F_iter - F_direct| : {chk.rel_diff_direct:.3e} (relative)")
            print(f"fitted log10 slope  : {chk.slope:.6e} (R^2 {chk.r2:.6f})")
            print(f"log10(sigma)        : {chk.log10_sigma:.6e}")
            print(f"2 log10(sigma)      : {2 * chk.log10_sigma:.6e}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def _add_params(p, n_default=None):
    if n_default is not None:
        p.add_argument("--n", type=int, default=n_default, help="grid size (even)")
    p.add_argument("--m", type=int, default=REFERENCE_PARAMS["m"], help="number of angles")
    p.add_argument("--s", type=float, help="Gaussian width in grid units (default: scaled 51)")
    p.add_argument("--p", type=float, help="carrier frequency in grid units (default: scaled 170)")
    p.add_argument("--r", type=float, help="bandlimit radius in grid units (default: scaled 252)")


def build_parser():
    parser = _Parser(prog="se2recon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("system", help="frame bounds and Calderon function of a wavelet system")
    _add_params(p, n_default=REFERENCE_PARAMS["n"])
    p.add_argument("--calderon-out", help="write the Calderon function as a grayscale image")
    p.add_argument("--dual-out", help="write log10 of the dual multiplier as a grayscale image")
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("map", help="generate a feature map file")
    p.add_argument("kind", choices=["random", "pinwheel", "constant"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=REFERENCE_PARAMS["m"])
    p.add_argument("--rho", type=float, help="pinwheel wavenumber (radians per pixel)")
    p.add_argument("--n-alpha", type=int, default=DEFAULT_N_ALPHA)
    p.add_argument("--j", type=int, default=0, help="angle index for constant maps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--preview", help="grayscale preview path (default: OUT.pgm)")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("transform", help="forward or inverse SE(2) transform of a file")
    p.add_argument("direction", choices=["forward", "inverse"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    _add_params(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reconstruct", help="reconstruct an image from its feature-map samples")
    p.add_argument("--image", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--tol-delta", type=float)
    p.add_argument("--tol-stall", type=float)
    p.add_argument("--report", help="CSV telemetry output")
    p.add_argument("--out", help="final image output")
    p.add_argument("--first-out", help="first-iteration image output")
    _add_params(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("bench", help="run an image x map grid from a config file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="dense solvability certificate on a tiny instance")
    _add_params(p, n_default=8)
    p.add_argument("--map-kind", choices=["random", "pinwheel", "constant"], default="random")
    p.add_argument("--rho", type=float)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--crosscheck", action="store_true", help="compare the iteration with the direct solve")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SizeGuardError) as exc:
        print(f"se2recon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, DimensionError, ContractError, OSError) as exc:
        print(f"se2recon: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"se2recon: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"se2recon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
