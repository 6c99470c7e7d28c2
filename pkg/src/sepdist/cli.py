"""Command-line front end: ``sepdist <command> [options]``.

Exit codes: 0 success, 2 configuration or input error, 3 unphysical
covariance matrix, 4 a scientific check failed.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import compensation, config, data, experiments, io, network, tomography
from .errors import SepDistError
from .states import apply_preparation_loss, make_state
from .symplectic import is_physical, is_separable, min_symplectic_eigenvalue, ppt_values

EXIT_OK, EXIT_CONFIG, EXIT_UNPHYSICAL, EXIT_CHECK = 0, 2, 3, 4


class Unphysical(Exception):
    pass


def _verdict(ppt: float) -> str:
    return "separable" if is_separable(ppt) else "entangled"


def _load_gamma(args, cfg, default):
    path = args.gamma or cfg.gamma
    if path is None:
        return default
    try:
        return io.load_matrix(path)
    except (OSError, ValueError) as exc:
        raise config.ConfigError(f"cannot read matrix {path}: {exc}") from None


def _require_physical(gamma, what="input matrix"):
    if not is_physical(gamma):
        try:
            mu0 = f"{min_symplectic_eigenvalue(gamma):.4f}"
        except SepDistError:
            mu0 = "n/a (not positive definite)"
        raise Unphysical(f"{what} is unphysical: smallest symplectic eigenvalue {mu0}")


def _out(args, cfg) -> Path:
    out = Path(args.out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_protocol(args, cfg) -> int:
    if args.gamma or cfg.gamma:
        gamma = _load_gamma(args, cfg, None)
        source = "loaded matrix"
    else:
        sq = apply_preparation_loss(make_state(cfg.squeezed), cfg.preparation_loss)
        gamma = network.prepare_three_mode(sq, cfg.vacuum, cfg.thermal)
        source = "ideal preparation model"
    _require_physical(gamma)
    report = experiments.run_protocol(gamma)

    print(f"three-mode state: {source}")
    for label, v in zip(network.LABELS, report.ppt):
        print(f"  PPT_{label} = {v:.4f}  ({_verdict(v)})")
    print(f"distribution phase phi* = {math.degrees(report.phi):.3f} deg")
    print(f"Duan value after distribution = {report.duan:.4f}  ({'< 4, entangled' if report.duan < 4 else '>= 4, no witness'})")
    print(report.verdict)
    io.write_json(_out(args, cfg) / "protocol.json", report.to_json())
    return EXIT_OK if report.success else EXIT_CHECK


def cmd_fig3(args, cfg) -> int:
    res = experiments.fig3(cfg.fig3_squeezing_db, cfg.fig3_losses, cfg.thermal_db)
    io.write_csv(_out(args, cfg) / "fig3.csv", res.header(), res.rows())

    ok = True
    for (sq, loss), cross in res.crossings.items():
        where = "none on grid" if cross is None else f"{cross:.4f} dB"
        print(f"squeezing {sq:g} dB, loss {loss:g}: PPT_C crossing {where}")
        if cross is not None and loss <= experiments.LOSS_THRESHOLD:
            ok = False
            print("  FAIL: crossing below the 1/3 loss threshold")
    for loss in cfg.fig3_losses:
        found = [res.crossings[(sq, loss)] for sq in cfg.fig3_squeezing_db]
        if len(found) > 1 and all(c is not None for c in found):
            spread = max(found) - min(found)
            print(f"loss {loss:g}: crossing spread across squeezing levels {spread:.2e} dB")
            if spread > 0.05:
                ok = False
    for sq, thr in res.threshold.items():
        good = abs(thr - experiments.LOSS_THRESHOLD) <= 0.005
        ok &= good
        print(f"squeezing {sq:g} dB: loss threshold {thr:.4f} ({'ok' if good else 'FAIL'}, expected 1/3)")
    asym = res.max_bc_asymmetry()
    print(f"max |PPT_B - PPT_C| = {asym:.2e}")
    ok &= asym <= 1e-8
    return EXIT_OK if ok else EXIT_CHECK


def cmd_fig4(args, cfg) -> int:
    gamma = _load_gamma(args, cfg, data.GAMMA_MEASURED)
    _require_physical(gamma)
    rows = compensation.loss_sweep(gamma, cfg.loss_grid)
    io.write_csv(_out(args, cfg) / "fig4.csv", compensation.LOSS_HEADER, (r.csv_row() for r in rows))
    lo, hi = cfg.detection_loss_band
    for r in rows:
        if lo - 1e-12 <= r.loss <= hi + 1e-12:
            mu = " ".join(f"{m:.4f}" for m in r.mu)
            print(f"  [band] loss {r.loss:.4f}: muA muB muC = {mu}{'' if r.physical else '  UNPHYSICAL'}")
    summary = experiments.loss_band_summary(rows, cfg.detection_loss_band)
    if summary["rows"] == 0:
        print("no grid point inside the detection-loss band")
        return EXIT_CHECK
    ok = summary["all_physical"] and min(summary["min_muB"], summary["min_muC"]) >= 1
    print(f"detection-loss band {lo:g}-{hi:g}: min muB {summary['min_muB']:.4f}, min muC {summary['min_muC']:.4f}, "
          f"max muA {summary['max_muA']:.4f} -> {'B|AC and C|AB separable' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_figs2(args, cfg) -> int:
    gamma = _load_gamma(args, cfg, data.GAMMA_MEASURED)
    _require_physical(gamma)
    gamma_l = compensation.invert_loss(gamma, cfg.detection_efficiency)
    _require_physical(gamma_l, "loss-corrected matrix")
    res = experiments.figs2(gamma, cfg.detection_efficiency, cfg.phase_sigma_deg, cfg.p_G)
    io.write_csv(_out(args, cfg) / "figS2.csv", res.header, res.rows())
    for name, sweep in (("Gaussian model", res.plain), (f"p_G = {cfg.p_G:g}", res.degauss)):
        thr = sweep.threshold_deg
        print(f"{name}: sigma_th = " + ("not reached on grid" if thr is None else f"{thr:.3f} deg"))
    first = res.plain.rows[0]
    ok = first.min_bc >= 1 and all(r.mu[0] < 1 for r in res.plain.rows)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_montecarlo(args, cfg) -> int:
    gamma = _load_gamma(args, cfg, data.GAMMA_LOSS_CORRECTED)
    _require_physical(gamma)
    mc = cfg.monte_carlo
    n = args.samples or mc.n_samples
    runs = args.runs or mc.n_runs
    seed = mc.seed if args.seed is None else args.seed
    res = tomography.monte_carlo_ppt(gamma, n, runs, seed)
    doc = res.to_json()
    io.write_json(_out(args, cfg) / "montecarlo.json", doc)
    for label in network.LABELS:
        print(f"mu{label} = {doc['mu' + label]['mean']:.4f} +- {doc['mu' + label]['std']:.4f}")
    return EXIT_OK


def cmd_tomo_sim(args, cfg) -> int:
    gamma = _load_gamma(args, cfg, data.GAMMA_MEASURED)
    _require_physical(gamma)
    n = args.samples or cfg.monte_carlo.n_samples
    seed = cfg.monte_carlo.seed if args.seed is None else args.seed
    out = _out(args, cfg)
    blocks = tomography.simulate_tomography(gamma, n, seed)
    for k, b in enumerate(blocks, start=1):
        b.seed = seed
        b.save(out / f"tomo_setting{k}.csv")
    rec = tomography.reconstruct(blocks)
    doc = {
        "gamma_hat": io.matrix_to_json(rec.gamma_hat),
        "std_errors": rec.std_errors.tolist(),
        "physical": is_physical(rec.gamma_hat),
        "n_samples": n,
        "seed": seed,
    }
    if doc["physical"]:
        doc.update({f"ppt_{lab}": v for lab, v in zip(network.LABELS, ppt_values(rec.gamma_hat))})
    io.write_json(out / "tomo_reconstruction.json", doc)
    print(np.array2string(rec.gamma_hat, precision=3, suppress_small=True))
    return EXIT_OK


COMMANDS = {
    "protocol": cmd_protocol,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "figs2": cmd_figs2,
    "montecarlo": cmd_montecarlo,
    "tomo-sim": cmd_tomo_sim,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="experiment config (JSON)")
        p.add_argument("--gamma", help="covariance matrix file (JSON or plain text)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--runs", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config.load(args.config) if args.config else config.ExperimentConfig()
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise config.ConfigError("--seed must be an unsigned 64-bit integer")
        for flag in ("samples", "runs"):
            v = getattr(args, flag)
            if v is not None and v < (100 if flag == "samples" else 1):
                raise config.ConfigError(f"--{flag} too small")
        return COMMANDS[args.command](args, cfg)
    except config.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Unphysical as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except SepDistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
