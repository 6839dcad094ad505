"""Command-line interface: denoise, mri, flow, bench, and oracle tasks.

All runs are deterministic for a fixed configuration; convergence logs omit
wall times unless ``--timing`` is given so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import apps, baselines, composite, grid, imageio, metrics, oracle, smooth, synth
from .trace import Trace

TIKHONOV_SOLVERS = ("gd", "nesterov1", "nesterov2", "nesterov-restart")
COMPOSITE_SOLVERS = ("pg", "apga", "adpa", "adpa-restart", "admm", "cp")
SOLVERS = TIKHONOV_SOLVERS + COMPOSITE_SOLVERS


class ConfigError(ValueError):
    """Invalid solver/regulariser configuration."""


@dataclass
class RunConfig:
    """Validated parameters of one CLI run."""

    task: str
    reg: str = "tv"
    solver: str = "adpa-restart"
    lam: float = 0.2
    beta: float | None = None
    gamma: float = 1.0
    rho: float = 4.0
    q_sc: float | None = None
    iters: int = 500
    inner_iters: int = 100
    tol: float | None = None
    boundary: str = grid.SYMMETRIC
    variant: str = composite.ISOTROPIC
    seed: int = 0
    input: str | None = None
    output: str | None = None
    log: str | None = None
    mask: str | None = None
    rate: float | None = None
    pattern: str = synth.LOWFREQ
    ref: str | None = None
    timing: bool = False

    def validate(self) -> None:
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}")
        if self.reg not in ("tikhonov", "tv", "tsv"):
            raise ConfigError(f"unknown regulariser {self.reg!r}")
        if self.solver in TIKHONOV_SOLVERS and self.reg != "tikhonov":
            raise ConfigError(
                f"solver {self.solver!r} applies only to the tikhonov "
                "regulariser (the only problem with known strong convexity)")
        if self.solver in COMPOSITE_SOLVERS and self.reg == "tikhonov":
            raise ConfigError(
                f"solver {self.solver!r} needs a composite regulariser (tv/tsv)")
        if self.reg == "tsv" and self.beta is None:
            raise ConfigError("the tsv regulariser requires --beta")
        if self.lam <= 0:
            raise ConfigError(f"--lambda must be positive, got {self.lam}")
        if self.iters <= 0:
            raise ConfigError(f"--iters must be positive, got {self.iters}")


def _solve_denoise(cfg: RunConfig, f: np.ndarray) -> tuple[np.ndarray, Trace]:
    if cfg.reg == "tikhonov":
        prob = smooth.tikhonov_problem(f, cfg.lam, cfg.boundary)
        t = 1.0 / prob.lipschitz
        if cfg.solver == "gd":
            return smooth.gradient_descent(prob, f, t, cfg.iters)
        if cfg.solver == "nesterov1":
            q = (1.0 / prob.condition_number if cfg.q_sc is None else cfg.q_sc)
            return smooth.nesterov_scheme1(prob, f, t, q, cfg.iters)
        if cfg.solver == "nesterov2":
            return smooth.nesterov_scheme2(prob, f, t, cfg.iters)
        return smooth.nesterov_restart(prob, f, t, cfg.iters)
    if cfg.solver == "admm":
        acfg = baselines.AdmmConfig(rho=cfg.rho, n_iters=cfg.iters, tol=cfg.tol)
        if cfg.reg == "tv":
            return baselines.admm_tv(f, cfg.lam, acfg, cfg.variant, cfg.boundary)
        return baselines.admm_tsv(f, cfg.lam, cfg.beta, cfg.gamma, acfg,
                                  cfg.variant, cfg.boundary)
    if cfg.solver == "cp":
        pcfg = baselines.PdConfig(n_iters=cfg.iters)
        if cfg.reg == "tv":
            return baselines.chambolle_pock_tv(f, cfg.lam, pcfg, cfg.variant,
                                               cfg.boundary)
        return baselines.chambolle_pock_tsv(f, cfg.lam, cfg.beta, cfg.gamma,
                                            pcfg, cfg.variant, cfg.boundary)
    if cfg.reg == "tv":
        prob = composite.tv_dual_problem(f, cfg.lam, cfg.variant, cfg.boundary)
    else:
        prob = composite.tsv_dual_problem(f, cfg.lam, cfg.beta, cfg.gamma,
                                          cfg.variant, cfg.boundary)
    x0 = np.zeros_like(grid.gradient(f, cfg.boundary))
    if cfg.solver == "pg":
        x, trace = composite.proximal_gradient(prob, x0, n_iters=cfg.iters,
                                               gap_tol=cfg.tol)
    else:
        restart = cfg.solver == "adpa-restart"
        x, trace = composite.adpa(prob, x0, n_iters=cfg.iters, restart=restart,
                                  gap_tol=cfg.tol)
    return prob.primal_recover(x), trace


def _write_outputs(cfg: RunConfig, img: np.ndarray, trace: Trace) -> None:
    if cfg.output:
        imageio.save_image(img, cfg.output)
    if cfg.log:
        trace.to_csv(cfg.log, timing=cfg.timing)


def _cmd_denoise(cfg: RunConfig) -> int:
    f = imageio.load_image(cfg.input)
    u, trace = _solve_denoise(cfg, f)
    _write_outputs(cfg, u, trace)
    print(f"final objective {trace.objective[-1]:.12g}")
    if cfg.ref:
        ref = imageio.load_image(cfg.ref)
        print(f"psnr {metrics.psnr(u, ref):.4f} dB  ssim {metrics.ssim(u, ref):.6f}")
    return 0


def _cmd_bench(cfg: RunConfig, solvers: list[str]) -> int:
    f = imageio.load_image(cfg.input)
    for name in solvers:
        one = RunConfig(**{**cfg.__dict__, "solver": name})
        one.validate()
        u, trace = _solve_denoise(one, f)
        if cfg.log:
            trace.to_csv(f"{cfg.log}.{name}.csv", timing=cfg.timing)
        print(f"{name}: final objective {trace.objective[-1]:.12g}")
    return 0


def _load_mask(cfg: RunConfig, shape: tuple[int, int]) -> apps.SamplingMask:
    if cfg.mask:
        return apps.SamplingMask(imageio.load_image(cfg.mask, "imgf64"))
    if cfg.rate is None:
        raise ConfigError("mri needs --mask or --rate")
    return apps.SamplingMask(
        synth.sampling_mask(shape, cfg.rate, cfg.pattern, cfg.seed))


def _cmd_mri(cfg: RunConfig) -> int:
    raw = imageio.load_image(cfg.input, "imgf64")
    if raw.ndim != 3 or raw.shape[0] != 2:
        raise ConfigError("k-space input must be a 2-channel (real, imag) file")
    kspace = raw[0] + 1j * raw[1]
    mask = _load_mask(cfg, kspace.shape)
    u, trace = apps.mri_reconstruct(
        kspace, mask, reg=cfg.reg, lam=cfg.lam, beta=cfg.beta, gamma=cfg.gamma,
        n_outer=cfg.iters, n_inner=cfg.inner_iters, variant=cfg.variant,
        boundary=cfg.boundary)
    _write_outputs(cfg, u, trace)
    print(f"sampling rate {mask.sampling_rate:.4f}, "
          f"final data term {trace.objective[-1]:.12g}")
    if cfg.ref:
        ref = imageio.load_image(cfg.ref)
        print(f"psnr {metrics.psnr(np.clip(u, 0, 1), ref):.4f} dB  "
              f"ssim {metrics.ssim(np.clip(u, 0, 1), ref):.6f}")
    return 0


def _cmd_flow(cfg: RunConfig) -> int:
    if not cfg.ref:
        raise ConfigError("flow needs --ref (the second frame)")
    source = imageio.load_image(cfg.input)
    target = imageio.load_image(cfg.ref)
    pair = apps.flow_derivatives(source, target, cfg.boundary)
    flow, trace = apps.optical_flow(
        pair, cfg.lam, reg=cfg.reg, beta=cfg.beta, gamma=cfg.gamma,
        n_outer=cfg.iters, n_inner=cfg.inner_iters, variant=cfg.variant,
        boundary=cfg.boundary)
    if cfg.output:
        imageio.save_imgf64(flow, cfg.output)
        viz = cfg.output.rsplit(".", 1)[0] + ".ppm"
        imageio.save_ppm(apps.flow_to_hsv(flow), viz)
    if cfg.log:
        trace.to_csv(cfg.log, timing=cfg.timing)
    print(f"final data term {trace.objective[-1]:.12g}")
    return 0


def _cmd_oracle(cfg: RunConfig) -> int:
    f = imageio.load_image(cfg.input)
    if cfg.reg == "tv":
        u, cert = oracle.tv_ground_truth(f, cfg.lam, cfg.variant, cfg.boundary)
    elif cfg.reg == "tsv":
        u, cert = oracle.tsv_ground_truth(f, cfg.lam, cfg.beta, cfg.gamma,
                                          cfg.variant, cfg.boundary)
    else:
        raise ConfigError("oracle applies to tv or tsv regularisers")
    if cfg.output:
        imageio.save_imgf64(u, cfg.output)
    print(f"certificate: gap {cert.gap:.3e} after {cert.iterations} iterations, "
          f"objective {cert.objective:.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varimg",
        description="Variational imaging solvers: denoising, MRI, optical flow.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--reg", choices=("tikhonov", "tv", "tsv"), default="tv")
    common.add_argument("--solver", default="adpa-restart",
                        help=f"one of {', '.join(SOLVERS)} (bench: comma list)")
    common.add_argument("--lambda", dest="lam", type=float, default=0.2)
    common.add_argument("--beta", type=float, default=None)
    common.add_argument("--gamma", type=float, default=1.0)
    common.add_argument("--rho", type=float, default=4.0)
    common.add_argument("--q", dest="q_sc", type=float, default=None)
    common.add_argument("--iters", type=int, default=500)
    common.add_argument("--inner-iters", type=int, default=100)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--boundary", choices=(grid.SYMMETRIC, grid.PERIODIC),
                        default=grid.SYMMETRIC)
    common.add_argument("--variant", choices=("iso", "aniso"), default="iso")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="input", required=True)
    common.add_argument("--out", dest="output", default=None)
    common.add_argument("--log", default=None)
    common.add_argument("--mask", default=None)
    common.add_argument("--rate", type=float, default=None)
    common.add_argument("--pattern",
                        choices=(synth.COLUMNS, synth.LOWFREQ, synth.BERNOULLI),
                        default=synth.LOWFREQ)
    common.add_argument("--ref", default=None)
    common.add_argument("--timing", action="store_true",
                        help="record wall times in the CSV log")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in ("denoise", "mri", "flow", "bench", "oracle"):
        sub.add_parser(task, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    variant = (composite.ISOTROPIC if args.variant == "iso"
               else composite.ANISOTROPIC)
    solvers = args.solver.split(",")
    cfg = RunConfig(
        task=args.task, reg=args.reg, solver=solvers[0], lam=args.lam,
        beta=args.beta, gamma=args.gamma, rho=args.rho, q_sc=args.q_sc,
        iters=args.iters, inner_iters=args.inner_iters, tol=args.tol,
        boundary=args.boundary, variant=variant, seed=args.seed,
        input=args.input, output=args.output, log=args.log, mask=args.mask,
        rate=args.rate, pattern=args.pattern, ref=args.ref, timing=args.timing)
    try:
        if cfg.task in ("denoise", "bench"):
            cfg.validate()
        if cfg.task == "denoise":
            return _cmd_denoise(cfg)
        if cfg.task == "bench":
            return _cmd_bench(cfg, solvers)
        if cfg.task == "mri":
            return _cmd_mri(cfg)
        if cfg.task == "flow":
            return _cmd_flow(cfg)
        return _cmd_oracle(cfg)
    except (ConfigError, imageio.ImageIOError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
