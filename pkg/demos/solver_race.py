"""Race the TV solvers on one denoising instance and log their traces.

Runs proximal gradient, the accelerated dual method with and without
adaptive restart, ADMM and Chambolle-Pock on the same noisy phantom and
writes one CSV per solver (race.<name>.csv).  Primal objectives of the
dual solvers are recovered from the logged gap via
``primal = gap - trace_objective``.
"""

import numpy as np

from varimg import baselines, composite, synth


def main():
    base = synth.intensity_ramp_mask(synth.shapes_phantom(32, 32))
    f = synth.add_gaussian_noise(0.5 + 0.5 * (base - base.mean()), 0.005,
                                 seed=7)
    lam = 0.2
    n_iters = 2000
    prob = composite.tv_dual_problem(f, lam)
    p0 = np.zeros((2,) + f.shape)

    traces = {}
    _, traces["pg"] = composite.proximal_gradient(prob, p0, n_iters=n_iters)
    _, traces["adpa"] = composite.adpa(prob, p0, n_iters=n_iters,
                                       restart=False)
    _, traces["adpa-restart"] = composite.adpa(prob, p0, n_iters=n_iters,
                                               restart=True)
    _, traces["admm"] = baselines.admm_tv(
        f, lam, baselines.AdmmConfig(n_iters=n_iters))
    _, traces["cp"] = baselines.chambolle_pock_tv(
        f, lam, baselines.PdConfig(n_iters=n_iters))

    print(f"{'solver':14s}{'final primal':>16s}{'restarts':>10s}")
    for name, tr in traces.items():
        if name in ("admm", "cp"):
            primal = tr.objective[-1]
        else:
            primal = tr.gap[-1] - tr.objective[-1]
        print(f"{name:14s}{primal:16.10f}{tr.restart_count:10d}")
        tr.to_csv(f"race.{name}.csv")


if __name__ == "__main__":
    main()
