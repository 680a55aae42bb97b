"""Command-line surface: run | energy | radial | roots | fit | render | dipole.

Exit codes: 0 success, 1 usage error, 2 numeric divergence, 3 IO/corrupt file.
All numbers print with 17 significant digits.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import analysis, dynamics, initcond, radial, storage
from .energy import interpolant_pair, total_energy
from .errors import CorruptCheckpointError, DivergenceError, PacokError
from .grid import Field, integrate_array


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="pacok", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evolve the gradient flow from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--output", help="override the config's output directory")

    p_energy = sub.add_parser("energy", help="energy breakdown of a checkpoint")
    p_energy.add_argument("--config", required=True)
    p_energy.add_argument("--checkpoint", required=True)

    p_radial = sub.add_parser("radial", help="sharp-interface radial candidates")
    p_radial.add_argument("--n", type=int, choices=(2, 3), required=True)
    p_radial.add_argument("--zeta", type=float, required=True)
    p_radial.add_argument("--gamma", type=float, required=True)
    p_radial.add_argument("--m", type=float, required=True)
    p_radial.add_argument("--equal-mass", action="store_true")
    p_radial.add_argument("--asymptotic", action="store_true",
                          help="print the series prediction instead of optimizing")

    p_roots = sub.add_parser("roots", help="morphology thresholds and c(zeta)")
    p_roots.add_argument("--table", nargs=3, metavar=("ZMIN", "ZMAX", "COUNT"),
                         help="also print a c(zeta) table")

    p_fit = sub.add_parser("fit", help="fit ratio = a + b*m^-p to points")
    p_fit.add_argument("--points", help="CSV of m,ratio rows (optional header)")
    p_fit.add_argument("--from-traces", nargs="+",
                       help="trace files; each contributes its final (mass_u, E/mass_u)")
    p_fit.add_argument("--fix-p", type=float, default=None)

    p_render = sub.add_parser("render", help="PNG cross-section(s) of a checkpoint")
    p_render.add_argument("--checkpoint", required=True)
    p_render.add_argument("--out", required=True)
    p_render.add_argument("--axis", choices=("x", "y", "z"), default="z")
    p_render.add_argument("--index", type=int, default=None)
    p_render.add_argument("--stack", action="store_true",
                          help="write every plane along --axis as NAME_NNN.png")

    p_dipole = sub.add_parser("dipole", help="translate a checkpoint to zero dipole")
    p_dipole.add_argument("--config", required=True)
    p_dipole.add_argument("--checkpoint", required=True)
    p_dipole.add_argument("--out", required=True)
    return parser


def _initial_state(cfg: storage.RunConfig) -> dynamics.RunState:
    if isinstance(cfg.init, str):
        state = storage.read_checkpoint(cfg.init)
        if state.u.grid != cfg.grid:
            raise PacokError("checkpoint grid does not match the config grid")
    else:
        u, v = initcond.build_bilayer(cfg.init, cfg.grid)
        state = dynamics.RunState(u=u, v=v)
    if cfg.perturb is not None:
        if isinstance(cfg.perturb, storage.NoisePerturbation):
            u = initcond.add_noise(state.u, cfg.perturb.amplitude, cfg.perturb.seed)
            v = initcond.add_noise(state.v, cfg.perturb.amplitude, cfg.perturb.seed + 1)
        else:
            u, v = initcond.perforate(state.u, state.v, cfg.perturb.center, cfg.perturb.radius)
        state = dynamics.RunState(u=u, v=v, time=state.time, step=state.step)
    if cfg.rescale_masses:
        state = dynamics.RunState(
            u=initcond.mass_rescale(state.u, cfg.params.mass),
            v=initcond.mass_rescale(state.v, cfg.params.zeta * cfg.params.mass),
            time=state.time,
            step=state.step,
        )
    return state


def _cmd_run(args) -> int:
    cfg = storage.load_config(args.config)
    if args.output:
        cfg = dataclasses.replace(cfg, output_dir=args.output)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    state = _initial_state(cfg)
    trace_path = out_dir / "trace.csv"
    f, _ = interpolant_pair(cfg.params)

    def on_trace(current, residual):
        masses = (
            integrate_array(current.u.grid, f(current.u.values)),
            integrate_array(current.v.grid, f(current.v.values)),
        )
        storage.append_trace(trace_path, current.step, current.time,
                             current.last_energy, masses, residual)

    def on_checkpoint(current):
        storage.write_checkpoint(out_dir / f"ckpt_{current.step:08d}.okpf", current)

    result = dynamics.run(state, cfg.params, cfg.stepper, on_trace=on_trace,
                          on_checkpoint=on_checkpoint)
    storage.write_checkpoint(out_dir / "ckpt_final.okpf", result.state)
    energy = result.state.last_energy
    print(f"terminated: {result.reason} after step {result.state.step}")
    print(f"residual {_fmt(result.residual)}")
    print(f"E {_fmt(energy.total)}  E/m {_fmt(energy.total / cfg.params.mass)}")
    return 0


def _cmd_energy(args) -> int:
    cfg = storage.load_config(args.config)
    state = storage.read_checkpoint(args.checkpoint)
    breakdown = total_energy(state.u, state.v, cfg.params)
    f, _ = interpolant_pair(cfg.params)
    print(f"perimeter {_fmt(breakdown.perimeter)}")
    print(f"nonlocal {_fmt(breakdown.nonlocal_)}")
    print(f"constraint {_fmt(breakdown.constraint)}")
    print(f"v_regularization {_fmt(breakdown.v_regularization)}")
    print(f"total {_fmt(breakdown.total)}")
    print(f"E/m {_fmt(breakdown.total / cfg.params.mass)}")
    print(f"mass_u {_fmt(integrate_array(state.u.grid, f(state.u.values)))}")
    print(f"mass_v {_fmt(integrate_array(state.v.grid, f(state.v.values)))}")
    return 0


def _cmd_radial(args) -> int:
    if args.asymptotic:
        pred = radial.asymptotic_liposome(args.m, args.zeta, args.gamma, args.n,
                                          equal_mass=args.equal_mass)
        leading = (9.0 * args.gamma * (args.zeta + 1.0) / 8.0) ** (1.0 / 3.0)
        print(f"E/m {_fmt(pred.energy_per_mass)}")
        print(f"E/m leading {_fmt(leading)}")
        print(f"thickness_inner {_fmt(pred.thickness_inner)}")
        print(f"thickness_middle {_fmt(pred.thickness_middle)}")
        print(f"thickness_outer {_fmt(pred.thickness_outer)}")
        print(f"mid_radius {_fmt(pred.mid_radius)}")
        print(f"shell_mass_imbalance {_fmt(pred.shell_mass_imbalance)}")
        print(f"remainder {pred.remainder_order}")
        return 0
    cand = radial.optimize_liposome(args.m, args.zeta, args.gamma, args.n,
                                    equal_mass=args.equal_mass)
    energy = radial.liposome_energy(cand, args.gamma)
    res = radial.stationarity_residual(cand, args.gamma)
    print("radii " + " ".join(_fmt(r) for r in cand.radii))
    print("thicknesses " + " ".join(_fmt(t) for t in cand.thicknesses))
    print(f"perimeter {_fmt(energy.perimeter)}")
    print(f"nonlocal {_fmt(energy.nonlocal_)}")
    print(f"E {_fmt(energy.total)}")
    print(f"E/m {_fmt(energy.total / args.m)}")
    print("stationarity_residual " + " ".join(_fmt(r) for r in res))
    return 0


def _cmd_roots(args) -> int:
    th = radial.thresholds()
    print(f"zeta0 {_fmt(th.zeta0)}")
    print(f"zeta1 {_fmt(th.zeta1)}")
    print(f"zeta2 {_fmt(th.zeta2)}")
    if args.table:
        zmin, zmax, count = float(args.table[0]), float(args.table[1]), int(args.table[2])
        print("zeta c branch applicable")
        for z in np.linspace(zmin, zmax, count):
            point = radial.morphology(float(z))
            print(f"{_fmt(z)} {_fmt(point.value)} {point.branch} {point.applicable}")
    return 0


def _load_points(args) -> np.ndarray:
    points = []
    if args.points:
        for line in Path(args.points).read_text().strip().splitlines():
            parts = line.replace(",", " ").split()
            if not parts:
                continue
            try:
                values = [float(p) for p in parts[:2]]
            except ValueError:
                continue  # header line
            points.append(values)
    if args.from_traces:
        for trace_file in args.from_traces:
            columns = storage.read_trace(trace_file)
            if len(columns["E"]) == 0:
                raise ValueError(f"empty trace {trace_file}")
            mass = columns["mass_u"][-1]
            points.append([mass, columns["E"][-1] / mass])
    return np.asarray(points, dtype=np.float64)


def _cmd_fit(args) -> int:
    points = _load_points(args)
    result = analysis.fit_energy_mass(points, fix_p=args.fix_p)
    print(f"a {_fmt(result.a)}")
    print(f"b {_fmt(result.b)}")
    print(f"p {_fmt(result.p)}")
    print(f"rms_residual {_fmt(result.rms_residual)}")
    return 0


def _cmd_render(args) -> int:
    state = storage.read_checkpoint(args.checkpoint)
    if state.u.grid.dim == 2:
        storage.render_cross_section(state.u, state.v, None, args.out)
        print(f"wrote {args.out}")
        return 0
    axis = {"x": 0, "y": 1, "z": 2}[args.axis]
    if args.stack:
        base = Path(args.out)
        for index in range(state.u.grid.points[axis]):
            target = base.with_name(f"{base.stem}_{index:03d}{base.suffix or '.png'}")
            storage.render_cross_section(state.u, state.v, (args.axis, index), target)
        print(f"wrote {state.u.grid.points[axis]} planes to {base.parent}")
        return 0
    index = args.index if args.index is not None else state.u.grid.points[axis] // 2
    storage.render_cross_section(state.u, state.v, (args.axis, index), args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_dipole(args) -> int:
    cfg = storage.load_config(args.config)
    state = storage.read_checkpoint(args.checkpoint)
    f, _ = interpolant_pair(cfg.params)
    w = Field(state.u.grid, f(state.u.values) - f(state.v.values) / cfg.params.zeta)
    w = Field(w.grid, w.values - w.values.mean())
    shift, _ = analysis.zero_dipole_shift(w)
    # apply the same translation to both phases
    shifted_u = _translate(state.u, shift)
    shifted_v = _translate(state.v, shift)
    moved = dynamics.RunState(u=shifted_u, v=shifted_v, time=state.time, step=state.step)
    storage.write_checkpoint(args.out, moved)
    print("shift " + " ".join(_fmt(t) for t in shift))
    print(f"wrote {args.out}")
    return 0


def _translate(field: Field, shift) -> Field:
    grid = field.grid
    spectrum = np.fft.rfftn(field.values)
    for axis in range(grid.dim):
        n = grid.points[axis]
        spacing = grid.spacing[axis]
        if axis == 0:
            k = 2.0 * np.pi * np.fft.rfftfreq(n, d=spacing)
        else:
            k = 2.0 * np.pi * np.fft.fftfreq(n, d=spacing)
        shape = [1] * grid.dim
        shape[grid.dim - 1 - axis] = k.size
        spectrum = spectrum * np.exp(1j * k.reshape(shape) * shift[axis])
    return Field(grid, np.fft.irfftn(spectrum, s=grid.shape, axes=tuple(range(grid.dim))))


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    handlers = {
        "run": _cmd_run,
        "energy": _cmd_energy,
        "radial": _cmd_radial,
        "roots": _cmd_roots,
        "fit": _cmd_fit,
        "render": _cmd_render,
        "dipole": _cmd_dipole,
    }
    try:
        return handlers[args.command](args)
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 2
    except (CorruptCheckpointError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except (PacokError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
