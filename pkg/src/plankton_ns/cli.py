"""Command-line interface.

Every subcommand takes its options as flags or from ``--config FILE``, a
flat JSON object whose keys are the option names with ``-`` replaced by
``_``. Flags given on the command line override the file.

Exit codes: 0 success, 1 analysis not applicable, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Any, Callable, Iterable

import click
import numpy as np
from click.core import ParameterSource

from . import fixed_points as fpmod
from . import global_dynamics, kernels, model, normal_form, simulate
from .errors import NotApplicableError, NotFoundError, PlanktonError
from .model import Params

EXIT_NOT_APPLICABLE = 1
EXIT_IO = 3

POSITIVE = click.FloatRange(min=0.0, min_open=True)
COUNT = click.IntRange(min=1)
NONNEG_COUNT = click.IntRange(min=0)


def fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def csv_text(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    out.writerows([fmt(x) for x in row] for row in rows)
    return buf.getvalue()


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "), allow_nan=False) + "\n"


def emit(text: str, output: str) -> None:
    if output == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        click.echo(f"error: cannot write {output}: {exc}", err=True)
        sys.exit(EXIT_IO)


def not_applicable(msg: str) -> None:
    click.echo(f"not applicable: {msg}", err=True)
    sys.exit(EXIT_NOT_APPLICABLE)


# ---------------------------------------------------------------------------
# config handling


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        click.echo(f"error: cannot read config {path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise click.UsageError("config must be a JSON object")
    return data


def config_key(param: click.Parameter) -> str:
    """Config-file key of an option: its long flag with ``-`` turned into ``_``."""
    longs = [o for o in param.opts if o.startswith("--")]
    return longs[0][2:].replace("-", "_") if longs else param.name


def resolve(ctx: click.Context, kwargs: dict) -> dict:
    """Merge ``--config`` values under explicitly given flags and validate them."""
    path = kwargs.pop("config", None)
    if not path:
        return kwargs
    cfg = _load_config(path)
    params = {config_key(p): p for p in ctx.command.params}
    unknown = sorted(set(cfg) - set(params) - {"config"})
    if unknown:
        raise click.UsageError(f"unknown config key(s) for {ctx.command.name}: {', '.join(unknown)}")
    out = dict(kwargs)
    for key, value in cfg.items():
        if key == "config":
            continue
        opt = params[key]
        if ctx.get_parameter_source(opt.name) in (ParameterSource.COMMANDLINE, ParameterSource.ENVIRONMENT):
            continue
        try:
            if opt.multiple:
                value = tuple(opt.type.convert(v, opt, ctx) for v in value)
            else:
                value = opt.type.convert(value, opt, ctx)
        except click.BadParameter as exc:
            raise click.UsageError(f"config key {key!r}: {exc.message}") from None
        out[opt.name] = value
    return out


def _require(kw: dict, *names: str) -> None:
    missing = [n for n in names if kw.get(n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise click.UsageError(f"missing required value(s): {flags}")


def _params(kw: dict, beta: bool = True) -> Params:
    _require(kw, "r", "theta", "gamma", *(("beta",) if beta else ()))
    return Params(kw["r"], kw["beta"] if beta else 1.0, kw["theta"], kw["gamma"])


def options(*decorators: Callable) -> Callable:
    def wrap(f):
        for d in reversed(decorators):
            f = d(f)
        return click.option("--config", type=click.Path(dir_okay=False),
                            help="JSON run config; flags override it.")(f)
    return wrap


opt_r = click.option("--r", "r", type=POSITIVE, help="zooplankton mortality r")
opt_beta = click.option("--beta", type=POSITIVE, help="conversion efficiency beta")
opt_theta = click.option("--theta", type=POSITIVE, help="toxin mortality theta")
opt_gamma = click.option("--gamma", type=POSITIVE, help="half-saturation gamma")
opt_out = click.option("-o", "--output", default="-", show_default=True, help="output path, - for stdout")


def opt_init(u0: float, v0: float):
    return [click.option("--u0", type=click.FloatRange(min=0.0), default=u0, show_default=True),
            click.option("--v0", type=click.FloatRange(min=0.0), default=v0, show_default=True)]


opt_grid = [
    click.option("--beta-min", type=POSITIVE, default=4.0, show_default=True),
    click.option("--beta-max", type=POSITIVE, default=11.0, show_default=True),
    click.option("--beta-steps", type=click.IntRange(min=2), default=141, show_default=True),
]


def _beta_grid(kw: dict) -> np.ndarray:
    if not kw["beta_max"] > kw["beta_min"]:
        raise click.UsageError("--beta-max must exceed --beta-min")
    return np.linspace(kw["beta_min"], kw["beta_max"], kw["beta_steps"])


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main() -> None:
    """Analysis toolkit for a discrete phytoplankton-zooplankton map."""


@main.command("fixed-points")
@options(opt_r, opt_beta, opt_theta, opt_gamma, opt_out,
         click.option("--format", "fmt_", type=click.Choice(["text", "json"]), default="text",
                      show_default=True))
@click.pass_context
def cmd_fixed_points(ctx, **kw):
    """Region label, psi(1), u_hat, psi(u_hat) and every fixed point with its type."""
    kw = resolve(ctx, kw)
    p = _params(kw)
    uh = fpmod.u_hat(p)
    report = {
        "params": {"r": p.r, "beta": p.beta, "theta": p.theta, "gamma": p.gamma},
        "region": fpmod.classify_region(p).tag,
        "psi_1": model.psi(p, 1.0),
        "u_hat": uh,
        "psi_u_hat": model.psi(p, uh),
        "fixed_points": [
            {"branch": f.branch, "u": f.u, "v": f.v, "kind": f.kind.value, "tangent": f.tangent}
            for f in fpmod.all_fixed_points(p)
        ],
    }
    if kw["fmt_"] == "json":
        emit(canonical_json(report), kw["output"])
        return
    lines = [f"region {report['region']}",
             f"psi(1) {fmt(report['psi_1'])}",
             f"u_hat {fmt(uh)}",
             f"psi(u_hat) {fmt(report['psi_u_hat'])}",
             "branch,u,v,kind,tangent"]
    for f in report["fixed_points"]:
        lines.append(",".join([f["branch"], fmt(f["u"]), fmt(f["v"]), f["kind"],
                               str(f["tangent"]).lower()]))
    emit("\n".join(lines) + "\n", kw["output"])


@main.command("ns")
@options(opt_r, opt_theta, opt_gamma, opt_out,
         click.option("--xy", type=click.Choice(normal_form.XY_CONVENTIONS), default="literal",
                      show_default=True, help="convention for the mixed quadratic term"))
@click.pass_context
def cmd_ns(ctx, **kw):
    """Neimark-Sacker point on E1 and the full normal-form report as JSON."""
    kw = resolve(ctx, kw)
    _params(kw, beta=False)
    try:
        rep = normal_form.analyze(kw["r"], kw["theta"], kw["gamma"], xy=kw["xy"])
    except NotFoundError as exc:
        not_applicable(str(exc))
    except PlanktonError as exc:
        not_applicable(f"normal form undefined: {exc}")
    emit(canonical_json(rep.to_dict()), kw["output"])


@main.command("sweep")
@options(opt_r, opt_theta, opt_gamma, opt_out, *opt_grid, *opt_init(0.1, 0.3),
         click.option("--n", type=COUNT, default=10_000, show_default=True),
         click.option("--transient", type=NONNEG_COUNT, default=simulate.DEFAULT_TRANSIENT, show_default=True),
         click.option("--keep", type=COUNT, default=simulate.DEFAULT_KEEP, show_default=True),
         click.option("--workers", type=COUNT, default=1, show_default=True))
@click.pass_context
def cmd_sweep(ctx, **kw):
    """Bifurcation diagram data: the last KEEP states for each beta."""
    kw = resolve(ctx, kw)
    _params(kw, beta=False)
    if not kw["keep"] <= kw["n"] - kw["transient"]:
        raise click.UsageError("--keep must not exceed --n minus --transient")
    res = simulate.bifurcation_sweep(kw["r"], kw["theta"], kw["gamma"], _beta_grid(kw),
                                     init=(kw["u0"], kw["v0"]), n=kw["n"], transient=kw["transient"],
                                     keep=kw["keep"], allow_escape=True, workers=kw["workers"])
    rows = ((b, u, v) for i, b in enumerate(res.beta_grid) for u, v in zip(res.u[i], res.v[i]))
    emit(csv_text(["beta", "u", "v"], rows), kw["output"])


@main.command("mle")
@options(opt_r, opt_theta, opt_gamma, opt_out, *opt_grid, *opt_init(0.1, 0.3),
         click.option("--n", type=COUNT, default=20_000, show_default=True),
         click.option("--transient", type=NONNEG_COUNT, default=simulate.DEFAULT_TRANSIENT, show_default=True),
         click.option("--allow-escape", is_flag=True, help="keep iterating after leaving the quadrant"),
         click.option("--workers", type=COUNT, default=1, show_default=True))
@click.pass_context
def cmd_mle(ctx, **kw):
    """Maximal Lyapunov exponent per beta; escaped orbits give nan."""
    kw = resolve(ctx, kw)
    _params(kw, beta=False)
    if not kw["n"] > kw["transient"]:
        raise click.UsageError("--n must exceed --transient")
    res = simulate.bifurcation_sweep(kw["r"], kw["theta"], kw["gamma"], _beta_grid(kw),
                                     init=(kw["u0"], kw["v0"]), n=kw["n"], transient=kw["transient"],
                                     keep=1, allow_escape=kw["allow_escape"], workers=kw["workers"])
    emit(csv_text(["beta", "mle"], zip(res.beta_grid, res.mle)), kw["output"])


@main.command("trajectory")
@options(opt_r, opt_beta, opt_theta, opt_gamma, opt_out, *opt_init(0.1, 0.3),
         click.option("--n", type=COUNT, default=10_000, show_default=True),
         click.option("--transient", type=NONNEG_COUNT, default=0, show_default=True))
@click.pass_context
def cmd_trajectory(ctx, **kw):
    """States of one orbit from step TRANSIENT on; the status goes to stderr."""
    kw = resolve(ctx, kw)
    p = _params(kw)
    if not kw["n"] > kw["transient"]:
        raise click.UsageError("--n must exceed --transient")
    res = simulate.trajectory(p, (kw["u0"], kw["v0"]), kw["n"], kw["transient"])
    rows = zip(res.steps, res.samples[:, 0], res.samples[:, 1])
    emit(csv_text(["step", "u", "v"], rows), kw["output"])
    st = res.status
    click.echo(f"status {st.kind}" + (f" {st.label}" if st.label else "")
               + (f" step {st.step}" if st.step is not None else ""), err=True)


def _parse_init(s: str) -> tuple[float, float]:
    try:
        u, v = (float(x) for x in s.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 'u,v', got {s!r}") from None
    if u < 0 or v < 0:
        raise click.BadParameter(f"initial point must be nonnegative, got {s!r}")
    return u, v


class InitPoint(click.ParamType):
    name = "u,v"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)) and len(value) == 2:
            value = f"{value[0]},{value[1]}"
        try:
            return _parse_init(str(value))
        except click.BadParameter as exc:
            self.fail(exc.message, param, ctx)


@main.command("phase")
@options(opt_r, opt_beta, opt_theta, opt_gamma, opt_out,
         click.option("--init", "inits", type=InitPoint(), multiple=True,
                      help="initial point u,v; repeatable"),
         click.option("--n", type=COUNT, default=10_000, show_default=True),
         click.option("--transient", type=NONNEG_COUNT, default=simulate.DEFAULT_TRANSIENT, show_default=True))
@click.pass_context
def cmd_phase(ctx, **kw):
    """Post-transient clouds for several initial points."""
    kw = resolve(ctx, kw)
    p = _params(kw)
    if not kw["n"] > kw["transient"]:
        raise click.UsageError("--n must exceed --transient")
    inits = kw["inits"] or ((0.1, 0.3),)
    portrait = simulate.phase_portrait(p, inits, kw["n"], kw["transient"])
    rows = ((k, s, u, v) for k, c in enumerate(portrait.clouds)
            for s, (u, v) in zip(c.steps, c.samples))
    emit(csv_text(["init", "step", "u", "v"], rows), kw["output"])


@main.command("regions")
@options(opt_r, opt_out,
         click.option("--gamma-min", type=POSITIVE, default=0.01, show_default=True),
         click.option("--gamma-max", type=POSITIVE, default=1.0, show_default=True),
         click.option("--gamma-steps", type=click.IntRange(min=2), default=100, show_default=True),
         click.option("--theta-min", type=POSITIVE, default=0.01, show_default=True),
         click.option("--theta-max", type=POSITIVE, default=5.0, show_default=True),
         click.option("--theta-steps", type=click.IntRange(min=2), default=100, show_default=True))
@click.pass_context
def cmd_regions(ctx, **kw):
    """Region label R1..R5 on a (gamma, theta) grid for fixed r."""
    kw = resolve(ctx, kw)
    _require(kw, "r")
    gs = np.linspace(kw["gamma_min"], kw["gamma_max"], kw["gamma_steps"])
    ts = np.linspace(kw["theta_min"], kw["theta_max"], kw["theta_steps"])
    rows = ((g, t, fpmod.classify_region(Params(kw["r"], 1.0, float(t), float(g))).tag)
            for g in gs for t in ts)
    emit(csv_text(["gamma", "theta", "region"], rows), kw["output"])


@main.command("global-check")
@options(opt_r, opt_beta, opt_theta, opt_gamma, opt_out,
         click.option("--nu", type=COUNT, default=50, show_default=True),
         click.option("--nv", type=COUNT, default=50, show_default=True),
         click.option("--region", type=click.Choice(["auto", "full_M", "u_below", "v_below"]),
                      default="auto", show_default=True),
         click.option("--max-iter", type=COUNT, default=simulate.MAX_ITER, show_default=True),
         click.option("--force", is_flag=True, help="scan even if no convergence hypothesis holds"))
@click.pass_context
def cmd_global_check(ctx, **kw):
    """Where each point of an initial lattice converges to."""
    kw = resolve(ctx, kw)
    p = _params(kw)
    hyp = global_dynamics.convergence_hypotheses(p)
    if hyp.applies is None and not kw["force"]:
        not_applicable(f"no global-convergence hypothesis holds ({hyp.reason}); use --force to scan anyway")
    region: Any = None
    if kw["region"] != "auto":
        match = [reg for reg in hyp.regions if reg.kind == kw["region"]]
        if match:
            region = match[0]
        elif kw["region"] == "full_M":
            region = "full_M"
        else:
            not_applicable(f"region {kw['region']} needs the small-gamma hypothesis")
    try:
        res = simulate.convergence_scan(p, region, (kw["nu"], kw["nv"]), max_iter=kw["max_iter"],
                                        require_hypotheses=not kw["force"])
    except NotApplicableError as exc:
        not_applicable(str(exc))
    rows = ((u, v, t, int(s)) for (u, v), t, s in zip(res.points, res.targets, res.steps))
    emit(csv_text(["u0", "v0", "target", "steps"], rows), kw["output"])
    click.echo(f"hypothesis {hyp.applies or 'none'}; fraction to (1,0) {fmt(res.fraction)}; "
               f"backend {kernels.BACKEND}", err=True)


if __name__ == "__main__":  # pragma: no cover
    main()
