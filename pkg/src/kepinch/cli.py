"""Command-line front end; a thin client of the analysis service.

Every run is reproducible: identical argv (seed included) produces
byte-identical output.  Reports go to stdout, diagnostics to stderr.
Exit codes: 0 success, 1 usage or I/O error, 2 certification or
lemma-test violations found.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from pydantic import BaseModel, ValidationError

from .client import ServiceClient, ServiceError
from .regimes import thresholds
from .service import schemas

VERBS = ("analyze", "sweep", "average", "oracle", "certify", "constants", "lemma-test")

_FLAG_OF_FIELD = {
    "a": "--a",
    "b": "--b",
    "bmod": "--B",
    "phase": "--phase",
    "grid": "--grid",
    "refine": "--refine",
    "samples": "--samples",
    "seed": "--seed",
    "lam": "--lambda",
    "lambda": "--lambda",
    "chi": "--chi",
    "t_min": "--t-min",
    "t_max": "--t-max",
    "steps": "--steps",
}


class CliUsageError(Exception):
    pass


@dataclass(frozen=True)
class Command:
    verb: str
    request: BaseModel | None
    json_output: bool = False
    out_path: str | None = None
    server: str | None = None


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):  # noqa: D102 - argparse hook
        raise CliUsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="kepinch", add_help=True)
    sub = parser.add_subparsers(dest="verb", metavar="|".join(VERBS))

    def common(p: _Parser) -> None:
        p.add_argument("--json", action="store_true", help="emit a JSON document")
        p.add_argument("--out", metavar="PATH", help="write the report to PATH")
        p.add_argument("--server", metavar="URL", help="talk to a running service")

    p = sub.add_parser("analyze", help="closed-form analysis of one profile")
    p.add_argument("--a", type=float, required=True, help="component R_{11~11~}")
    p.add_argument("--b", type=float, required=True, help="component R_{11~22~}")
    p.add_argument("--B", type=float, required=True, help="|R_{12~12~}|")
    p.add_argument("--phase", type=float, default=0.0)
    common(p)

    p = sub.add_parser("sweep", help="CSV sweep over the shape parameter t")
    p.add_argument("--a", type=float, default=-3.0)
    p.add_argument("--b", type=float, default=-1.0)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", metavar="PATH", help="write the CSV to PATH")
    p.add_argument("--server", metavar="URL", help="talk to a running service")

    p = sub.add_parser("average", help="Monte Carlo vs closed-form average")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("oracle", help="brute-force vs closed-form extrema")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--refine", type=int, default=200)
    common(p)

    p = sub.add_parser("certify", help="sample the regime and check the inequality chain")
    p.add_argument("--chi", default="improved", help="sy | improved | guan | value:<x>")
    p.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("constants", help="the pinching threshold ladder")
    common(p)

    p = sub.add_parser("lemma-test", help="normal-form recovery on scrambled tensors")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    return parser


def _usage_from_validation(err: ValidationError) -> CliUsageError:
    parts = []
    for item in err.errors():
        loc = item.get("loc") or ()
        field = str(loc[0]) if loc else ""
        flag = _FLAG_OF_FIELD.get(field, field or "arguments")
        parts.append(f"invalid value for {flag}: {item['msg']}")
    return CliUsageError("; ".join(parts))


def _resolve_chi(text: str) -> float:
    table = thresholds()
    named = {
        "sy": table.chi_siu_yang.chi,
        "improved": table.chi_improved.chi,
        "guan": table.chi_guan.chi,
    }
    if text in named:
        return named[text]
    if text.startswith("value:"):
        try:
            return float(text.split(":", 1)[1])
        except ValueError:
            raise CliUsageError(f"invalid value for --chi: {text!r} is not a number")
    raise CliUsageError(
        f"invalid value for --chi: {text!r} (expected sy, improved, guan, or value:<x>)"
    )


def parse_command(argv: list[str]) -> Command:
    """Parse and fully validate argv; raises CliUsageError on anything a
    library precondition would reject."""
    ns = _build_parser().parse_args(argv)
    if ns.verb is None:
        raise CliUsageError("a subcommand is required")
    try:
        if ns.verb == "analyze":
            req: BaseModel | None = schemas.AnalyzeRequest(
                a=ns.a, b=ns.b, bmod=ns.B, phase=ns.phase
            )
        elif ns.verb == "sweep":
            req = schemas.SweepRequest(
                a=ns.a, b=ns.b, t_min=ns.t_min, t_max=ns.t_max, steps=ns.steps
            )
        elif ns.verb == "average":
            req = schemas.AverageRequest(
                a=ns.a, b=ns.b, bmod=ns.B, phase=ns.phase, samples=ns.samples, seed=ns.seed
            )
        elif ns.verb == "oracle":
            req = schemas.OracleRequest(
                a=ns.a, b=ns.b, bmod=ns.B, phase=ns.phase, grid=ns.grid, refine=ns.refine
            )
        elif ns.verb == "certify":
            req = schemas.CertifyRequest(
                chi=_resolve_chi(ns.chi), lam=ns.lam, samples=ns.samples, seed=ns.seed
            )
        elif ns.verb == "constants":
            req = None
        else:
            req = schemas.LemmaTestRequest(samples=ns.samples, seed=ns.seed)
    except ValidationError as err:
        raise _usage_from_validation(err) from err
    return Command(
        verb=ns.verb,
        request=req,
        json_output=getattr(ns, "json", False),
        out_path=ns.out,
        server=ns.server,
    )


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _fmt_opt(x: float | None) -> str:
    return "undefined" if x is None else _fmt(x)


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _json_doc(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", by_alias=True), indent=2) + "\n"


def _dir_text(d: list[list[float]]) -> str:
    return f"({_fmt(d[0][0])}{d[0][1]:+.9g}i, {_fmt(d[1][0])}{d[1][1]:+.9g}i)"


def _render_analyze(r: schemas.AnalyzeResponse) -> str:
    p, s, g, v = r.profile, r.summary, r.regime, r.variational
    lines = [
        f"profile: a={_fmt(p.a)} b={_fmt(p.b)} |B|={_fmt(p.bmod)} phase={_fmt(p.phase)}",
        f"  A={_fmt(p.big_a)} sigma={_fmt(p.sigma)} tau={_fmt(p.tau)} "
        f"rho={_fmt(p.rho)} t={_fmt_opt(p.t)}",
        "sectional curvature:",
        f"  k_min={_fmt(s.k_min)} k_max={_fmt(s.k_max)} k_av={_fmt(s.k_av)}",
        f"  locus: min={s.locus_min} max={s.locus_max}",
        f"  argmax: {', '.join(_dir_text(d) for d in s.argmax)}",
        "regime:",
        f"  ratio={_fmt_opt(g.ratio)} ball-like={_yesno(g.ball_like)} "
        f"nonpositive-bisectional={_yesno(g.nonpositive_bisectional)}",
        f"  siu-yang={_yesno(g.in_siu_yang)} improved={_yesno(g.in_improved)} "
        f"guan={_yesno(g.in_guan)}",
        "variational:",
        f"  lap R1111={_fmt(v.lap_r1111)} lap R1212={_fmt(v.lap_r1212)}",
        f"  phi={_fmt(v.phi)} C={_fmt(v.c_const)} phi1={_fmt_opt(v.phi1)} f={_fmt(v.f)}",
    ]
    return "\n".join(lines) + "\n"


def _render_constants(r: schemas.ConstantsResponse) -> str:
    lines = [f"{'name':<10} {'chi':<15} {'t*':<15}"]
    for row in r.thresholds:
        lines.append(f"{row.name:<10} {_fmt(row.chi):<15} {_fmt(row.t_star):<15}")
    return "\n".join(lines) + "\n"


def _render_average(r: schemas.AverageResponse) -> str:
    lines = [
        f"closed form  k_av = {_fmt(r.closed_form)}",
        f"exact moment k_av = {_fmt(r.exact_moment)}",
        f"monte carlo  k_av = {_fmt(r.estimate)} (stderr {_fmt(r.stderr)})",
        f"|error| = {_fmt(r.abs_error)} ({_fmt(r.z_score)} standard errors)",
    ]
    return "\n".join(lines) + "\n"


def _render_oracle(r: schemas.OracleResponse) -> str:
    lines = [
        f"closed form: k_min={_fmt(r.closed.k_min)} k_max={_fmt(r.closed.k_max)}",
        f"brute force: k_min={_fmt(r.brute.k_min)} k_max={_fmt(r.brute.k_max)}",
        f"  argmin {_dir_text(r.brute.argmin)}",
        f"  argmax {_dir_text(r.brute.argmax)}",
        f"max |difference| = {_fmt(r.max_abs_diff)}",
    ]
    return "\n".join(lines) + "\n"


def _render_certify(r: schemas.CertifyResponse) -> str:
    lines = [
        f"chi={_fmt(r.chi)} lambda={_fmt(r.lam)} samples={r.samples} seed={r.seed}",
        f"min margin (strict checks) = {_fmt(r.min_margin)}",
        f"product range = [{_fmt(r.product_range[0])}, {_fmt(r.product_range[1])}]",
        f"violations: {r.violation_count}",
    ]
    counts: dict[str, int] = {}
    for v in r.violations:
        counts[v.check] = counts.get(v.check, 0) + 1
    for name in sorted(counts):
        lines.append(f"  {name}: {counts[name]}")
    return "\n".join(lines) + "\n"


def _render_lemma(r: schemas.LemmaTestResponse) -> str:
    lines = [
        f"samples={r.samples} seed={r.seed}",
        f"max three-equal-index residual = {_fmt(r.max_three_index_residual)}",
        f"max critical gradient at e1    = {_fmt(r.max_gradient)}",
        f"max profile recovery error     = {_fmt(r.max_profile_error)}",
        f"failures: {len(r.failures)}",
    ]
    return "\n".join(lines) + "\n"


def _render_sweep_csv(r: schemas.SweepResponse) -> str:
    lines = ["t,ratio,in_sy,in_improved,in_guan,phi,c_const"]
    for row in r.rows:
        lines.append(
            ",".join(
                [
                    repr(row.t),
                    repr(row.ratio),
                    "true" if row.in_sy else "false",
                    "true" if row.in_improved else "false",
                    "true" if row.in_guan else "false",
                    repr(row.phi),
                    repr(row.c_const),
                ]
            )
        )
    return "\r\n".join(lines) + "\r\n"


def execute(cmd: Command) -> tuple[int, str]:
    """Run a validated command; returns (exit_code, report text)."""
    client = ServiceClient(cmd.server)
    code = 0
    if cmd.verb == "analyze":
        resp = client.analyze(cmd.request)
        text = _json_doc(resp) if cmd.json_output else _render_analyze(resp)
    elif cmd.verb == "constants":
        resp = client.constants()
        text = _json_doc(resp) if cmd.json_output else _render_constants(resp)
    elif cmd.verb == "average":
        resp = client.average(cmd.request)
        text = _json_doc(resp) if cmd.json_output else _render_average(resp)
    elif cmd.verb == "oracle":
        resp = client.oracle(cmd.request)
        text = _json_doc(resp) if cmd.json_output else _render_oracle(resp)
    elif cmd.verb == "certify":
        resp = client.certify(cmd.request)
        text = _json_doc(resp) if cmd.json_output else _render_certify(resp)
        if resp.violation_count > 0:
            code = 2
    elif cmd.verb == "lemma-test":
        resp = client.lemma_test(cmd.request)
        text = _json_doc(resp) if cmd.json_output else _render_lemma(resp)
        if resp.failures:
            code = 2
    elif cmd.verb == "sweep":
        resp = client.sweep(cmd.request)
        text = _render_sweep_csv(resp)
    else:
        raise CliUsageError(f"unknown verb {cmd.verb!r}")

    if cmd.out_path is not None:
        try:
            with open(cmd.out_path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ServiceError(f"cannot write {cmd.out_path}: {exc}") from exc
        print(f"wrote {cmd.out_path}", file=sys.stderr)
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        cmd = parse_command(args)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        code, text = execute(cmd)
    except (ServiceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
