"""Command-line front end.

Machine-readable JSON goes to stdout (or ``--out``); human summaries and
progress lines go to stderr.  Exit codes: 0 ok, 2 bad input, 3 budget
exceeded, 4 unsupported field, 5 no convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import instances
from .analysis import RankReport, kruskal_certify, rank_a
from .binary_cubic import decompose_s3f2
from .errors import InputError, SingularPencil, SymrankError, UnsupportedField
from .fields import Field
from .numeric import (
    PENCIL_TOL,
    banach_symmetry_check,
    best_sym_rank1,
    detect_border_rank2,
    eps_curve,
    eval_eps,
    pencil_rank2_test,
)
from .oracle import DEFAULT_BUDGET, census, profile, rank_search, theorem_sweep
from .tensor import Decomposition, SymTensor, Tensor, sym_index_orbits


def _say(msg: str):
    print(msg, file=sys.stderr)


def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_tensor(path: str) -> Tensor:
    t = Tensor.from_json(_read_json(path))
    return SymTensor(t.data, t.field) if t.is_symmetric() else t


def _require(t: Tensor, ok: bool, what: str):
    if not ok:
        raise UnsupportedField(f"{what} does not support field {t.field}")


def _emit(obj: Any, out: str | None):
    text = json.dumps(obj, indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- analyze ------------------------------------------------------------------------


def _analyze_exact(t: Tensor, report: RankReport, budget: int):
    if isinstance(t, SymTensor):
        prof = profile(t, budget)
        report.rank = {"value": prof.rank, "method": "exhaustive"}
        report.srank = {"value": prof.srank.to_json(), "method": "exhaustive"}
        report.witnesses["rank"] = prof.rank_witness.to_json()
        if prof.srank.witness is not None:
            report.witnesses["srank"] = prof.srank.witness.to_json()
    else:
        res = rank_search(t, budget)
        report.rank = {"value": res.rank, "method": "exhaustive"}
        report.witnesses["rank"] = res.witness.to_json()


def _analyze_float(t: Tensor, report: RankReport, tol: float | None):
    if t.order == 3 and t.dim == 2:
        try:
            verdict = pencil_rank2_test(t, tol or PENCIL_TOL)
        except SingularPencil as exc:
            report.notes.append(f"pencil test: {exc}")
        else:
            report.pencil = verdict.to_json()
            if verdict.rank_le_2:
                report.rank = {"value": report.rank_a, "method": "pencil"}
            else:
                report.rank = {"lower": 3, "method": "pencil"}
    if isinstance(t, SymTensor) and t.order >= 3:
        form = detect_border_rank2(t)
        if form is not None:
            report.border = form.to_json()
            report.brank = {"value": 2, "method": "certified"}
    report.notes.append("rank A of a float tensor is a numerical rank (relative singular-value threshold)")


def cmd_analyze(args) -> dict:
    t = load_tensor(args.input)
    f = t.field
    report = RankReport(t.order, t.dim, f.name, rank_a(t, args.tol))
    if report.rank_a == 0:
        report.rank = {"value": 0, "method": "exhaustive"}
        if isinstance(t, SymTensor):
            report.srank = {"value": 0, "method": "exhaustive"}
    elif f.is_finite:
        _analyze_exact(t, report, args.budget)
    elif f.is_float:
        _analyze_float(t, report, args.tol)
    if f.kind == "rational" and isinstance(t, SymTensor) and t.order == 3 and t.dim == 2:
        dec, trace = decompose_s3f2(t)
        report.srank = {"upper": len(dec), "method": "bound"}
        report.witnesses["srank"] = dec.to_json()
    if args.certify:
        _certify(t, report, args.certify, args.tol)
    if not report.chain_holds():
        raise AssertionError(f"rank chain violated: {report.to_json()}")
    _say(_summary(report))
    return report.to_json()


def _certify(t: Tensor, report: RankReport, path: str, tol):
    dec = Decomposition.from_json(_read_json(path))
    if dec.field != t.field or (dec.order, dec.dim) != (t.order, t.dim):
        raise InputError("certificate decomposition does not match the tensor's field or shape")
    rebuilt = dec.reconstruct()
    same = rebuilt.allclose(t) if t.field.is_float else rebuilt == t
    if not same:
        raise InputError("certificate decomposition does not reconstruct the tensor")
    cert = kruskal_certify(dec, tol)
    report.certificate = cert.to_json()
    if cert.unique and (report.rank is None or "value" not in report.rank):
        report.rank = {"value": cert.r, "method": "certified"}


def _summary(report: RankReport) -> str:
    parts = [f"rank_A={report.rank_a}"]
    for name in ("rank", "srank", "brank"):
        v = getattr(report, name)
        if v:
            val = v.get("value", f">={v['lower']}" if "lower" in v else f"<={v.get('upper')}")
            parts.append(f"{name}={val} ({v['method']})")
    if report.pencil:
        parts.append("pencil: " + ("rank<=2" if report.pencil["rank_le_2"] else "rank>2"))
    if report.border:
        parts.append("border form found")
    return ", ".join(parts)


# -- other commands ---------------------------------------------------------------


def cmd_decompose(args) -> dict:
    t = load_tensor(args.input)
    _require(t, t.field.is_exact, "decompose")
    dec, trace = decompose_s3f2(t)
    _say(f"{len(dec)} terms, cases {' -> '.join(trace.cases)}")
    return {"decomposition": dec.to_json(), "trace": trace.to_json(t.field)}


def _finite_field(args) -> Field:
    if args.field is None or args.d is None or args.n is None:
        raise InputError("--field, --d and --n are required")
    f = Field.parse(args.field)
    if not f.is_finite:
        raise UnsupportedField(f"exhaustive enumeration needs a finite field, got {f}")
    return f


def cmd_census(args) -> dict:
    f = _finite_field(args)
    rep = census(f, args.d, args.n, args.budget)
    _say(f"{rep.total_symmetric} symmetric tensors, {rep.expressible_nonzero} nonzero expressible")
    return rep.to_json()


def cmd_sweep(args) -> dict:
    f = _finite_field(args)
    size = f.p ** len(sym_index_orbits(args.n, args.d))
    if size > args.samples and args.seed is None:
        raise InputError(f"the space has {size} tensors, so the sweep samples; pass --seed")
    rep = theorem_sweep(args.theorem, f, args.d, args.n, args.samples, args.seed or 0, args.budget,
                        progress=sys.stderr)
    if not rep.precondition_met:
        _say(f"precondition unmet: {rep.precondition_note}")
    else:
        _say(f"{rep.examined} examined, {rep.hypothesis_met} met the hypothesis, "
             f"{len(rep.violations)} violations")
    return rep.to_json()


def _float_input(args, what: str) -> Tensor:
    t = load_tensor(args.input)
    _require(t, t.field.is_float, what)
    if not isinstance(t, SymTensor):
        raise InputError(f"{what} needs a symmetric tensor")
    return t


def cmd_approx(args) -> dict:
    if args.seed is None:
        raise InputError("approx is randomized; pass --seed")
    t = _float_input(args, "approx")
    fit = best_sym_rank1(t, args.restarts, args.tol or 1e-12, args.seed)
    out = {"fit": fit.to_json(verbose=args.verbose)}
    msg = f"sigma={fit.to_json()['sigma']}, residual={fit.residual:.3g}"
    if t.order >= 3 and not args.no_banach:
        rep = banach_symmetry_check(t, args.restarts, seed=args.seed)
        out["banach"] = rep.to_json()
        msg += f", unconstrained residual={rep.unconstrained_residual:.3g}"
    _say(msg)
    return out


def cmd_border(args) -> dict:
    t = _float_input(args, "border")
    form = detect_border_rank2(t, args.tol or 1e-10)
    if form is None:
        _say("no border-rank-2 normal form")
        return {"form": None}
    out: dict[str, Any] = {"form": form.to_json()}
    if args.eps:
        curve = eps_curve(form)
        rows = []
        for eps in args.eps:
            dec = eval_eps(curve, eps)
            err = float((dec.reconstruct().astype(t.field) - t).norm())
            rows.append({"eps": eps, "error": err, "predicted": curve.predicted_error(eps),
                         "bound": curve.error_bound(eps), "decomposition": dec.to_json()})
        out["curve"] = rows
    _say(f"border form found, residual {form.residual:.3g}")
    return out


def cmd_generate(args) -> dict:
    f = Field.parse(args.field) if args.field else None
    t = instances.generate(args.name, f, args.d, args.n, args.seed, args.a)
    _say(f"{args.name}: order {t.order}, dim {t.dim}, field {t.field}")
    return t.to_json()


def _parse_scalar(text: str):
    try:
        return complex(text) if "j" in text else float(text)
    except ValueError:
        return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symrank", description="Tensor rank, symmetric rank and border rank tools.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write JSON here instead of stdout")
        return sp

    sp = add("analyze", cmd_analyze, "rank A, rank, srank and related certificates")
    sp.add_argument("input", help="tensor JSON file, or - for stdin")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--certify", metavar="FILE", help="decomposition JSON to run Kruskal's test on")

    sp = add("decompose", cmd_decompose, "symmetric decomposition of a binary cubic")
    sp.add_argument("input")

    for name, func, text in (("census", cmd_census, "(rank, srank) histogram of a whole space"),
                             ("sweep", cmd_sweep, "check a theorem over a space")):
        sp = add(name, func, text)
        if name == "sweep":
            sp.add_argument("theorem")
            sp.add_argument("--samples", type=int, default=10_000)
            sp.add_argument("--seed", type=int)
        sp.add_argument("--field")
        sp.add_argument("--d", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sp = add("approx", cmd_approx, "best symmetric rank-one approximation")
    sp.add_argument("input")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--restarts", type=int, default=16)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--no-banach", action="store_true", help="skip the unconstrained comparison")
    sp.add_argument("--verbose", action="store_true", help="include per-start trajectories")

    sp = add("border", cmd_border, "border-rank-2 normal form and approximating curve")
    sp.add_argument("input")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--eps", type=float, nargs="*")

    sp = add("generate", cmd_generate, "emit a named instance")
    sp.add_argument("name", choices=instances.NAMED)
    sp.add_argument("--field")
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--a", type=_parse_scalar, default=0, help="parameter of pencil-example")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except SymrankError as exc:
        _say(f"error: {exc}")
        return exc.exit_code
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
