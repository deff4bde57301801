"""Command-line front end.

    freyhyper construct --r 5 --sign minus -a 1 -b -1 -c 0 -p 7
    freyhyper disc --r 5 --sign minus -a 1 -b -1 -c 0 -p 7
    freyhyper localred report --sign plus -a 5 -b 3 -c 2 -p 7
    freyhyper selmer --support 2
    freyhyper traces --sign minus -a 1 -b -1 -c 0 -p 7 --primes 3 11
    freyhyper obstructions --case II
    freyhyper eliminate --case I --aux 3 7 11
    freyhyper paper-check

Exit codes: 0 success, 1 negative result (a published identity failed, or some
form is not bounded by the elimination), 2 usage error, 3 computation error.
Every command accepts --json and --config FILE (a JSON object whose keys are
flag names).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from importlib import metadata

from sympy import factorint

from . import elimination as elim
from .frey import FreyTriple, frey_curve_discriminant, frey_discriminant, frey_model
from .frobenius import BadReductionError, trace_at_prime
from .localred import classify_case, global_conductor, local_report_table, serre_level
from .numfield import Q2, Q5, factor_rational_prime, parse_element, prime_from_label
from .obstructions import ray_class_order, reducibility_contradictions
from .selmer import display_representative, selmer_group, squarefree_normal_form

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_COMPUTATION = 0, 1, 2, 3


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__
        return __version__


def run_manifest(command: str, params: dict, inputs: dict) -> dict:
    """RunManifest: enough to reproduce the output, plus when it was made."""
    return {
        "command": command,
        "parameters": params,
        "input_hashes": inputs,
        "tool_version": tool_version(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def format_factored(n: int) -> str:
    if n == 0:
        return "0"
    parts = [f"{q}^{e}" if e > 1 else str(q) for q, e in sorted(factorint(abs(n)).items())]
    s = " * ".join(parts) or "1"
    return ("-" if n < 0 else "") + s


# ---------------------------------------------------------------------------
# commands; each returns (result dict, human lines, exit code)

def _triple(args) -> FreyTriple:
    return FreyTriple(args.a, args.b, args.c, args.p, args.r)


def cmd_construct(args, inputs):
    t = _triple(args)
    cur = frey_model(t, args.sign)
    text = cur.model.to_text()
    res = {"model": text, "genus": cur.genus, "is_solution": t.is_solution}
    lines = [f"C{'+' if args.sign == 'plus' else '-'}: {text}",
             f"genus {cur.genus}; a^p + b^p = c^r: {t.is_solution}"]
    return res, lines, EXIT_OK


def cmd_disc(args, inputs):
    t = _triple(args)
    d = frey_discriminant(t, args.sign)
    dE = frey_curve_discriminant(t, args.sign)
    res = {"delta_poly": str(d), "delta_poly_factored": format_factored(d),
           "delta_model": str(dE), "delta_model_factored": format_factored(dE)}
    lines = [f"Delta(P) = {format_factored(d)}", f"Delta_E = {format_factored(dE)}"]
    return res, lines, EXIT_OK


def cmd_localred(args, inputs):
    t = _triple(args)
    reports = local_report_table(t, args.sign)
    res = {"reports": [r.as_dict() for r in reports]}
    lines = ["prime\ttype\texponent\twitness"] + [r.summary() for r in reports]
    for r in reports:
        for n in r.notes:
            lines.append(f"  {r.prime.label}: {n}")
    try:
        case = classify_case(t)
    except ValueError:
        case = None
    if case is not None and (case == "I") == (args.sign == "plus"):
        try:
            N = global_conductor(case, t)
            lev = serre_level(case, t)
            res["case"] = case
            res["conductor"] = N
            res["serre_level"] = lev.exponents
            lines.append(f"case {case}: conductor "
                         + " * ".join(f"{k}^{e}" if e > 1 else k for k, e in sorted(N.items())))
            lines.append(f"Serre level {lev}")
        except (ValueError, ArithmeticError) as exc:
            res["conductor_error"] = str(exc)
            lines.append(f"conductor not determined: {exc}")
    return res, lines, EXIT_OK


def _support(items) -> list:
    S = []
    for it in items:
        s = str(it)
        if "." in s:
            S.append(prime_from_label(s))
        else:
            S.extend(factor_rational_prime(int(s)))
    return S


def cmd_selmer(args, inputs):
    S = _support(args.support)
    sel = selmer_group(S)
    reps = [display_representative(d) for d in sel]
    res = {"support": [P.label for P in sel.support], "rank": sel.rank, "representatives": reps}
    lines = [f"K(S, 2) for S = {{{', '.join(res['support'])}}}: {len(reps)} classes"] + reps
    return res, lines, EXIT_OK


def cmd_traces(args, inputs):
    t = _triple(args)
    cur = frey_model(t, args.sign)
    res, lines = {"traces": {}}, []
    for q in args.primes:
        for P in factor_rational_prime(q):
            try:
                tr = trace_at_prime(cur, P)
            except BadReductionError as exc:
                res["traces"][P.label] = None
                lines.append(f"{P.label}\tbad reduction ({exc})")
                continue
            res["traces"][P.label] = [str(tr.a), str(tr.a_conj)]
            lines.append(f"{P.label}\t{tr}")
    return res, lines, EXIT_OK


def _modulus(text: str) -> dict:
    """'5.1^3*4.1' -> {Q5: 3, Q2: 1}; '1' -> {}."""
    out = {}
    if text.strip() in ("", "1"):
        return out
    for part in text.split("*"):
        lab, _, e = part.strip().partition("^")
        out[prime_from_label(lab)] = int(e or 1)
    return out


def cmd_obstructions(args, inputs):
    rep = reducibility_contradictions(args.case)
    res = {"case": args.case, "forced_primes": sorted(rep.forced_primes), "bound": rep.bound,
           "items": [{"name": i.name, "value": str(i.value), "detail": i.detail} for i in rep.items]}
    lines = rep.lines()
    res["ray_class"] = []
    for m in args.ray or []:
        arch = tuple(int(i) for i in args.arch) if args.arch is not None else (1, 2)
        datum = ray_class_order(_modulus(m), arch)
        res["ray_class"].append({"modulus": m, "arch": list(arch), "order": datum.order,
                                 "structure": list(datum.structure),
                                 "tested": datum.in_tested_range})
        lines.append(str(datum))
    return res, lines, EXIT_OK


def _case_levels(case: str) -> list[dict]:
    if case == "I":
        return [{}, {Q5.label: 1}]
    return [{**({Q2.label: s} if s else {}), **({Q5.label: t} if t else {})}
            for s in (0, 1) for t in range(4)]


def cmd_eliminate(args, inputs):
    source = args.endpoint or args.source
    spaces = [elim.ingest_space(source, lev) for lev in _case_levels(args.case)]
    for s in spaces:
        inputs[f"space {elim.level_str(s.level)}"] = s.source_hash
    forms = [g for s in spaces for g in s.forms]
    if args.forms:
        text = elim.read_source(args.forms)
        inputs[str(args.forms)] = hashlib.sha256(text.encode()).hexdigest()
        forms += elim.load_records(args.forms)
    chis = None
    if args.chi0:
        chis = [squarefree_normal_form(parse_element(c)) for c in args.chi0]
    rep = elim.eliminate(args.case, args.aux, forms, spaces, chis)
    lines = rep.lines()
    if not rep.results and not rep.vacuous:
        lines.append("  no newform data for the relevant levels: nothing eliminated")
    code = EXIT_OK if rep.survivors is not None else EXIT_NEGATIVE
    return rep.as_dict(), lines, code


def cmd_paper_check(args, inputs):
    from .paperchecks import run_all
    ok, results = run_all()
    res = {"ok": ok, "checks": [{"name": n, "ok": o, "detail": d} for n, o, d in results]}
    lines = [f"{'PASS' if o else 'FAIL'}  {n}" + (f"  ({d})" if d else "") for n, o, d in results]
    lines.append(f"{sum(o for _, o, _ in results)}/{len(results)} checks pass")
    return res, lines, EXIT_OK if ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser

def _add_triple(p: argparse.ArgumentParser, sign_required=True):
    p.add_argument("--r", type=int, default=5, choices=(3, 5, 7, 11))
    p.add_argument("--sign", choices=("minus", "plus"), required=sign_required)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("-c", type=int, required=True)
    p.add_argument("-p", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="JSON file with default flag values")

    ap = argparse.ArgumentParser(prog="freyhyper", parents=[common],
                                 description="Frey hyperelliptic curves over Q(sqrt 5).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="Frey curve model")
    _add_triple(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("disc", parents=[common], help="discriminants")
    _add_triple(p)
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("localred", parents=[common], help="local reduction data")
    p.add_argument("action", choices=("report",))
    _add_triple(p)
    p.set_defaults(func=cmd_localred)

    p = sub.add_parser("selmer", parents=[common], help="the group K(S, 2)")
    p.add_argument("--support", nargs="*", default=[],
                   help="rational primes or prime labels such as 11.1")
    p.set_defaults(func=cmd_selmer)

    p = sub.add_parser("traces", parents=[common], help="Frobenius traces")
    _add_triple(p)
    p.add_argument("--primes", type=int, nargs="+", default=[3, 7, 11])
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("obstructions", parents=[common], help="reducibility obstructions")
    p.add_argument("--case", choices=("I", "II"), required=True)
    p.add_argument("--ray", nargs="*", help="ray class moduli such as 1, 5.1, 5.1^3*4.1")
    p.add_argument("--arch", nargs="*", help="infinite places (1 and/or 2); default both")
    p.set_defaults(func=cmd_obstructions)

    p = sub.add_parser("eliminate", parents=[common], help="eliminate exponents p")
    p.add_argument("--case", choices=("I", "II"), required=True)
    p.add_argument("--aux", type=int, nargs="+", default=[3, 7, 11])
    p.add_argument("--source", default="bundled", help="JSON-lines file, URL or 'bundled'")
    p.add_argument("--endpoint", help="URL template with {level}; responses are cached")
    p.add_argument("--forms", help="extra newform records compared whatever their level")
    p.add_argument("--chi0", nargs="*", help="twists to try in case II (default: all of K({q2},2))")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("paper-check", parents=[common], help="replay the published identities")
    p.set_defaults(func=cmd_paper_check)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        ap.error(f"cannot read config {known.config}: {exc}")
    if not isinstance(cfg, dict):
        ap.error("config must be a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    for action in ap._subparsers._group_actions:
        for subp in action.choices.values():
            for a in subp._actions:
                if a.dest in cfg:
                    a.default = cfg[a.dest]
                    a.required = False


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json", "config")}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    _apply_config(ap, argv)
    args = ap.parse_args(argv)          # exits with status 2 on usage errors
    inputs: dict = {}
    try:
        res, lines, code = args.func(args, inputs)
    except (ValueError, ArithmeticError, OSError) as exc:
        kind = type(exc).__name__
        if args.json:
            print(json.dumps({"error": {"kind": kind, "message": str(exc)}}))
        else:
            print(f"error [{kind}]: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    if args.json:
        out = {"manifest": run_manifest(args.command, _params(args), inputs),
               "result": res, "lines": lines}
        print(json.dumps(out, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
