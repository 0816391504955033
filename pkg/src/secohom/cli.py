"""Command-line front end: ``secohom <command> <file> [options]``.

Exit codes:

    0  success / every checked property holds
    1  mathematical failure (identity fails, extension obstructed, ...)
    2  usage error (bad command line)
    3  parse error (syntax, unknown name)
    4  validation error (invalid algebra, morphism, bimodule, dimension mismatch)
    5  internal error
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .algebra import Triple
from .complex import (
    EXPENSIVE_DIM,
    Cochain,
    _regular,
    classical_hochschild,
    coboundary_matrix,
    cochain_dim,
    cohomology,
)
from .deformation import (
    DeformationError,
    InternalInconsistency,
    check_generalized_associativity,
    extend_one_order,
    gauge_equivalent_first_order,
    is_two_cocycle,
    obstruction,
)
from .field import parse_field
from .linalg import solve
from .problem import ParseError, Problem, ProblemValidationError, parse
from .report import Report, dumps
from .simplicial import SecondaryCyclicModule, verify_cyclic_module, verify_kg2

__all__ = ["COMMANDS", "EXIT_OK", "EXIT_FAIL", "EXIT_USAGE", "EXIT_PARSE", "EXIT_VALIDATION", "EXIT_INTERNAL", "run", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5

COMMANDS = (
    "validate",
    "cohomology",
    "hochschild",
    "deform-check",
    "deform-extend",
    "deform-obstruction",
    "deform-gauge",
    "simplicial-verify",
    "cyclic-verify",
)

DEFAULT_SEED = 20240601


class TaskError(ValueError):
    """A task refers to something missing or has bad parameters."""


def _pick(table: dict, kind: str, name: str | None):
    if name is not None:
        if name not in table:
            raise TaskError(f"unknown {kind} {name!r}")
        return table[name]
    if len(table) == 1:
        return next(iter(table.values()))
    raise TaskError(f"the task must say which {kind} to use (declared: {', '.join(sorted(table)) or 'none'})")


def _int(params: dict, key: str, default=None) -> int:
    v = params.get(key, default)
    if v is None:
        raise TaskError(f"missing parameter {key}=")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise TaskError(f"parameter {key}={v!r} is not an integer") from None


def cochain_entries(c: Cochain) -> dict:
    """Nonzero coefficients keyed by ``"(s; a1, ...; b1, ...)"`` with basis labels."""
    sp = c.space
    A, B = sp.triple.A, sp.triple.B
    m_labels = sp.M.labels
    f = sp.field
    out = {}
    for col, v in enumerate(c.coeffs):
        if v:
            s, ia, ib = sp.decode(col)
            key = f"({m_labels[s]}; {', '.join(A.labels[i] for i in ia)}; {', '.join(B.labels[j] for j in ib)})"
            out[key] = f.format(v)
    return out


def _fmt_vec(field, vec) -> list:
    return [field.format(x) for x in vec]


# -- commands ------------------------------------------------------------------------


def _validate(p: Problem, params: dict):
    names = [params["algebra"]] if "algebra" in params else sorted(p.algebras)
    algebras = {}
    for n in names:
        if n not in p.algebras:
            raise TaskError(f"unknown algebra {n!r}")
        rep = p.algebra_reports.get(n)
        algebras[n] = {
            "dim": p.algebras[n].dim,
            "commutative": p.algebras[n].commutative,
            "valid": True,
            "violations": [str(v) for v in rep.violations] if rep else [],
        }
    result = {
        "algebras": algebras,
        "morphisms": sorted(p.morphisms),
        "bimodules": sorted(p.bimodules),
        "triples": sorted(p.triples),
        "cochains": sorted(p.cochains),
        "families": sorted(p.families),
    }
    table = [(f"algebra {n}", f"dim {a['dim']}, valid") for n, a in algebras.items()]
    table.append(("objects", f"{len(p.morphisms)} morphisms, {len(p.triples)} triples, {len(p.cochains)} cochains"))
    return True, result, table


def _cohomology(p: Problem, params: dict):
    T = _pick(p.triples, "triple", params.get("triple"))
    M = _pick(p.bimodules, "bimodule", params["module"]) if "module" in params else None
    n = _int(params, "degree", 0)
    res = cohomology(T, M, n)
    Mr = M if M is not None else _regular(T.A)
    dims = {
        "C^{n-1}": cochain_dim(T, Mr, n - 1),
        "C^n": res.cochain_dim,
        "C^{n+1}": cochain_dim(T, Mr, n + 1),
    }
    result = {
        "triple": T.name,
        "degree": n,
        "dim": res.dim,
        "provenance": res.provenance(),
        "space_dims": dims,
        "expensive": dims["C^{n+1}"] > EXPENSIVE_DIM,
    }
    table = [
        ("triple", T.name),
        ("degree", n),
        ("dim H^n", res.dim),
        ("dim C^n", res.cochain_dim),
        ("rank delta_n", res.rank_out),
        ("rank delta_{n-1}", res.rank_in),
    ]
    return True, result, table


def _hochschild(p: Problem, params: dict):
    A = _pick(p.algebras, "algebra", params.get("algebra"))
    M = _pick(p.bimodules, "bimodule", params["module"]) if "module" in params else None
    n = _int(params, "degree", 0)
    direct = classical_hochschild(A, M, n)
    via = cohomology(Triple.classical(A), M, n)
    agree = direct.dim == via.dim
    result = {
        "algebra": A.name,
        "degree": n,
        "dim": direct.dim,
        "direct": direct.provenance(),
        "secondary_with_B_k": via.provenance(),
        "paths_agree": agree,
    }
    table = [("algebra", A.name), ("degree", n), ("dim HH^n", direct.dim), ("via B = k", via.dim), ("paths agree", agree)]
    return agree, result, table


def _witness(fam, w):
    order, (a, b, c), (al, be, ga) = w
    A, B = fam.triple.A, fam.triple.B
    return {
        "order": order,
        "a": [A.labels[a], A.labels[b], A.labels[c]],
        "b": [B.labels[al], B.labels[be], B.labels[ga]],
    }


def _deform_check(p: Problem, params: dict):
    name = params.get("family")
    fam = _pick(p.families, "family", name)
    k = _int(params, "order", fam.order + 1)
    rep = check_generalized_associativity(fam, k)
    f = fam.triple.field
    result = {"family": name or next(iter(p.families)), "order_checked": k, "associative": rep.passed}
    if fam.order >= 1:
        result["c1_is_cocycle"] = is_two_cocycle(fam.cochains[0])
    table = [("family", result["family"]), (f"associative mod t^{k}", rep.passed)]
    if not rep.passed:
        result["witness"] = _witness(fam, rep.witness)
        result["lhs"] = _fmt_vec(f, rep.lhs)
        result["rhs"] = _fmt_vec(f, rep.rhs)
        w = result["witness"]
        table.append(("first failure", f"t^{w['order']} at a={w['a']}, b={w['b']}"))
    if "c1_is_cocycle" in result:
        table.append(("c1 is a 2-cocycle", result["c1_is_cocycle"]))
    return rep.passed, result, table


def _deform_obstruction(p: Problem, params: dict):
    fam = _pick(p.families, "family", params.get("family"))
    n = _int(params, "order", fam.order)
    omega = obstruction(fam, n)
    d2 = coboundary_matrix(fam.triple, fam.space.M, 2)
    zero_class = solve(d2, omega.coeffs) is not None
    result = {"order": n, "omega": cochain_entries(omega), "omega_is_zero": omega.is_zero(), "class_vanishes": zero_class}
    table = [("order n", n), ("omega nonzeros", len(result["omega"])), ("class in H^3 vanishes", zero_class)]
    return zero_class, result, table


def _deform_extend(p: Problem, params: dict):
    fam = _pick(p.families, "family", params.get("family"))
    res = extend_one_order(fam)
    result = {
        "order": fam.order,
        "extended": res.extended,
        "obstruction": cochain_entries(res.obstruction),
    }
    table = [("current order", fam.order), ("extends", res.extended)]
    if res.extended:
        result["next_cochain"] = cochain_entries(res.next_cochain)
        table.append((f"c{fam.order + 1} nonzeros", len(result["next_cochain"])))
    else:
        result["certificate"] = "delta_2(x) = omega has no solution"
        table.append(("certificate", result["certificate"]))
    return res.extended, result, table


def _deform_gauge(p: Problem, params: dict):
    c1 = _pick(p.cochains, "cochain", params.get("c1"))
    d1 = _pick(p.cochains, "cochain", params.get("d1"))
    if c1.space != d1.space:
        raise TaskError("c1 and d1 live in different cochain spaces")
    g = gauge_equivalent_first_order(c1, d1)
    result = {"equivalent": g is not None}
    table = [("gauge equivalent", g is not None)]
    if g is not None:
        f = c1.space.field
        result["f1"] = [[f.format(v) for v in row] for row in g.matrix]
        table.append(("f1", "; ".join(" ".join(r) for r in result["f1"])))
    return g is not None, result, table


def _simplicial(p: Problem, params: dict, seed: int):
    G = _pick(p.groups, "group", params.get("group"))
    q = _int(params, "qmax", params.get("nmax", 4))
    rep = verify_kg2(G, q, seed=seed)
    return rep.passed, _identity_result(rep, {"group_order": G.order, "qmax": q, "seed": seed}), _identity_table(rep)


def _cyclic(p: Problem, params: dict):
    B = _pick(p.algebras, "algebra", params.get("algebra"))
    eps = p.morphisms.get(params["eps"]) if "eps" in params else None
    if "eps" in params and eps is None:
        raise TaskError(f"unknown morphism {params['eps']!r}")
    if eps is None:
        cands = [m for m in p.morphisms.values() if m.source is B and m.target.dim == 1]
        if len(cands) == 1:
            eps = cands[0]
        elif B.dim != 1:
            raise TaskError("cyclic-verify needs eps=NAME, a morphism from the algebra to a 1-dimensional algebra")
    n = _int(params, "nmax", 3)
    if eps is None:
        rep = verify_cyclic_module(B, None, n)
    else:
        rep = verify_cyclic_module(B, eps, n, module=SecondaryCyclicModule(B, eps))
    return rep.passed, _identity_result(rep, {"algebra": B.name, "nmax": n}), _identity_table(rep)


def _identity_result(rep, extra: dict) -> dict:
    ff = rep.first_failure
    first = None
    if ff is not None:
        fam, level, idx = ff
        first = {"identity": fam, "level": level, "indices": [list(x) if isinstance(x, tuple) else x for x in idx]}
    out = dict(extra)
    out.update(
        {
            "passed": rep.passed,
            "checked": dict(sorted(rep.checked.items())),
            "failures": dict(sorted(rep.failures.items())),
            "first_failure": first,
            "sampled_levels": list(rep.sampled_levels),
        }
    )
    return out


def _identity_table(rep) -> list:
    rows = []
    for fam in sorted(rep.checked):
        bad = rep.failures.get(fam, 0)
        rows.append((fam, f"{rep.checked[fam] - bad}/{rep.checked[fam]} hold"))
    if rep.first_failure:
        fam, level, idx = rep.first_failure
        rows.append(("first failure", f"{fam} at level {level}, indices {idx}"))
    return rows


def run(problem: Problem, command: str, params: dict | None = None, *, seed: int = DEFAULT_SEED) -> Report:
    """Execute one command on a parsed problem and return its report.

    Parameters start from the file's ``task`` line for ``command``; ``params``
    overrides them.
    """
    params = {**_task_params(problem, command), **(params or {})}
    t0 = time.perf_counter()
    if command == "validate":
        ok, result, table = _validate(problem, params)
    elif command == "cohomology":
        ok, result, table = _cohomology(problem, params)
    elif command == "hochschild":
        ok, result, table = _hochschild(problem, params)
    elif command == "deform-check":
        ok, result, table = _deform_check(problem, params)
    elif command == "deform-extend":
        ok, result, table = _deform_extend(problem, params)
    elif command == "deform-obstruction":
        ok, result, table = _deform_obstruction(problem, params)
    elif command == "deform-gauge":
        ok, result, table = _deform_gauge(problem, params)
    elif command == "simplicial-verify":
        ok, result, table = _simplicial(problem, params, seed)
    elif command == "cyclic-verify":
        ok, result, table = _cyclic(problem, params)
    else:
        raise TaskError(f"unknown command {command!r}")
    return Report(
        command=command,
        file=problem.source,
        params=dict(sorted(params.items())),
        field=problem.field.spec,
        verdict="pass" if ok else "fail",
        exit_code=EXIT_OK if ok else EXIT_FAIL,
        result=result,
        seconds=time.perf_counter() - t0,
        table=table,
    )


def _task_params(problem: Problem, command: str) -> dict:
    for t in problem.tasks:
        if t.command == command:
            return dict(t.params)
    return {}


def _error_report(command: str, file: str, field: str, code: int, kind: str, message: str, line=None) -> Report:
    err = {"kind": kind, "message": message}
    if line is not None:
        err["line"] = line
    return Report(command, file, {}, field, "fail", code, {"error": err}, table=[("error", message)])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="secohom", description="Secondary Hochschild cohomology toolkit.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="problem file")
    ap.add_argument("--degree", type=int)
    ap.add_argument("--order", type=int)
    ap.add_argument("--nmax", type=int)
    ap.add_argument("--field", help="rationals or fp:P (overrides the file)")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--out", help="write the JSON report here")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    field_spec = args.field or "rationals"
    report: Report
    try:
        field = parse_field(args.field) if args.field else None
    except ValueError as exc:
        print(f"secohom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        problem = parse(args.file, field=field)
        field_spec = problem.field.spec
        params = {}
        for key in ("degree", "order", "nmax"):
            v = getattr(args, key)
            if v is not None:
                params[key] = str(v)
        if args.command == "simplicial-verify" and args.nmax is not None:
            params["qmax"] = str(args.nmax)
        report = run(problem, args.command, params, seed=args.seed)
    except OSError as exc:
        print(f"secohom: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        report = _error_report(args.command, args.file, field_spec, EXIT_PARSE, "parse", exc.message, exc.line)
    except ProblemValidationError as exc:
        msg = exc.message
        report = _error_report(args.command, args.file, field_spec, EXIT_VALIDATION, "validation", msg, exc.line)
        if exc.report is not None:
            report.result["error"]["violations"] = [str(v) for v in exc.report.violations]
    except TaskError as exc:
        report = _error_report(args.command, args.file, field_spec, EXIT_VALIDATION, "task", str(exc))
    except InternalInconsistency as exc:
        report = _error_report(args.command, args.file, field_spec, EXIT_INTERNAL, "internal", str(exc))
    except DeformationError as exc:
        report = _error_report(args.command, args.file, field_spec, EXIT_FAIL, "mathematical", str(exc))
    except Exception as exc:  # surfaced with context rather than a traceback
        report = _error_report(
            args.command, args.file, field_spec, EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}"
        )
    if report.result.get("error"):
        err = report.result["error"]
        where = f"{args.file}:{err['line']}: " if err.get("line") else f"{args.file}: "
        print(f"secohom: {where}{err['message']}", file=sys.stderr)
    sys.stdout.write(report.human())
    if args.out:
        Path(args.out).write_text(dumps(report))
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
