"""Command-line interface: JSON problem files in, JSON results out.

Subcommands: chi (critical-point count / Euler characteristic), vol
(normalized volume of the support polytope), integrate (pairing matrix over
twisted cycles), relations (symbolic and numeric linear relations), gkz
(configuration matrix, kernel lattice, Euler operators, resonance test).

Exit codes: 0 success, 2 numerical failure, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import critical, gkz, polytope, relations, twisted
from .laurent import (IntegrandSpec, LaurentPoly, ParseError, parse_poly,
                      poly_from_json)


class InputError(ValueError):
    """Problem-file validation failure (exit code 3)."""


class NumericalError(RuntimeError):
    """Numerical failure during a computation (exit code 2)."""


# -- problem file parsing ---------------------------------------------------

def parse_scalar(v, what="number"):
    """Accept int, float, "p/q" strings, and [re, im] pairs."""
    if isinstance(v, bool):
        raise InputError(f"{what}: booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{what}: bad rational {v!r}: {exc}") from None
    if isinstance(v, (list, tuple)) and len(v) == 2:
        re, im = (parse_scalar(u, what) for u in v)
        return complex(float(re), float(im))
    raise InputError(f"{what}: expected int, float, \"p/q\", or [re, im], "
                     f"got {v!r}")


def parse_polynomial(v, nvars=None):
    if isinstance(v, str):
        try:
            return parse_poly(v, nvars)
        except ParseError as exc:
            raise InputError(f"bad polynomial {v!r}: {exc}") from None
    if isinstance(v, dict):
        return poly_from_json(v)
    if isinstance(v, list):
        # term list: [[exp...], coeff] pairs
        terms = {}
        for item in v:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise InputError(f"bad term {item!r}: expected [[exp..], coeff]")
            exp, coeff = item
            key = tuple(int(e) for e in exp)
            terms[key] = parse_scalar(coeff, "coefficient")
        if not terms:
            raise InputError("empty term list")
        return LaurentPoly(len(next(iter(terms))), terms)
    raise InputError(f"bad polynomial entry {v!r}")


def load_problem(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("problem file must be a JSON object")
    return obj


def build_spec(obj: dict) -> IntegrandSpec:
    try:
        raw = obj["f"]
    except KeyError:
        raise InputError("problem file needs an \"f\" entry") from None
    if not isinstance(raw, list) or not raw:
        raise InputError("\"f\" must be a nonempty list of polynomials")
    # two passes: infer the common variable count, then pad shorter entries
    nvars = max(parse_polynomial(p).nvars for p in raw)
    polys = []
    for p in raw:
        q = parse_polynomial(p, nvars)
        if q.nvars != nvars:
            q = LaurentPoly(nvars, {tuple(e) + (0,) * (nvars - q.nvars): c
                                    for e, c in q.terms.items()})
        polys.append(q)
    s = [parse_scalar(v, "s") for v in obj.get("s", [Fraction(1, 2)] * len(polys))]
    nu = [parse_scalar(v, "nu") for v in obj.get("nu", [Fraction(1, 2)] * nvars)]
    try:
        return IntegrandSpec(polys, s, nu)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_cycles(obj: dict, spec: IntegrandSpec):
    cycles = []
    for item in obj.get("cycles", []):
        try:
            A = complex(parse_scalar(item["A"], "A"))
            B = complex(parse_scalar(item["B"], "B"))
            C = complex(parse_scalar(item["C"], "C"))
        except KeyError as exc:
            raise InputError(f"cycle missing vertex {exc}") from None
        phi = item.get("phi", "principal")
        if phi == "principal":
            phi = twisted.principal_branch_value(spec, A)
        else:
            phi = complex(parse_scalar(phi, "phi"))
        try:
            cycles.append(twisted.TwistedCycle(A, B, C, phi))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return cycles


def build_cocycles(obj: dict):
    out = []
    for item in obj.get("cocycles", []):
        try:
            out.append(twisted.Cocycle(tuple(item["a"]), int(item["b"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad cocycle {item!r}: {exc}") from None
    return out


def build_forms(obj: dict, spec: IntegrandSpec):
    forms = []
    for item in obj.get("forms", []):
        terms = []
        for t in item.get("terms", []):
            g = parse_polynomial(t["g"], spec.nvars)
            terms.append((int(t.get("k", 1)), g,
                          tuple(int(v) for v in t.get("a", (0,) * spec.npolys)),
                          tuple(int(v) for v in t.get("b", (0,) * spec.nvars))))
        if "function" in item:
            g = parse_polynomial(item["function"], spec.nvars)
            forms.append(relations.LogForm.from_function(
                g, tuple(int(v) for v in item.get("a", (0,) * spec.npolys)),
                tuple(int(v) for v in item.get("b", (0,) * spec.nvars))))
        else:
            forms.append(relations.LogForm(spec.nvars, terms))
    return forms


def build_operators(obj: dict, spec: IntegrandSpec):
    ops = []
    for item in obj.get("operators", []):
        try:
            p = [parse_polynomial(v, spec.nvars) for v in item["p"]]
            q = parse_polynomial(item["q"], spec.nvars)
        except KeyError as exc:
            raise InputError(f"operator missing field {exc}") from None
        ops.append(relations.AnnOperator(p, q))
    return ops


# -- serialization ----------------------------------------------------------

def jnum(z):
    """Complex number as [re, im]; real scalars stay scalars."""
    if isinstance(z, (int, Fraction)):
        return float(z) if isinstance(z, Fraction) else z
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def relation_to_json(r: relations.Relation):
    return [{"a": list(a), "b": list(b),
             "re": float(complex(c).real), "im": float(complex(c).imag)}
            for (a, b), c in r.terms]


def emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommands ------------------------------------------------------------

def cmd_chi(obj: dict, args) -> dict:
    spec = build_spec(obj)
    settings = critical.TrackerSettings(seed=args.seed)
    draws = int(obj.get("settings", {}).get("draws", 2))
    try:
        chi, count, certified = critical.euler_characteristic(
            spec, settings, draws=draws)
    except RuntimeError as exc:
        raise NumericalError(str(exc)) from None
    return {"chi": chi, "count": count, "certified": certified,
            "draws": draws, "seed": args.seed}


def cmd_vol(obj: dict, args) -> dict:
    spec = build_spec(obj)
    pts = polytope.cayley_support(spec)
    rep = polytope.normalized_volume(pts)
    return {"normalized_volume": rep.normalized_volume,
            "affine_dim": rep.affine_dim,
            "lattice_index_note": rep.lattice_index_note,
            "points": [list(p) for p in pts.points],
            "seed": args.seed}


def cmd_integrate(obj: dict, args) -> dict:
    spec = build_spec(obj)
    cycles = build_cycles(obj, spec)
    cocycles = build_cocycles(obj)
    if not cycles or not cocycles:
        raise InputError("integrate needs \"cycles\" and \"cocycles\"")
    N = args.nodes or int(obj.get("settings", {}).get("nodes",
                                                      twisted.DEFAULT_NODES))
    try:
        M = twisted.pairing_matrix(cycles, cocycles, N, spec)
    except (twisted.SegmentError, twisted.CycleClosureError,
            NotImplementedError) as exc:
        raise NumericalError(str(exc)) from None
    kernel = twisted.nullspace(M)
    return {"matrix": [[jnum(z) for z in row] for row in M.entries],
            "cocycles": [{"a": list(c.a), "b": c.b} for c in M.cocycles],
            "nodes": M.nodes,
            "closure_residuals": list(M.closure_residuals),
            "kernel": [{"vector": [jnum(z) for z in k.vector],
                        "rational": None if k.rational is None else
                        [[str(re), str(im)] for re, im in k.rational]}
                       for k in kernel],
            "seed": args.seed}


def cmd_relations(obj: dict, args) -> dict:
    spec = build_spec(obj)
    forms = build_forms(obj, spec)
    operators = build_operators(obj, spec)
    rels = []
    produced = []
    for phi in forms:
        r = relations.nabla_apply(phi, spec)
        produced.append(("form", r))
    for P in operators:
        try:
            r = relations.mellin_relation(P, spec)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        produced.append(("operator", r))
    agreement = []
    for i in range(len(produced)):
        for j in range(i + 1, len(produced)):
            agreement.append({
                "i": i, "j": j,
                "agree": relations.relations_agree(
                    produced[i][1], produced[j][1], tol=args.tol or 1e-9)})
    for source, r in produced:
        rels.append({"source": source, "terms": relation_to_json(r)})
    out = {"relations": rels, "agreement": agreement, "seed": args.seed}

    cycles = build_cycles(obj, spec)
    cocycles = build_cocycles(obj)
    N = args.nodes or int(obj.get("settings", {}).get("nodes",
                                                      twisted.DEFAULT_NODES))
    if cycles and cocycles:
        try:
            M = twisted.pairing_matrix(cycles, cocycles, N, spec)
            kernel = twisted.nullspace(M, rel_tol=args.tol or 1e-6)
        except (twisted.SegmentError, twisted.CycleClosureError,
                NotImplementedError) as exc:
            raise NumericalError(str(exc)) from None
        out["kernel"] = [
            {"vector": [jnum(z) for z in kv.vector],
             "rational": None if kv.rational is None else
             [[str(re), str(im)] for re, im in kv.rational]}
            for kv in kernel]
    if cycles and produced and spec.nvars == 1:
        residuals = []
        for source, r in produced:
            per_cycle = []
            for cyc in cycles:
                try:
                    res = relations.verify_numeric(r, cyc, spec, N)
                except (twisted.SegmentError, twisted.CycleClosureError) as exc:
                    raise NumericalError(str(exc)) from None
                per_cycle.append(abs(res))
            residuals.append({"source": source, "residuals": per_cycle})
        out["residuals"] = residuals
    return out


def cmd_gkz(obj: dict, args) -> dict:
    spec = build_spec(obj)
    cfg = gkz.cayley_matrix(spec)
    kernel = gkz.lattice_kernel(cfg)
    ops = gkz.euler_operators(cfg)
    report = gkz.is_nonresonant(cfg, tol=args.tol or 1e-9)
    return {"matrix": [list(r) for r in cfg.matrix],
            "blocks": list(cfg.blocks),
            "kappa": [jnum(v) for v in cfg.kappa],
            "kernel_basis": [list(v) for v in kernel.vectors],
            "kernel_disclaimer": kernel.disclaimer,
            "operators": ops,
            "nonresonant": report.nonresonant,
            "lattice_rank": report.lattice_rank,
            "certificates": [
                {"facet_normal": list(c.facet_normal),
                 "subgroup_generator": c.pairing_subgroup,
                 "kappa_pairing": jnum(c.kappa_pairing),
                 "resonant": c.resonant}
                for c in report.certificates],
            "rank_bound": gkz.rank_bound(cfg),
            "seed": args.seed}


COMMANDS = {"chi": cmd_chi, "vol": cmd_vol, "integrate": cmd_integrate,
            "relations": cmd_relations, "gkz": cmd_gkz}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="euler",
        description="Dimension counts and linear relations for generalized "
                    "Euler integrals")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("problem", help="problem JSON file, or - for stdin")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nodes", type=int, default=None,
                    help="quadrature nodes per segment")
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--out", default=None, help="write JSON here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        obj = load_problem(args.problem)
        payload = COMMANDS[args.command](obj, args)
    except InputError as exc:
        emit({"error": {"type": "invalid-input", "message": str(exc)}},
             args.out)
        return 3
    except (NumericalError, NotImplementedError) as exc:
        emit({"error": {"type": "numerical-failure", "message": str(exc)}},
             args.out)
        return 2
    emit(payload, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
