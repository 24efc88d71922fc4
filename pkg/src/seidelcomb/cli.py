"""Command-line interface.

Vectors are given in simple-coroot coordinates as comma-separated rationals
(``--q=1,-1/2``); the token ``-a`` stands for the perturbation point chosen
for the query.  Weyl elements are words in 1-based simple reflections
(``--w=2,1`` is s₂s₁; ``--w=e`` is the identity).  Exit status: 0 on success,
2 when the input is outside an operation's domain, 1 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from itertools import product
from typing import Any, Optional, Sequence

from . import affine, orbit as orb, peterson as pet, qchev
from . import linalg as la
from .errors import DomainError, SeidelCombError, SpecError
from .rootdata import (
    RootDatum,
    build_root_datum,
    fmt_vec,
    lattice_quotient,
    rho,
    weyl_group,
)


class UsageError(SeidelCombError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        raise UsageError(message)


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _vec_out(v: Sequence) -> list[str]:
    return [_frac(x) for x in v]


def parse_vector(text: str, rank: int) -> Optional[tuple[Fraction, ...]]:
    """Parse "1,-1/2"; returns None for the reserved token "-a"."""
    text = text.strip()
    if text == "-a":
        return None
    try:
        v = tuple(Fraction(p.strip()) for p in text.split(",") if p.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from None
    if len(v) != rank:
        raise UsageError(f"vector {text!r} has {len(v)} coordinates, expected {rank}")
    return v


def parse_word(text: Optional[str], rank: int) -> tuple[int, ...]:
    if text is None or text.strip() in ("", "e", "id"):
        return ()
    try:
        word = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"bad word {text!r}") from None
    if any(not 1 <= i <= rank for i in word):
        raise UsageError(f"word {text!r} uses an index outside 1..{rank}")
    return word


def parse_index_set(text: Optional[str], rank: int) -> frozenset[int]:
    word = parse_word(text, rank)
    return frozenset(word)


def _lattice_vector(R: RootDatum, text: str, name: str) -> tuple[Fraction, ...]:
    v = parse_vector(text, R.rank)
    if v is None:
        raise UsageError(f"-a is not allowed for {name}")
    if v not in R.unit_lattice:
        raise DomainError(f"{name} = {fmt_vec(v)} is not in the unit lattice")
    return v


def _perturbation(R: RootDatum, args, queries: Sequence) -> affine.PerturbationPoint:
    start = None
    if getattr(args, "avalues", None):
        vals = parse_vector(args.avalues, R.rank)
        if vals is None:
            raise UsageError("--avalues needs explicit values")
        start = affine.perturbation_from_values(R, vals)
    qs = [q for q in queries if q is not None and all(r(q).denominator == 1 for r in R.positive_roots)]
    return affine.perturbation_for(R, qs, start)


# -- subcommands --------------------------------------------------------------------
# Each returns (payload, rows): payload is the JSON body, rows feed csv output.


def cmd_rootinfo(R: RootDatum, args) -> tuple[dict, list[dict]]:
    W = weyl_group(R)
    free, tors = lattice_quotient(R.unit_lattice, R.coroot_lattice)
    roots = [{"coeffs": list(r.coeffs), "pairing": list(r.pairing), "length2": _frac(R.root_length2(r))}
             for r in R.positive_roots]
    payload = {
        "rank": R.rank,
        "cartan": [list(row) for row in R.cartan_matrix],
        "gram": [_vec_out(row) for row in R.gram],
        "positive_roots": roots,
        "highest_roots": [list(r.coeffs) for r in R.highest_roots],
        "rho": _vec_out(rho(R)),
        "unit_lattice_basis": [_vec_out(b) for b in R.unit_lattice_basis],
        "weyl_order": len(W),
        "pi1": {"free": free, "torsion": tors},
    }
    return payload, roots


def cmd_walls(R: RootDatum, args) -> tuple[dict, list[dict]]:
    x = parse_vector(args.src, R.rank)
    y = parse_vector(args.dst, R.rank)
    if y is None:
        raise UsageError("--to=-a is not supported; reverse the segment")
    if x is None:
        a = _perturbation(R, args, [y])
        seq = affine.bs_wall_sequence(R, y, a)
        x = la.neg(a.a)
        nice = True
    else:
        a = _perturbation(R, args, [])
        seq = affine.crossing_times(R, x, y)
        nice = affine.is_nice(R, x, y).ok
    rows = [c.to_json() for c in seq]
    return {"a": _vec_out(a.a), "from": _vec_out(x), "to": _vec_out(y), "nice": nice,
            "crossings": rows}, rows


def cmd_deg(R: RootDatum, args) -> tuple[dict, list[dict]]:
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    row = {"q": _vec_out(q), "deg": affine.deg(R, q, a),
           "floor_formula": affine.deg_by_floor(R, q, a),
           "closed_form": affine.deg_closed_form(R, q, a)}
    return {"a": _vec_out(a.a), **row}, [row]


def cmd_wq(R: RootDatum, args) -> tuple[dict, list[dict]]:
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    w = pet.w_q(R, q, a)
    row = {"q": _vec_out(q), "w": list(w.word), "length": w.length}
    return {"a": _vec_out(a.a), **row}, [row]


def cmd_ellprime(R: RootDatum, args) -> tuple[dict, list[dict]]:
    a = _perturbation(R, args, [])
    elems = [R.element(parse_word(args.w, R.rank))] if args.w is not None else weyl_group(R)
    rows = []
    for w in elems:
        lp = pet.ell_prime(R, w, a)
        rows.append({"w": list(w.word), "length": w.length, "ell_prime": _frac(lp),
                     "closed_form": _frac(pet.ell_prime_closed_form(R, w, a))})
    return {"a": _vec_out(a.a), "elements": rows}, rows


def _orbit(R: RootDatum, args) -> orb.OrbitSpec:
    return orb.orbit_data(R, parse_index_set(args.I, R.rank), Fraction(args.c))


def cmd_deglt(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    d = pet.deg_lt(O, q, a)
    row = {"q": _vec_out(q), "deg_lt": d, "fiber_walls": pet.deg_lt_by_walls(O, q, a),
           "peterson": d == 0}
    return {"a": _vec_out(a.a), "I": sorted(O.I), **row}, [row]


def _coset(R: RootDatum, O: orb.OrbitSpec, args) -> orb.NovikovCoset:
    w = R.element(parse_word(args.y, R.rank))
    q = _lattice_vector(R, args.q, "q")
    return orb.NovikovCoset(O, O.point(w), q)


def cmd_lift(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    nov = _coset(R, O, args)
    a = _perturbation(R, args, [])
    qt = pet.peterson_lift(O, nov)
    row = {"coset": nov.to_json(), "lift": _vec_out(qt),
           "fiber_degree": pet.fiber_degree(O, nov.base, qt)}
    return {"a": _vec_out(a.a), "I": sorted(O.I), **row}, [{"lift": row["lift"]}]


def cmd_assoclift(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    nov = _coset(R, O, args)
    a = _perturbation(R, args, [])
    qt = pet.peterson_lift(O, nov)
    x = pet.associated_lift(O, nov, a, qt)
    u = next(w for w in weyl_group(R) if w.act(O.x0) == x)
    row = {"coset": nov.to_json(), "lift": _vec_out(qt), "x": _vec_out(x), "w": list(u.word)}
    return {"a": _vec_out(a.a), "I": sorted(O.I), **row}, [{"x": row["x"], "w": row["w"]}]


def cmd_hofer(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    h = pet.hofer_constant(O, q, a)
    best, _ = pet.hofer_brute_force(O, q)
    row = {"q": _vec_out(q), "hofer": _frac(h), "brute_force_max": _frac(best),
           "coupling": _frac(orb.coupling_value(O, q, a))}
    return {"a": _vec_out(a.a), "I": sorted(O.I), **row}, [row]


def cmd_seidel(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    if args.basis == "prime":
        terms = pet.seidel_basis_value(O, q, a, pet.BasisKind.PRIME)
        body = {"basis": "prime", "terms": [t.to_json() for t in terms]}
        rows = [{"coset": t["coset"], "rep": t["nov"]["rep"]} for t in body["terms"]]
    else:
        res = pet.seidel_leading(O, q, a)
        body = {"basis": "bs", "status": res.status.value, "deg_lt": res.deg_lt,
                "term": res.term.to_json() if res.term else None,
                "ell_prime_bound": _frac(res.ell_prime_bound) if res.ell_prime_bound is not None else None}
        rows = [{"status": body["status"], "deg_lt": res.deg_lt}]
    return {"a": _vec_out(a.a), "I": sorted(O.I), "q": _vec_out(q), **body}, rows


def cmd_pmul(R: RootDatum, args) -> tuple[dict, list[dict]]:
    q0 = _lattice_vector(R, args.q0, "q0")
    q1 = _lattice_vector(R, args.q1, "q1")
    a = _perturbation(R, args, [q0, q1])
    p = pet.pontryagin_index(R, q0, q1, a)
    a = _perturbation(R, args, [q0, q1, p])
    p = pet.pontryagin_index(R, q0, q1, a)
    row = {"q0": _vec_out(q0), "q1": _vec_out(q1), "product": _vec_out(p),
           "deg": affine.deg(R, p, a), "deg_sum": affine.deg(R, q0, a) + affine.deg(R, q1, a)}
    return {"a": _vec_out(a.a), **row}, [row]


def cmd_imagebasis(R: RootDatum, args) -> tuple[dict, list[dict]]:
    w = R.element(parse_word(args.w, R.rank))
    q = _lattice_vector(R, args.q, "q")
    a = _perturbation(R, args, [q])
    row = {"w": list(w.word), "q": _vec_out(q), "member": pet.image_basis_member(R, w, q, a)}
    return {"a": _vec_out(a.a), **row}, [row]


def cmd_qmul(R: RootDatum, args) -> tuple[dict, list[dict]]:
    I = parse_index_set(args.I, R.rank)
    a = _perturbation(R, args, [])
    if args.seq is not None:
        seq = parse_word(args.seq, R.rank)
        x = qchev.divisor_product(R, I, seq)
        head = {"seq": list(seq)}
    else:
        if args.i is None:
            raise UsageError("qmul needs --i (with --w) or --seq")
        w = R.element(parse_word(args.w, R.rank))
        x = qchev.quantum_chevalley(R, I, args.i, w)
        head = {"i": args.i, "w": list(w.word)}
    terms = x.to_json()
    return {"a": _vec_out(a.a), "I": sorted(I), **head, "terms": terms}, terms


def cmd_pwcheck(R: RootDatum, args) -> tuple[list[dict], list[dict]]:
    O = _orbit(R, args)
    a = _perturbation(R, args, [])
    rows = qchev.verify_pw(O, args.k, args.maxdeg, a)
    for r in rows:
        r["a"] = _vec_out(a.a)
    return rows, rows




def cmd_sweep(R: RootDatum, args) -> tuple[dict, list[dict]]:
    O = _orbit(R, args)
    r = args.radius
    qs = [la.vec(c) for c in product(range(-r, r + 1), repeat=R.rank)]
    a = _perturbation(R, args, qs)
    rows = []
    for q in qs:
        d = affine.deg(R, q, a)
        rows.append({
            "q": _vec_out(q),
            "w_q": list(pet.w_q(R, q, a).word),
            "deg": d,
            "closed_form": affine.deg_closed_form(R, q, a),
            "deg_lt": pet.deg_lt(O, q, a),
            "hofer": _frac(pet.hofer_constant(O, q, a)),
        })
    ok = all(row["deg"] == row["closed_form"] for row in rows)
    return {"a": _vec_out(a.a), "I": sorted(O.I), "radius": r, "deg_identity": ok,
            "rows": rows}, rows


COMMANDS = {
    "rootinfo": cmd_rootinfo,
    "walls": cmd_walls,
    "deg": cmd_deg,
    "wq": cmd_wq,
    "ellprime": cmd_ellprime,
    "deglt": cmd_deglt,
    "lift": cmd_lift,
    "assoclift": cmd_assoclift,
    "hofer": cmd_hofer,
    "seidel": cmd_seidel,
    "pmul": cmd_pmul,
    "imagebasis": cmd_imagebasis,
    "qmul": cmd_qmul,
    "pwcheck": cmd_pwcheck,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("root", help="root system, e.g. A2, B3, A1xA2")
    common.add_argument("--lattice", choices=["sc", "ad"], default="sc")
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
    common.add_argument("--avalues", help="α_i(a) values to start the perturbation search from")

    orbit_opts = _Parser(add_help=False)
    orbit_opts.add_argument("--I", default="", help="parabolic index set, e.g. 2 or 1,3")
    orbit_opts.add_argument("--c", default="1", help="base point scale (y0 = c·ρ_I)")

    p = _Parser(prog="seidelcomb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("rootinfo", parents=[common], help="root system summary")
    s = sub.add_parser("walls", parents=[common], help="affine walls crossed by a segment")
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    for name, hlp in [("deg", "number of walls from -a to q"), ("wq", "chamber element of q + a")]:
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--q", required=True)
    s = sub.add_parser("ellprime", parents=[common], help="perturbed length")
    s.add_argument("--w")
    for name, hlp in [("deglt", "fiber degree of q"), ("hofer", "max-length constant C_q")]:
        s = sub.add_parser(name, parents=[common, orbit_opts], help=hlp)
        s.add_argument("--q", required=True)
    for name, hlp in [("lift", "Peterson lift of a Novikov coset"),
                      ("assoclift", "fiber critical point matching the lift")]:
        s = sub.add_parser(name, parents=[common, orbit_opts], help=hlp)
        s.add_argument("--q", required=True)
        s.add_argument("--y", default="e", help="coset representative word of the base point")
    s = sub.add_parser("seidel", parents=[common, orbit_opts], help="leading term of the Seidel element")
    s.add_argument("--q", required=True)
    s.add_argument("--basis", choices=["bs", "prime"], default="bs")
    s = sub.add_parser("pmul", parents=[common], help="index of a Pontryagin product")
    s.add_argument("--q0", required=True)
    s.add_argument("--q1", required=True)
    s = sub.add_parser("imagebasis", parents=[common], help="membership of (w, q) in the image basis")
    s.add_argument("--w", default="e")
    s.add_argument("--q", required=True)
    s = sub.add_parser("qmul", parents=[common], help="quantum Chevalley products")
    s.add_argument("--I", default="")
    s.add_argument("--i", type=int)
    s.add_argument("--w", default="e")
    s.add_argument("--seq")
    s = sub.add_parser("pwcheck", parents=[common, orbit_opts], help="comparison formula sweep (JSON lines)")
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--maxdeg", type=int, default=2)
    s = sub.add_parser("sweep", parents=[common, orbit_opts], help="per-q table over a coroot ball")
    s.add_argument("--radius", type=int, default=2)
    return p


def _flatten(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_flatten(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render(payload: Any, rows: list[dict], fmt: str, command: str) -> str:
    if fmt == "json":
        if command == "pwcheck":
            return "".join(json.dumps(r, sort_keys=True) + "\n" for r in payload)
        return json.dumps(payload, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            cols = list(rows[0].keys())
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                w.writerow([_flatten(r.get(c)) for c in cols])
        return buf.getvalue()
    lines = []
    items = payload if isinstance(payload, list) else [payload]
    for item in items:
        for k, v in item.items():
            lines.append(f"{k}: {_flatten(v)}")
        lines.append("")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        R = build_root_datum(args.root, args.lattice)
        payload, rows = COMMANDS[args.command](R, args)
        if isinstance(payload, dict):
            payload = {"root": R.name, "lattice": R.lattice_kind.value, **payload}
        out.write(render(payload, rows, args.format, args.command))
        return 0
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (UsageError, SpecError) as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except SeidelCombError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
