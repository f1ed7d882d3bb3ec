"""Command-line front end: ``cmvar <subcommand> [options]``.

Input documents are read from ``--in FILE`` or stdin; results are written
to stdout as JSON. Big integers are decimal strings, complex numbers
``[re, im]`` pairs. Exit codes: 0 ok, 2 bad input, 3 violated
precondition, 4 solver budget exhausted (partial result on stdout).
"""

from __future__ import annotations

import argparse
import enum
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import algebras, distances, lorentz, polygons, rigidity, varieties
from .errors import CmvarError, DomainError, InputError, SolverBudgetExceeded


class Status(str, enum.Enum):
    OK = "Ok"
    INPUT_ERROR = "InputError"
    DOMAIN_ERROR = "DomainError"
    SOLVER_INCOMPLETE = "SolverIncomplete"


EXIT_CODES = {
    Status.OK: 0,
    Status.INPUT_ERROR: 2,
    Status.DOMAIN_ERROR: 3,
    Status.SOLVER_INCOMPLETE: 4,
}


@dataclass
class CommandResult:
    status: Status
    payload: dict | None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


def _complex_json(M: np.ndarray):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return np.stack([M.real, M.imag], axis=-1).tolist()
    return M.tolist()


def _read_doc(args, stdin) -> dict:
    if args.infile:
        try:
            with open(args.infile) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.infile}: {exc}") from exc
    elif stdin is None:
        raise InputError("this subcommand needs a JSON document on stdin or via --in")
    else:
        text = stdin.read() if hasattr(stdin, "read") else str(stdin)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("expected a JSON object")
    return doc


def _matrix(doc: dict, key: str = "matrix") -> np.ndarray:
    if key not in doc:
        raise InputError(f"document needs a {key!r} entry")
    try:
        return np.array(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc


def _gram_input(doc: dict) -> np.ndarray:
    """Gram form from a matrix, a Cayley vector or a configuration document."""
    if "matrix" in doc:
        return _matrix(doc)
    if "s" in doc:
        return distances.gram_from_cayley(distances.CayleyVector.from_json(doc))
    if "points" in doc:
        return distances.gram_from_configuration(distances.Configuration.from_json(doc))
    raise InputError("expected a 'matrix', a Cayley vector or a configuration")


def _variety(args) -> varieties.VarietyId:
    return varieties.VarietyId(args.family, args.d, args.n)


# -- subcommand handlers: (args, stdin) -> (payload, diagnostics) --


def cmd_convert(args, stdin):
    doc = _read_doc(args, stdin)
    if "points" in doc:
        cfg = distances.Configuration.from_json(doc)
        s = distances.cayley_from_configuration(cfg)
        return {"cayley": s.to_json(), "gram": distances.gram_from_configuration(cfg).tolist()}, []
    if "s" in doc:
        s = distances.CayleyVector.from_json(doc)
        return {"gram": distances.gram_from_cayley(s).tolist()}, []
    if "matrix" in doc:
        s = distances.cayley_from_gram(_matrix(doc))
        diags = []
        if not s.is_nonnegative:
            diags.append("Gram form is indefinite: some squared distances are negative")
        if s.is_zero:
            diags.append("zero Gram form: all points coincide")
        return {"cayley": {"n": s.n, "s": s.to_dict()}}, diags
    raise InputError("expected a configuration, a Cayley vector or a 'matrix'")


def cmd_embed(args, stdin):
    s = distances.CayleyVector.from_json(_read_doc(args, stdin))
    cfg = distances.embed(s, args.d, args.tol)
    return cfg.to_json(), []


def cmd_rank(args, stdin):
    s = distances.CayleyVector.from_json(_read_doc(args, stdin))
    rep = distances.rank_det_check(s, args.tol, exact=args.exact)

    def num(x):
        return str(x) if args.exact else float(x)

    return {
        "rank_S": rep.rank_S,
        "rank_A": rep.rank_A,
        "det_S": num(rep.det_S),
        "det_A": num(rep.det_A),
        "identities_hold": True,
    }, []


def cmd_realizable(args, stdin):
    s = distances.CayleyVector.from_json(_read_doc(args, stdin))
    return distances.realizability(s, args.tol).to_json(), []


def cmd_variety(args, stdin):
    return varieties.invariants(_variety(args)).to_json(), []


def cmd_dual(args, stdin):
    return varieties.dual(_variety(args)).to_json(), []


def cmd_minors(args, stdin):
    system = varieties.defining_minors(_variety(args), args.source)
    payload = {
        "variety": system.variety.to_json(),
        "source": system.source.value,
        "size": system.size,
        "matrix_size": system.matrix_size,
        "count": len(system),
    }
    diags = []
    if args.list:
        if len(system) > args.max_list:
            diags.append(f"{len(system)} minors exceed --max-list {args.max_list}; list omitted")
        else:
            payload["minors"] = [[list(r), list(c)] for r, c in system]
    return payload, diags


def cmd_cone(args, stdin):
    A = _gram_input(_read_doc(args, stdin))
    return lorentz.cone_classify(A, args.tol).to_json(), []


def cmd_laman(args, stdin):
    doc = _read_doc(args, stdin)
    try:
        n = int(doc["n"])
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph document: {exc}") from exc
    return rigidity.is_laman(n, edges).to_json(), []


def cmd_bound(args, stdin):
    return {"n": args.n, "bound": str(rigidity.realization_bound(args.n))}, []


def cmd_realize(args, stdin):
    spec = rigidity.LinkageSpec.from_json(_read_doc(args, stdin))
    kwargs = dict(
        seed=args.seed,
        budget=args.budget,
        require_laman=not args.allow_non_laman,
        strict=True,
        jacobian_tol=args.tol,
    )
    if args.max_n is not None:
        kwargs["max_n"] = args.max_n
    result = rigidity.enumerate_realizations(spec, **kwargs)
    return result.to_json(), list(result.warnings)


def cmd_polygon(args, stdin):
    q = polygons.standardize(_floats(args.q))
    rep = polygons.wall_report(q, args.tol)
    payload = rep.to_json()
    admissible = polygons.is_admissible(q, args.tol)
    payload.update(
        q=q.tolist(),
        admissible=admissible,
        smooth=admissible and not rep.on_wall,
        dimension=polygons.polygon_space_dimension(len(q)),
    )
    return payload, []


def cmd_octic(args, stdin):
    if args.torus:
        vals = _floats(args.torus)
        if len(vals) != 4:
            raise InputError("--torus takes r,theta,phi1,phi2")
        r = vals[0]
        point = polygons.torus_point(*vals)
    else:
        if args.point is None or args.r is None:
            raise InputError("give --point a,b,c,d with --r, or --torus r,theta,phi1,phi2")
        point = tuple(_floats(args.point))
        if len(point) != 4:
            raise InputError("--point takes four coordinates")
        r = args.r
    value = polygons.octic_value(*point, r)
    scale = polygons.octic_scale(*point)
    return {
        "point": list(point),
        "r": r,
        "value": value,
        "on_torus": abs(value) <= args.tol * scale,
    }, []


def _quat(doc, key):
    if key not in doc:
        raise InputError(f"operation needs operand {key!r}")
    return algebras.Quaternion.from_json(doc[key])


def _oct(doc, key):
    if key not in doc:
        raise InputError(f"operation needs operand {key!r}")
    return algebras.Octonion.from_json(doc[key])


def cmd_algebra(args, stdin):
    doc = _read_doc(args, stdin)
    op = args.op
    if op == "quat-mul":
        x, y = _quat(doc, "x"), _quat(doc, "y")
        return {"product": (x * y).to_json(), "norm_product": (x * y).norm()}, []
    if op == "quat-block":
        return {"block": _complex_json(algebras.quat_to_complex_block(_quat(doc, "x")))}, []
    if op == "oct-mul":
        x, y = _oct(doc, "x"), _oct(doc, "y")
        return {"product": (x * y).to_json(), "norm_product": (x * y).norm()}, []
    if op == "associator":
        a = algebras.associator(_oct(doc, "x"), _oct(doc, "y"), _oct(doc, "z"))
        return {"associator": a.to_json(), "norm": a.norm()}, []
    if op == "det2":
        value = algebras.oct_herm_det2(float(doc["alpha"]), float(doc["beta"]), _oct(doc, "x"))
        return {"det": value}, []
    if op == "det3":
        A = algebras.oct_hermitian(
            float(doc["alpha"]), float(doc["beta"]), float(doc["gamma"]),
            _oct(doc, "x"), _oct(doc, "y"), _oct(doc, "z"),
        )
        return {"det": algebras.oct_herm_det3(A, args.tol)}, []
    if op == "sigma":
        A = _matrix(doc)
        M = algebras.sigma_map(A, args.tol)
        return {
            "skew": _complex_json(M),
            "quaternionic_rank": algebras.quaternionic_rank(A, args.tol),
            "complex_rank": algebras.pfaffian_rank(M, args.tol),
        }, []
    raise InputError(f"unknown algebra operation {op!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=distances.DEFAULT_TOL, help="numerical tolerance")
    common.add_argument("--in", dest="infile", help="read the input document from this file")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--json", action="store_true", help="JSON output (always on; kept for scripts)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")

    variety = _Parser(add_help=False)
    variety.add_argument("--family", required=True, choices=[f.value for f in varieties.Family])
    variety.add_argument("--d", type=int, required=True)
    variety.add_argument("--n", type=int, required=True)

    parser = _Parser(prog="cmvar", description="Cayley-Menger varieties, linkages and division-algebra tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, handler, help, parents=()):
        p = sub.add_parser(name, help=help, parents=[common, *parents])
        p.set_defaults(handler=handler)
        return p

    add("convert", cmd_convert, "convert between configurations, Cayley vectors and Gram forms")
    p = add("embed", cmd_embed, "recover coordinates from squared distances")
    p.add_argument("--d", type=int, required=True)
    p = add("rank", cmd_rank, "check the bordered-matrix rank and determinant identities")
    p.add_argument("--exact", action="store_true", help="rational arithmetic")
    add("realizable", cmd_realizable, "test whether squared distances come from real points")
    add("variety", cmd_variety, "invariants of a determinantal variety", [variety])
    add("dual", cmd_dual, "projective dual of a variety", [variety])
    p = add("minors", cmd_minors, "defining minors of a real variety", [variety])
    p.add_argument("--source", choices=[s.value for s in varieties.Source], default="gram")
    p.add_argument("--list", action="store_true", help="include the index sets")
    p.add_argument("--max-list", type=int, default=10000)
    add("cone", cmd_cone, "Lorentz cone region of a Gram form")
    add("laman", cmd_laman, "Laman test for a graph")
    p = add("bound", cmd_bound, "realization bound for a planar Laman linkage")
    p.add_argument("--n", type=int, required=True)
    p = add("realize", cmd_realize, "enumerate planar realizations of a linkage")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--allow-non-laman", action="store_true")
    p = add("polygon", cmd_polygon, "walls and admissibility of a polygon edge-length vector")
    p.add_argument("--q", required=True, help="comma-separated edge lengths")
    p = add("octic", cmd_octic, "evaluate the octic torus polynomial")
    p.add_argument("--point", help="a,b,c,d")
    p.add_argument("--r", type=float)
    p.add_argument("--torus", help="r,theta,phi1,phi2: evaluate at a torus point")
    p = add("algebra", cmd_algebra, "quaternion and octonion operations")
    p.add_argument(
        "op",
        choices=["quat-mul", "quat-block", "oct-mul", "associator", "det2", "det3", "sigma"],
    )
    return parser


def run(argv, stdin=None) -> CommandResult:
    """Parse ``argv``, dispatch, and capture the outcome without printing."""
    try:
        args = build_parser().parse_args(list(argv))
        payload, diags = args.handler(args, stdin)
        return CommandResult(Status.OK, payload, diags)
    except SolverBudgetExceeded as exc:
        partial = exc.partial.to_json() if exc.partial is not None else None
        diags = [str(exc)] + (list(exc.partial.warnings) if exc.partial is not None else [])
        return CommandResult(Status.SOLVER_INCOMPLETE, partial, diags)
    except InputError as exc:
        return CommandResult(Status.INPUT_ERROR, None, [str(exc)])
    except (KeyError, TypeError) as exc:
        return CommandResult(Status.INPUT_ERROR, None, [f"malformed input: {exc}"])
    except (DomainError, CmvarError) as exc:
        return CommandResult(Status.DOMAIN_ERROR, None, [f"{type(exc).__name__}: {exc}"])


def render(result: CommandResult, pretty: bool = False) -> str:
    if result.payload is None:
        return ""
    return json.dumps(result.payload, indent=2 if pretty else None, separators=None if pretty else (",", ":"))


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)
    stdin = None if sys.stdin is None or sys.stdin.isatty() else io.StringIO(sys.stdin.read())
    result = run(argv, stdin)
    text = render(result, pretty="--pretty" in argv)
    if text:
        print(text)
    for line in result.diagnostics:
        print(f"cmvar: {line}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
