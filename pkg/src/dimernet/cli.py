"""Command-line driver: ``dimernet <command> --input <file|bundled name> [flags]``."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .algebra.laurent import SPIN_ORDER, format_poly
from .algebra.scalar import DEFAULT_TOL, EXACT, FLOAT, format_scalar
from .dimer import char_poly, find_kasteleyn_marking, hamiltonians, kasteleyn_check, enumerate_covers
from .errors import DimerNetError, FloatBackendUnsupported
from .instances import BUNDLED, load_instance, random_weights
from .io import to_float_graph
from .measurement import DIRECT, RATIO, BoundaryMatrix, boundary_measurement_matrix, charpoly_boundary, cut_to_cylinder
from .network import (
    as_network,
    fractional_marking,
    turning_numbers,
    validate_network,
    validate_rim_cut,
    verify_marking,
)
from .torus import ToricGraph, compute_faces, face_vertices, validate_curves, validate_graph
from .verify import SCHEMA, compare_systems, prepared_network, verify_theorem1

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2


class Outcome:
    """Payload plus exit code, rendered as JSON or text by :func:`emit`."""

    def __init__(self, payload: dict, text: str, code: int = EXIT_OK):
        self.payload = payload
        self.text = text
        self.code = code


# -- commands ----------------------------------------------------------------


def cmd_validate(g: ToricGraph, args) -> Outcome:
    rep = validate_graph(g)
    if g.curves is not None:
        rep = rep.merge(validate_curves(g))
    if args.network:
        rep = rep.merge(validate_network(g))
        if g.curves is not None:
            rep = rep.merge(validate_rim_cut(g))
    lines = ["valid" if rep.ok else "invalid"]
    lines += [f"{code}: {msg}" for code, msg in rep.violations]
    return Outcome(rep.to_json(), "\n".join(lines), EXIT_OK if rep.ok else EXIT_INVALID)


def cmd_faces(g: ToricGraph, args) -> Outcome:
    faces = compute_faces(g)
    rows = [{"length": f.length, "walk": [[e, d] for e, d in f.walk], "vertices": face_vertices(g, f)} for f in faces]
    text = "\n".join(f"face {k}: length {r['length']}, vertices {' '.join(r['vertices'])}" for k, r in enumerate(rows))
    return Outcome({"faces": rows}, text)


def cmd_matchings(g: ToricGraph, args) -> Outcome:
    covers = enumerate_covers(g)
    table = hamiltonians(g, covers)
    lines = [f"{' '.join(c.edges)}  weight {format_scalar(c.weight)}  class {c.homology}" for c in covers]
    lines += [f"H{k} = {format_scalar(v)}" for k, v in sorted(table.table.items())]
    return Outcome({"covers": [c.to_json() for c in covers], "hamiltonians": table.to_json()}, "\n".join(lines))


def _dimer_poly(g: ToricGraph):
    marking = find_kasteleyn_marking(g)
    K = char_poly(g, marking)
    a, b = K.min_degrees()
    return marking, K.shift(-a, -b)


def cmd_charpoly(g: ToricGraph, args) -> Outcome:
    marking, K = _dimer_poly(g)
    if args.gstv_signs:
        K = K.substitute(-1, 1)
    payload = {"K": format_poly(K), "marking": {e: format_scalar(m) for e, m in marking.items()}}
    return Outcome(payload, format_poly(K))


def cmd_spin(g: ToricGraph, args) -> Outcome:
    marking, K = _dimer_poly(g)
    rep = kasteleyn_check(g, marking, K)
    variants = {f"{a},{b}": format_poly(K.substitute(a, b)) for a, b in SPIN_ORDER}
    payload = {"variants": variants, "check": rep.to_json()}
    lines = [f"K({a}*lambda, {b}*mu) = {format_poly(K.substitute(a, b))}" for a, b in SPIN_ORDER]
    lines.append(f"kasteleyn check: {'ok' if rep.ok else 'FAILED'}" + (f", spin {rep.spin}" if rep.ok else ""))
    return Outcome(payload, "\n".join(lines), EXIT_OK if rep.ok else EXIT_MISMATCH)


def cmd_marking(g: ToricGraph, args) -> Outcome:
    n = as_network(g if args.backend == EXACT else to_float_graph(g, args.tol))
    turning = turning_numbers(n, args.backend, args.tol)
    marking = fractional_marking(n, turning, args.backend)
    rep = verify_marking(n, marking)
    payload = {
        "turning": turning.to_json(),
        "marking": {e: format_scalar(m) for e, m in marking.items()},
        "check": rep.to_json(),
    }
    lines = [f"{e}: {format_scalar(m)}" for e, m in marking.items()]
    lines.append(f"face conditions: {'ok' if rep.ok else 'FAILED'}")
    return Outcome(payload, "\n".join(lines), EXIT_OK if rep.ok else EXIT_MISMATCH)


def cmd_measure(g: ToricGraph, args) -> Outcome:
    prepared, log = prepared_network(g, args.backend)
    turning = turning_numbers(prepared, args.backend, args.tol)
    M = boundary_measurement_matrix(prepared, turning)
    ratio = charpoly_boundary(prepared, turning, RATIO)
    direct = charpoly_boundary(prepared, turning, DIRECT)
    agree = ratio.equals(direct)
    if args.gstv_signs:
        M = BoundaryMatrix([[x.substitute(-1, 1) for x in row] for row in M.entries])
        ratio = ratio.substitute(-1, 1)
    labels = cut_to_cylinder(prepared, check=False).labels
    payload = {
        "M": M.to_json(),
        "labels": {str(k): v for k, v in labels.items()},
        "charpoly": ratio.to_json(),
        "methods_agree": agree,
        "preparation": log,
    }
    text = f"M(lambda) = {M}\ndet(I - mu M) = {ratio}\nDIRECT and RATIO agree: {agree}"
    return Outcome(payload, text, EXIT_OK if agree else EXIT_MISMATCH)


def cmd_verify(g: ToricGraph, args) -> Outcome:
    rep = verify_theorem1(g, args.backend, args.gstv_signs)
    payload = rep.to_json()
    text = "\n".join([
        f"verdict: {rep.verdict}",
        f"lhs: {rep.lhs}",
        f"rhs: {rep.rhs}",
        f"spin: {rep.spin if rep.spin else 'NONE'}",
        f"Q: {format_poly(rep.Q) if rep.Q is not None else 'n/a'}",
    ])
    return Outcome(payload, text, EXIT_OK if rep.holds else EXIT_MISMATCH)


def cmd_compare(g: ToricGraph, args) -> Outcome:
    if args.backend != EXACT:
        raise FloatBackendUnsupported("the lambda-gcd needs exact arithmetic; rerun with --backend exact")
    rep = verify_theorem1(g, EXACT, args.gstv_signs)
    if not rep.holds:
        return Outcome(rep.to_json(), f"verdict: {rep.verdict}; systems not compared", EXIT_MISMATCH)
    sysrep = compare_systems(g, rep)
    lines = [f"Q: {format_poly(sysrep.Q)}", f"systems coincide: {sysrep.coincide}",
             f"GSTV system trivial: {sysrep.gstv_trivial}"]
    lines += [f"GK  mu^{j}: {format_poly(p)}" for j, p in sorted(sysrep.gk.items())]
    lines += [f"GSTV mu^{j}: {format_poly(p)}" for j, p in sorted(sysrep.gstv.items())]
    return Outcome(sysrep.to_json(), "\n".join(lines))


COMMANDS = {
    "validate": cmd_validate,
    "faces": cmd_faces,
    "matchings": cmd_matchings,
    "charpoly": cmd_charpoly,
    "marking": cmd_marking,
    "measure": cmd_measure,
    "verify": cmd_verify,
    "compare": cmd_compare,
    "spin": cmd_spin,
}


# -- plumbing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dimernet",
        description="Dimer and boundary-measurement characteristic polynomials of toric networks.",
        epilog=f"Bundled instances: {', '.join(BUNDLED)}.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", required=True, help="instance JSON file or bundled instance name")
    p.add_argument("--backend", choices=(EXACT, FLOAT), default=EXACT)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance for the float backend")
    p.add_argument("--gstv-signs", action="store_true", help="apply lambda -> -lambda to reported results")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, help="replace weights by seeded random positive rationals")
    p.add_argument("--network", action="store_true", help="validate: also check perfectness and rim/cut")
    return p


def emit(out: Outcome, fmt: str, stream=sys.stdout):
    if fmt == "json":
        json.dump(out.payload, stream, indent=2, sort_keys=False)
        stream.write("\n")
    else:
        stream.write(out.text + "\n")


def run(argv: list | None = None, stream=sys.stdout) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        g = load_instance(args.input)
        if args.seed is not None:
            g = random_weights(g, random.Random(args.seed))
        out = COMMANDS[args.command](g, args)
    except (DimerNetError, OSError, KeyError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else str(exc.args[0])
        out = Outcome({"error": type(exc).__name__, "message": msg}, f"error: {msg}", EXIT_INVALID)
    if isinstance(out.payload, dict):
        out.payload.setdefault("schema", SCHEMA)
        out.payload["command"] = args.command
        if args.seed is not None:
            out.payload["seed"] = args.seed
    emit(out, args.format, stream)
    return out.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
