"""Command-line reports: ``potentia <command> [options]``.

Output is JSON (default) or CSV.  Exit status is 0 when every check passes,
1 when one fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .exactla import format_rat, parse_rat
from .gradedquot import confluence_check, rewrite_system_from_presentation
from .homology import HomologyTable
from .potentialcy import (
    QuadMatrix,
    apply_basis_change,
    block_diag,
    build_B,
    center_test,
    check_euler_and_hessian,
    classify2,
    hilbert_oracle_B,
    koszul_hh,
    koszul_square_zero,
    preset,
    quantum_matrix,
    relation_space,
    self_duality_check,
    swap_matrix,
)

DEFAULT_MAX_DEGREE = 8
VERIFY_TARGETS = (
    "euler", "hessian", "confluence", "center", "duality",
    "gr", "lifts", "degeneration", "quantum", "basischange",
)
HOMOLOGY_KINDS = ("hochschild", "poisson", "koszulphi")

# fixed samples keep the reports reproducible
CENTER_SAMPLES = (("-1", "-1"), ("2", "3"), ("1/2", "-5"), ("0", "1"))
SWAP_SAMPLES = (
    [[0, 1], [2, 0]],
    [[0, 2, -1], [3, 0, 0], [1, 0, 0]],
)


class InputError(Exception):
    pass


class Report:
    def __init__(self, inputs: dict):
        self.input = inputs
        self.tables: dict = {}
        self.checks: list = []
        self.extra: dict = {}

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})

    def table(self, key: str, t: HomologyTable) -> None:
        self.tables[key] = t.as_rows()

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self, elapsed_ms) -> dict:
        out = {"input": self.input}
        out.update(self.extra)
        out["tables"] = self.tables
        out["checks"] = self.checks
        if elapsed_ms is not None:
            out["elapsed_ms"] = elapsed_ms
        return out


# --- input handling -----------------------------------------------------------


def _matrix_from_json(text: str) -> QuadMatrix:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"matrix is not valid JSON: {e}") from None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows")
    try:
        return QuadMatrix(rows)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InputError(str(e)) from None


def resolve_matrix(args) -> tuple:
    """``(QuadMatrix, description)`` from the mutually exclusive sources."""
    given = [a for a in ("preset", "matrix", "matrix_file") if getattr(args, a)]
    if len(given) > 1:
        raise InputError("use only one of --preset, --matrix, --matrix-file")
    if args.matrix:
        return _matrix_from_json(args.matrix), "matrix"
    if args.matrix_file:
        try:
            with open(args.matrix_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {args.matrix_file}: {e.strerror}") from None
        return _matrix_from_json(text), "matrix-file"
    name = args.preset or "jordan"
    try:
        if name == "quantum" and args.q is not None:
            return quantum_matrix(args.q), "preset"
        return preset(name), "preset"
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(str(e)) from None


def resolve_degree(args) -> int:
    if args.max_degree is not None:
        D = args.max_degree
    else:
        env = os.environ.get("POTENTIA_MAX_DEGREE")
        try:
            D = int(env) if env else DEFAULT_MAX_DEGREE
        except ValueError:
            raise InputError(f"POTENTIA_MAX_DEGREE={env!r} is not an integer") from None
    if D < 2:
        raise InputError("max degree must be at least 2")
    return D


def resolve_q(args, M: QuadMatrix) -> Fraction:
    if args.q is not None:
        try:
            q = parse_rat(args.q)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad --q value {args.q!r}") from None
    else:
        tag = classify2(M) if M.n == 2 else None
        q = tag.q if tag is not None and tag.kind == "quantum" and tag.q is not None else Fraction(2)
    if q == 0 or abs(q) == 1:
        raise InputError("q must be nonzero and not +-1")
    return q


def poisson_potential(args, M: QuadMatrix):
    """The commutative potential of the type of ``M`` (or ``--phi``)."""
    from .poisson import CPoly, PoissonPotential, jordan_phi, quantum_phi

    try:
        if args.phi:
            return PoissonPotential(args.phi)
        if M.n != 2:
            raise InputError("the Poisson side needs a 2x2 matrix or --phi")
        tag = classify2(M)
        if tag.kind == "classical":
            return PoissonPotential(CPoly())
        if tag.kind == "jordan":
            return PoissonPotential(jordan_phi())
        if tag.kind == "quantum" and tag.q is not None:
            return PoissonPotential(quantum_phi(tag.q))
    except InputError:
        raise
    except Exception as e:  # sympy raises a zoo of exception types
        raise InputError(f"bad potential: {e}") from None
    raise InputError(f"no Poisson potential for type {tag.label()}")


# --- commands -----------------------------------------------------------------


def cmd_classify(args, M, D, rep: Report) -> None:
    if M.n != 2:
        raise InputError("classify handles 2x2 matrices only")
    tag = classify2(M)
    rep.extra["type"] = tag.kind
    if tag.kind == "quantum":
        rep.extra["tau"] = format_rat(tag.tau)
        rep.extra["q"] = format_rat(tag.q) if tag.q is not None else None


def cmd_hilbert(args, M, D, rep: Report) -> None:
    pa = build_B(M, with_rewrite=False)
    dims = [pa.algebra.graded_dim(d) for d in range(D + 1)]
    rep.extra["hilbert"] = dims
    if M.is_invertible():
        oracle = hilbert_oracle_B(M.n, D)
        rep.check("hilbert-series", dims == oracle, f"expected {oracle}")


def cmd_homology(args, M, D, rep: Report) -> None:
    kind = args.kind
    if kind == "hochschild":
        pa = build_B(M, with_rewrite=False)
        rep.table("HH", koszul_hh(pa, D))
        bad = koszul_square_zero(pa, D)
        rep.check("koszul-square-zero", not bad, f"failing degrees {bad}" if bad else "")
        return
    from .poisson import delta_square_failures, hp_table, hphi_table, wedge_square_failures

    pp = poisson_potential(args, M)
    rep.input["phi"] = str(pp.phi)
    if kind == "poisson":
        rep.table("HP", hp_table(pp, D))
        bad = delta_square_failures(pp, D)
        rep.check("brylinski-square-zero", not bad, f"failing degrees {bad}" if bad else "")
    else:
        rep.table("Hphi", hphi_table(pp, D))
        bad = wedge_square_failures(pp, D)
        rep.check("wedge-square-zero", not bad, f"failing degrees {bad}" if bad else "")


def _verify_euler(args, M, D, rep):
    euler, _ = check_euler_and_hessian(M)
    rep.check("euler", euler)


def _verify_hessian(args, M, D, rep):
    _, hess = check_euler_and_hessian(M)
    rep.check("hessian", hess)


def _verify_confluence(args, M, D, rep):
    pa = build_B(M, with_rewrite=False)
    if pa.is_free:
        rep.check("confluence", True, "free algebra, no rules")
        return
    bad = confluence_check(rewrite_system_from_presentation(pa.presentation))
    rep.check("confluence", not bad, "; ".join(f"{o.word}: {o.left} != {o.right}" for o in bad))


def _verify_center(args, M, D, rep):
    for a, b in CENTER_SAMPLES:
        r = center_test(a, b)
        rep.check(f"center a={a} b={b}", r.central, "" if r.confluent else "rules not confluent")


def _verify_duality(args, M, D, rep):
    r = self_duality_check(build_B(M, with_rewrite=False), D)
    rep.check("self-duality", r.ok, "; ".join(r.failures[:5]))


def _verify_gr(args, M, D, rep):
    from .brylinski import gr_compare

    r = gr_compare(D)
    rep.check("gr-identities", r.ok, f"{r.checked} basis chains, {len(r.mismatches)} mismatches")


def _verify_lifts(args, M, D, rep):
    from .brylinski import lift_suite

    outcomes = lift_suite(D)
    bad = [o.record.label for o in outcomes if not o.formula_ok]
    unsolved = [o.record.label for o in outcomes if not o.solver_agrees]
    rep.check("lift-formulas", not bad, f"{len(outcomes)} lifts; failing {bad}" if bad else f"{len(outcomes)} lifts")
    rep.check("lift-solver-agreement", not unsolved, f"disagreeing {unsolved}" if unsolved else "")


def _verify_degeneration(args, M, D, rep):
    from .brylinski import degeneration_check

    r = degeneration_check(D)
    rep.table("HH", r.hh)
    rep.table("HP", r.hp)
    rep.check("hh-equals-hp", not r.mismatches, f"mismatches {r.mismatches}" if r.mismatches else "")
    rep.check("lifted-basis", not r.lift_rank_failures, "; ".join(str(x) for x in r.lift_rank_failures))


def _verify_quantum(args, M, D, rep):
    from .brylinski import quantum_compare

    q = resolve_q(args, M)
    r = quantum_compare(q, D)
    rep.input["q"] = format_rat(q)
    rep.table("HH", r.hh)
    rep.table("HP", r.hp)
    rep.check("quantum-counts", r.ok, f"mismatches {r.mismatches}" if r.mismatches else "")


def _congruence_samples(n: int, count: int = 3) -> list:
    rng = random.Random(n)
    out = []
    while len(out) < count:
        P = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if QuadMatrix(P).is_invertible():
            out.append((P, Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 3))))
    return out


def _verify_basischange(args, M, D, rep):
    ok = all(
        apply_basis_change(M, block_diag(P, nu)) == relation_space(M.congruent(P))
        for P, nu in _congruence_samples(M.n)
    )
    rep.check("congruence-basis-change", ok)
    ok = all(
        apply_basis_change(S, swap_matrix(len(S))) == relation_space(QuadMatrix(S).transpose())
        for S in SWAP_SAMPLES
    )
    rep.check("swap-basis-change", ok)


VERIFIERS = {
    "euler": _verify_euler,
    "hessian": _verify_hessian,
    "confluence": _verify_confluence,
    "center": _verify_center,
    "duality": _verify_duality,
    "gr": _verify_gr,
    "lifts": _verify_lifts,
    "degeneration": _verify_degeneration,
    "quantum": _verify_quantum,
    "basischange": _verify_basischange,
}


def cmd_verify(args, M, D, rep: Report) -> None:
    VERIFIERS[args.target](args, M, D, rep)


def cmd_report(args, M, D, rep: Report) -> None:
    if M.n == 2:
        cmd_classify(args, M, D, rep)
    cmd_hilbert(args, M, D, rep)
    pa = build_B(M, with_rewrite=False)
    rep.table("HH", koszul_hh(pa, D))
    if M.n == 2 or args.phi:
        try:
            pp = poisson_potential(args, M)
        except InputError:
            pp = None
        if pp is not None:
            from .poisson import hp_table

            rep.table("HP", hp_table(pp, D))
            rep.check("hh-equals-hp", _same(rep.tables["HH"], rep.tables["HP"]))
    # the quadratic rules are only expected to be confluent for n = 2
    names = ("euler", "hessian", "confluence", "duality", "basischange") if M.n == 2 else (
        "euler", "hessian", "duality", "basischange")
    for name in names:
        VERIFIERS[name](args, M, D, rep)
    if M.n == 2 and classify2(M).kind == "jordan":
        _verify_center(args, M, D, rep)
        _verify_gr(args, M, D, rep)
        _verify_lifts(args, M, D, rep)
        from .brylinski import degeneration_check

        r = degeneration_check(D)
        rep.check("lifted-basis", not r.lift_rank_failures, "; ".join(str(x) for x in r.lift_rank_failures))


def _same(a: list, b: list) -> bool:
    return {(p, d): n for p, d, n in a} == {(p, d): n for p, d, n in b}


COMMANDS = {
    "classify": cmd_classify,
    "hilbert": cmd_hilbert,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "report": cmd_report,
}


# --- output -------------------------------------------------------------------


def render_csv(data: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "name", "p", "d", "value"])
    for k, v in data["input"].items():
        w.writerow(["input", k, "", "", json.dumps(v)])
    for k in ("type", "tau", "q"):
        if k in data:
            w.writerow(["result", k, "", "", data[k]])
    for d, n in enumerate(data.get("hilbert", [])):
        w.writerow(["hilbert", "B", "", d, n])
    for name, rows in data["tables"].items():
        for p, d, n in rows:
            w.writerow(["table", name, p, d, n])
    for c in data["checks"]:
        w.writerow(["check", c["name"], "", "", "pass" if c["pass"] else "fail"])
    if "elapsed_ms" in data:
        w.writerow(["timing", "elapsed_ms", "", "", data["elapsed_ms"]])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help="classical, jordan, quantum or quantum:q")
    common.add_argument("--matrix", help="JSON rows, e.g. '[[\"1\",\"1\"],[\"-1\",\"0\"]]'")
    common.add_argument("--matrix-file", help="file holding the matrix as JSON")
    common.add_argument("--max-degree", type=int, help=f"highest internal degree (default {DEFAULT_MAX_DEGREE})")
    common.add_argument("--q", help="quantum parameter, e.g. 2 or 3/2")
    common.add_argument("--phi", help="commutative potential for the Poisson side, e.g. '-x^2*z'")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms (byte-stable output)")

    parser = argparse.ArgumentParser(prog="potentia", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"potentia {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="type of B(M) for 2x2 M")
    sub.add_parser("hilbert", parents=[common], help="graded dimensions of B(M)")
    h = sub.add_parser("homology", parents=[common], help="homology tables")
    h.add_argument("kind", choices=HOMOLOGY_KINDS)
    v = sub.add_parser("verify", parents=[common], help="run one family of checks")
    v.add_argument("target", choices=VERIFY_TARGETS)
    sub.add_parser("report", parents=[common], help="everything that applies to the input")
    return parser


def _inputs(args, M: QuadMatrix, source: str, D: int) -> dict:
    out = {"command": args.command}
    if args.command == "homology":
        out["kind"] = args.kind
    if args.command == "verify":
        out["target"] = args.target
    out["source"] = source
    if source == "preset":
        out["preset"] = args.preset or "jordan"
    out["matrix"] = M.as_strings()
    out["max_degree"] = D
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    start = time.perf_counter()
    try:
        M, source = resolve_matrix(args)
        D = resolve_degree(args)
        rep = Report(_inputs(args, M, source, D))
        COMMANDS[args.command](args, M, D, rep)
    except InputError as e:
        print(f"potentia: error: {e}", file=sys.stderr)
        return 2
    elapsed = None if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
    data = rep.as_dict(elapsed)
    text = render_csv(data) if args.format == "csv" else json.dumps(data, indent=2) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"potentia: error: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
