"""Command-line interface: ``symcurv analyze|examples|verify|submanifold|jacobi``.

Exit codes
    analyze      0 ok, 2 parse error, 3 algebra fails an axiom
    examples     0 all values match, 1 some mismatch, 2 unknown example
    verify       0 every identity holds, 1 some identity fails, 2 bad arguments
    submanifold  0 all checks pass, 1 some check fails, 2 parse error, 3 degenerate pullback
    jacobi       0 ok, 2 bad parameter or input, 3 algebra fails an axiom, 4 numerical blow-up

Algebra arguments accept a JSON file or a builtin name (aff1c, r40, abelianN).
SYMCURV_SEED sets the default for ``--seed``.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import rational as rq
from .curvature import CurvatureData, flags, identity_equations, identity_suite_over_samples
from .fileio import ParseError, dumps, load_json, matrix, parse_algebra, parse_embedding, sparse
from .geodesic import BlowUp, GeodesicError, convexity_check, integrate
from .liealg import (
    LieAlgebraError,
    builtin,
    canonical_connection,
    flat_connection,
    random_symplectic_connection,
    random_symplectic_lie_algebra,
    special_elements,
    validate,
)
from .reproduce import EXAMPLES, run_examples
from .sectional import constant_curvature_analysis, npc_sample, sectional_form
from .submanifold import EmbeddingError, gauss_check, induced_connection_and_II, random_embedding, smc
from .symplin import random_symplectic_plane

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID, EXIT_BLOWUP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def default_seed():
    raw = os.environ.get("SYMCURV_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError("SYMCURV_SEED must be an integer, got %r" % raw) from None


def load_algebra(source):
    """Parse a file (ParseError) and validate it (LieAlgebraError)."""
    if not os.path.exists(source):
        try:
            alg = builtin(source)
        except KeyError:
            raise ParseError("no such file or builtin algebra: %s" % source) from None
    else:
        alg = parse_algebra(load_json(source), os.path.splitext(os.path.basename(source))[0])
    rep = validate(alg)
    rep.raise_for_errors()
    return alg, rep


def _err(msg):
    print("error: %s" % msg, file=sys.stderr)


# -- analyze -------------------------------------------------------------------


def analyze_report(alg, rep, seed, samples):
    conn = canonical_connection(alg)
    d = CurvatureData(conn)
    se = special_elements(alg)
    cc = constant_curvature_analysis(conn, d)
    rng = rq.make_rng("analyze:%s" % seed)
    planes = []
    for _ in range(samples):
        x, y = random_symplectic_plane(alg.omega, rng)
        sf = sectional_form(d.Rl, alg.omega, x, y)
        planes.append({"x": x, "y": y, "restricted": matrix(sf.restricted), "class": sf.kind})
    weyl = d.weyl
    return {
        "algebra": {
            "name": alg.name,
            "dim": alg.dim,
            "exact": rep.exact,
            "solvable": se.solvable,
            "nilpotent": se.nilpotent,
            "unimodular": se.unimodular,
        },
        "ell": se.ell,
        "curvature": sparse(d.Rl),
        "ricci": matrix(d.ric),
        "weyl": {"nonzero": not weyl.is_zero(), "components": sparse(weyl)},
        "rho": d.rho.data,
        "flags": flags(conn, d).as_dict(),
        "r": cc.r,
        "trichotomy": cc.trichotomy,
        "ricci_endomorphism_class": cc.details["endomorphism_class"],
        "constant_sectional_curvature": cc.is_constant,
        "sectional_samples": planes,
        "npc_sample": npc_sample(conn, seed=seed, data=d).as_dict(),
        "seed": seed,
    }


def cmd_analyze(args):
    try:
        alg, rep = load_algebra(args.path)
    except ParseError as exc:
        _err(exc)
        return EXIT_USAGE
    except LieAlgebraError as exc:
        _err("invalid algebra: %s (axiom %s, witness %s)" % (exc, exc.axiom, exc.witness))
        return EXIT_INVALID
    print(dumps(analyze_report(alg, rep, args.seed, args.samples)))
    return EXIT_OK


# -- examples ------------------------------------------------------------------


def cmd_examples(args):
    try:
        checks = run_examples(args.name)
    except KeyError as exc:
        _err(exc.args[0])
        return EXIT_USAGE
    width = max(len(c.name) for c in checks)
    failed = 0
    for c in checks:
        print("%-5s %-6s %-*s" % ("PASS" if c.ok else "FAIL", c.example, width, c.name))
        if not c.ok:
            failed += 1
            row = c.as_dict()
            print("      expected: %s" % (row["expected"],))
            print("      computed: %s" % (row["computed"],))
    print("%d/%d checks match" % (len(checks) - failed, len(checks)))
    return EXIT_FAIL if failed else EXIT_OK


# -- verify --------------------------------------------------------------------


def suite_connections(dim, trials, seed):
    """(label, connection) pairs: flat, builtins in dim 4, then seeded random ones."""
    out = [("flat", flat_connection(dim))]
    if dim == 4:
        out += [(name, canonical_connection(builtin(name))) for name in ("aff1c", "r40")]
    for t in range(trials):
        s = "%s:%d" % (seed, t)
        alg = random_symplectic_lie_algebra(dim, s)
        out.append(("random:%s" % s, random_symplectic_connection(alg, s)))
    return out


def verify_report(dims, trials, seed):
    doc = {"dims": dims, "trials": trials, "seed": seed, "summaries": [], "failures": []}
    ok = True
    for dim in dims:
        labelled = suite_connections(dim, trials, seed)
        summaries, per_conn = identity_suite_over_samples([c for _, c in labelled])
        doc["summaries"].extend(s.as_dict() for s in summaries)
        rows = []
        for order, ((label, conn), results) in enumerate(zip(labelled, per_conn)):
            for r in results:
                if not r.holds:
                    rows.append((order, label, r))
        rows.sort(key=lambda t: (t[0], t[2].name))
        ok &= not rows
        if rows:
            _, label, r = rows[0]
            conn = dict(labelled)[label]
            residual = None
            for eq in identity_equations(CurvatureData(conn)):
                if eq.name == r.name:
                    residual = sparse(eq.residual())[:20]
            by_identity = {}
            for _, lbl, x in rows:
                entry = by_identity.setdefault(x.name, {"count": 0, "first_sample": lbl})
                entry["count"] += 1
            doc["failures"].append(
                {
                    "dim": dim,
                    "count": len(rows),
                    "first": {
                        "identity": r.name,
                        "sample": label,
                        "max_residual": r.max_residual,
                        "residual": residual,
                    },
                    "by_identity": by_identity,
                }
            )
    return doc, ok


def cmd_verify(args):
    dims = args.dims
    if any(d < 2 or d % 2 for d in dims):
        _err("dimensions must be even and at least 2, got %s" % ",".join(map(str, dims)))
        return EXIT_USAGE
    if args.trials < 0:
        _err("--trials must be nonnegative")
        return EXIT_USAGE
    doc, ok = verify_report(dims, args.trials, args.seed)
    print(dumps(doc))
    if not ok:
        for f in doc["failures"]:
            first = f["first"]
            _err(
                "dim %d: identity %s fails on sample %s (max residual %s)"
                % (f["dim"], first["identity"], first["sample"], first["max_residual"])
            )
    return EXIT_OK if ok else EXIT_FAIL


# -- submanifold ------------------------------------------------------------------


def embedding_report(phi, seed):
    data = induced_connection_and_II(phi)
    rep = gauss_check(phi, seed=seed, data=data)
    t = smc(data)
    passed = (
        rep.ind_zero
        and rep.gauss_residual_zero
        and rep.ricci_is_minus_smc
        and rep.torsion_free
        and rep.preserves_omega
        and all(rep.symmetries.values())
    )
    return {
        "k": phi.k,
        "n": phi.n,
        "ind_zero": rep.ind_zero,
        "gauss_residual_zero": rep.gauss_residual_zero,
        "ricci_is_minus_smc": rep.ricci_is_minus_smc,
        "torsion_free": rep.torsion_free,
        "preserves_omega": rep.preserves_omega,
        "symmetries": rep.symmetries,
        "smc": matrix(t.smc2),
        "smc4": sparse(t.smc4),
        "smc4_zero": rep.smc4_zero,
        "hereditary_written_holds": rep.hereditary_written_holds,
        "hereditary_derived_holds": rep.hereditary_derived_holds,
        "pass": passed,
    }, passed


def cmd_submanifold(args):
    reports = []
    try:
        if args.random is not None:
            k, n, count = args.random
            if not (1 <= k <= n) or count < 1:
                raise ParseError("--random needs 1 <= k <= n and a positive count")
            for s in range(count):
                phi = random_embedding(k, n, "%s:%d" % (args.seed, s), tangential=args.tangential)
                body, _ = embedding_report(phi, s)
                body["sample"] = s
                reports.append(body)
        else:
            if args.path is None:
                raise ParseError("give an embedding file or --random k n count")
            phi = parse_embedding(load_json(args.path))
            body, _ = embedding_report(phi, args.seed)
            reports.append(body)
    except ParseError as exc:
        _err(exc)
        return EXIT_USAGE
    except EmbeddingError as exc:
        _err("degenerate embedding: %s" % exc)
        return EXIT_INVALID
    passed = sum(1 for r in reports if r["pass"])
    print(dumps({"reports": reports, "passed": passed, "total": len(reports), "seed": args.seed}))
    return EXIT_OK if passed == len(reports) else EXIT_FAIL


# -- jacobi ----------------------------------------------------------------------


def parse_vector(text, dim, label):
    if text is None:
        return None
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != dim:
        raise UsageError("%s needs %d comma-separated entries" % (label, dim))
    try:
        out = np.array([float(rq.Q(p)) if "/" in p else float(p) for p in parts])
    except (ValueError, ZeroDivisionError):
        raise UsageError("%s: cannot parse %r" % (label, text)) from None
    if not np.all(np.isfinite(out)):
        raise UsageError("%s must be finite" % label)
    return out


def cmd_jacobi(args):
    if not (args.h > 0 and math.isfinite(args.h)):
        _err("--h must be positive and finite")
        return EXIT_USAGE
    if not (math.isfinite(args.T) and args.T >= 5 * args.h):
        _err("--T must be finite and cover at least five steps")
        return EXIT_USAGE
    try:
        alg, _ = load_algebra(args.path)
    except ParseError as exc:
        _err(exc)
        return EXIT_USAGE
    except LieAlgebraError as exc:
        _err("invalid algebra: %s (axiom %s, witness %s)" % (exc, exc.axiom, exc.witness))
        return EXIT_INVALID
    dim = alg.dim
    try:
        v0 = parse_vector(args.v0, dim, "--v0")
        j0 = parse_vector(args.j0, dim, "--j0")
        jd0 = parse_vector(args.jdot0, dim, "--jdot0")
    except UsageError as exc:
        _err(exc)
        return EXIT_USAGE
    if v0 is None:
        v0 = np.eye(dim)[dim - 1]
    if j0 is None:
        j0 = np.arange(1, dim + 1, dtype=float)
    if jd0 is None:
        jd0 = np.array([(-1.0) ** i for i in range(dim)])
    conn = canonical_connection(alg)
    try:
        traj = integrate(conn, v0, j0, jd0, args.T, args.h)
    except BlowUp as exc:
        _err("numerical blow-up: %s" % exc)
        return EXIT_BLOWUP
    except GeodesicError as exc:
        _err(exc)
        return EXIT_USAGE
    census = npc_sample(conn, seed=args.seed)
    rep = convexity_check(traj, census)
    print(
        dumps(
            {
                "algebra": alg.name,
                "T": args.T,
                "h": args.h,
                "v0": v0.tolist(),
                "j0": j0.tolist(),
                "jdot0": jd0.tolist(),
                "report": rep.as_dict(),
                "npc_census": census.as_dict(),
                "seed": args.seed,
            }
        )
    )
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _dims(text):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser(seed):
    p = _Parser(prog="symcurv", description="Exact curvature analysis of symplectic connections.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="curvature report for the canonical connection of an algebra")
    a.add_argument("path", help="algebra JSON file or builtin name")
    a.add_argument("--seed", type=int, default=seed)
    a.add_argument("--samples", type=int, default=5, help="number of sampled symplectic planes")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("examples", help="recompute the published example values")
    e.add_argument("name", nargs="?", default="all", help="%s or all" % ", ".join(sorted(EXAMPLES)))
    e.set_defaults(func=cmd_examples)

    v = sub.add_parser("verify", help="run the identity suite on seeded connections")
    v.add_argument("--dims", type=_dims, default=[2, 4, 6])
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=seed)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("submanifold", help="Gauss equation checks for polynomial embeddings")
    s.add_argument("path", nargs="?", help="embedding JSON file")
    s.add_argument("--random", nargs=3, type=int, metavar=("K", "N", "COUNT"))
    s.add_argument("--tangential", action="store_true", help="also perturb tangential components")
    s.add_argument("--seed", type=int, default=seed)
    s.set_defaults(func=cmd_submanifold)

    j = sub.add_parser("jacobi", help="integrate a geodesic with a Jacobi field and check convexity")
    j.add_argument("path", help="algebra JSON file or builtin name")
    j.add_argument("--v0")
    j.add_argument("--j0")
    j.add_argument("--jdot0")
    j.add_argument("--T", type=float, default=2.0)
    j.add_argument("--h", type=float, default=1e-3)
    j.add_argument("--seed", type=int, default=seed)
    j.set_defaults(func=cmd_jacobi)
    return p


def main(argv=None):
    try:
        parser = build_parser(default_seed())
        args = parser.parse_args(argv)
    except UsageError as exc:
        _err(exc)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
