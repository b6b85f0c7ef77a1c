"""Command-line front end: constructions, certificates and reports as
deterministic JSON (CSV for the mana table, DOT/SVG for projective-line
diagrams).

Exit codes: 0 = all certificates passed, 1 = a certificate failed,
2 = validation error (machine-readable JSON on stderr)."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import magic, mub, reality, sic, zauner
from .errors import NotAConfiguration, WrongResidueClass, ZkitError
from .fields import check_modulus, cubic_residue_cosets, half_exponent
from .operators import (CliffordElement, displacement, fourier_operator,
                        magic_gate, symplectic_unitary)
from .stateio import (dumps_canonical, load_state, save_operator, save_state,
                      write_json)
from .symplectic import (INFINITY, SymplecticMatrix, enumerate_order3,
                         fixed_points, mobius_apply, projective_line)

SLOW_PRIME_LIMIT = 11  # config beyond this needs --allow-slow


def _emit(doc) -> None:
    sys.stdout.write(dumps_canonical(doc))


def _label(z) -> str:
    return "inf" if z == INFINITY else f"{int(z):02d}"


def _parse_conjugator(name: str, p: int) -> CliffordElement | None:
    if name in (None, "identity"):
        return None
    if name == "fourier":
        return CliffordElement(0, (0, 0), SymplecticMatrix.f(p))
    raise ZkitError(f"unknown conjugator {name!r}; use identity or fourier")


# ---------------------------------------------------------------------------
# mub / alltop
# ---------------------------------------------------------------------------

def _write_family(fam: mub.MubFamily, outdir: Path) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    for z in fam.labels:
        path = outdir / f"basis_{_label(z)}.json"
        save_operator(path, fam.basis(z), label=_label(z),
                      provenance=fam.provenance)
        files.append(path.name)
    dev = fam.max_unbiasedness_deviation()
    cert = {"unbiased": bool(dev <= 1e-9), "max_deviation": dev,
            "bases": len(fam.bases), "dim": fam.dim}
    write_json(outdir / "certificate.json", cert)
    write_json(outdir / "family.json",
               {"provenance": fam.provenance, "files": files,
                "certificate": cert})
    return cert


def cmd_mub(args) -> int:
    check_modulus(args.p)
    if args.family == "ivanovic":
        fam = mub.ivanovic_mub(args.p, validate=False)
        default_dir = f"zkit_mub_p{args.p}_ivanovic"
    else:
        conj = _parse_conjugator(args.conjugator, args.p)
        fam = mub.alltop_mub(args.p, args.x, conjugator=conj, validate=False)
        default_dir = f"zkit_mub_p{args.p}_alltop_x{args.x}_{args.conjugator}"
    outdir = Path(args.out) if args.out else Path(default_dir)
    cert = _write_family(fam, outdir)
    _emit({"command": "mub", "p": args.p, "out": str(outdir),
           "certificate": cert})
    return 0 if cert["unbiased"] else 1


def cmd_alltop(args) -> int:
    args.family = "alltop"
    return cmd_mub(args)


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

def cmd_config(args) -> int:
    check_modulus(args.p)
    if args.p % 3 != 1:
        raise WrongResidueClass(
            f"configurations exist only for p = 1 mod 3, got p = {args.p}")
    if args.p > SLOW_PRIME_LIMIT and not args.allow_slow:
        raise ZkitError(f"p = {args.p} incidence is expected to exceed 60 s; "
                        "rerun with --allow-slow")
    subspaces = zauner.enumerate_zauner_subspaces(args.p)
    reports, ok = {}, True
    for name, points in (("standard", mub.ivanovic_mub(args.p).rays()),
                         ("alltop", mub.enumerate_alltop_vectors(args.p))):
        try:
            rep = zauner.verify_configuration(points, subspaces, tol=args.tol,
                                              threads=args.threads)
            reports[name] = rep.to_json(include_incidence=args.include_incidence)
        except NotAConfiguration as err:
            ok = False
            reports[name] = {"ok": False, "violations": err.violations}
    doc = {"command": "config", "p": args.p, "subspaces": len(subspaces),
           "configurations": reports}
    if args.out:
        write_json(Path(args.out) / f"config_p{args.p}.json", doc)
    _emit(doc)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

def cmd_orbits(args) -> int:
    check_modulus(args.p)
    orbits = zauner.clifford_orbits_of_alltop(args.p)
    mana_rows = magic.mana_report(args.p) if args.with_mana else None
    rows = []
    for i, orb in enumerate(orbits):
        row = {"coset": sorted(orb.coset) if orb.coset else None,
               "size": orb.size}
        if mana_rows:
            row["mana"] = mana_rows[i].mana
        rows.append(row)
    doc = {"command": "orbits", "p": args.p, "orbit_count": len(orbits),
           "orbits": rows,
           "total_rays": sum(o.size for o in orbits)}
    if args.out:
        outdir = Path(args.out)
        write_json(outdir / f"orbits_p{args.p}.json", doc)
        if args.rays:
            for i, orb in enumerate(orbits):
                write_json(outdir / f"orbit_p{args.p}_{i:02d}_rays.json", {
                    "dim": args.p,
                    "coset": sorted(orb.coset) if orb.coset else None,
                    "rays": [[[float(a.real), float(a.imag)]
                              for a in ray.amplitudes]
                             for ray in orb.rays],
                })
    _emit(doc)
    return 0


# ---------------------------------------------------------------------------
# zauner
# ---------------------------------------------------------------------------

def cmd_zauner(args) -> int:
    check_modulus(args.p)
    u = zauner.representative_zauner(args.p)
    m = magic_gate(args.p).matrix
    f = fourier_operator(args.p).matrix
    sub = zauner.zauner_projector(u)
    doc = {
        "command": "zauner", "p": args.p,
        "order3_residual": float(np.max(np.abs(
            np.linalg.matrix_power(u.matrix, 3) - np.eye(args.p)))),
        "magic_commutator_residual": float(np.max(np.abs(
            u.matrix @ m - m @ u.matrix))),
        "fourier_squares_residual": float(np.max(np.abs(
            f.conj().T @ u.matrix @ f - u.matrix @ u.matrix))),
        "rank": sub.rank,
    }
    if args.enumerate:
        doc["subspace_count"] = len(zauner.enumerate_zauner_subspaces(args.p))
    if args.out:
        save_operator(Path(args.out) / f"zauner_p{args.p}.json", u.matrix,
                      provenance={"representative": True})
    _emit(doc)
    ok = (doc["order3_residual"] <= 1e-9
          and doc["magic_commutator_residual"] <= 1e-9
          and doc["fourier_squares_residual"] <= 1e-9)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# mana / maximize-mana
# ---------------------------------------------------------------------------

def cmd_mana(args) -> int:
    check_modulus(args.p)
    if args.state:
        vec, _ = load_state(args.state, expected_dim=args.p)
        rho = magic.DensityMatrix.pure(vec / np.linalg.norm(vec))
        w = magic.wigner(rho)
        _emit({"command": "mana", "p": args.p, "state": str(args.state),
               "mana": magic.mana(rho), "wigner_min": float(w.values.min()),
               "wigner_sum": w.total()})
        return 0
    rows = magic.mana_report(args.p)
    if args.report == "csv":
        sys.stdout.write("coset,x,mana\n")
        for r in rows:
            coset = "" if r.coset is None else ";".join(map(str, r.coset))
            sys.stdout.write(f"{coset},{r.representative_x},{'%.17g' % r.mana}\n")
    else:
        _emit({"command": "mana", "p": args.p,
               "rows": [{"coset": list(r.coset) if r.coset else None,
                         "x": r.representative_x, "mana": r.mana,
                         "spread": r.spread, "samples": r.samples}
                        for r in rows]})
    return 0


def cmd_maximize_mana(args) -> int:
    check_modulus(args.p)
    ray, value = magic.maximize_mana(args.p, restarts=args.restarts,
                                     iterations=args.iterations,
                                     kicks=args.kicks, seed=args.seed)
    if args.out:
        save_state(args.out, ray.amplitudes, mana=value, seed=args.seed)
    _emit({"command": "maximize-mana", "p": args.p, "seed": args.seed,
           "restarts": args.restarts, "best_mana": value})
    return 0


# ---------------------------------------------------------------------------
# sic
# ---------------------------------------------------------------------------

def cmd_sic_verify(args) -> int:
    check_modulus(args.p)
    fid = sic.load_fiducial(args.fiducial, expected_dim=args.p)
    rep = sic.verify_sic(fid)
    doc = {"command": "sic-verify", "p": args.p, "fiducial": str(args.fiducial),
           "pass": rep.passed, "max_deviation": rep.max_deviation,
           "mana": sic.sic_mana(fid)}
    if args.p % 3 == 1:
        doc["zauner_subspace_count"] = len(sic.fiducial_zauner_check(fid))
    else:
        doc["zauner_subspace_count"] = None
    if args.p == 7:
        for name, ref in (("a", 0.8354), ("b", 0.8116)):
            if abs(doc["mana"] - ref) <= 5e-4:
                doc["orbit"] = name
                break
        else:
            doc["orbit"] = None
    _emit(doc)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# mobius-plot
# ---------------------------------------------------------------------------

def _mobius_edges(g: SymplecticMatrix):
    return [(z, mobius_apply(g, z)) for z in projective_line(g.p)]


def _dot_graph(g: SymplecticMatrix) -> str:
    fixed = set(fixed_points(g))
    lines = ["digraph mobius {", "  layout=circo;", "  node [shape=circle];"]
    for z in projective_line(g.p):
        style = " [peripheries=2, style=filled, fillcolor=lightgray]" if z in fixed else ""
        lines.append(f'  "{_label(z)}"{style};')
    for z, w in _mobius_edges(g):
        lines.append(f'  "{_label(z)}" -> "{_label(w)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _svg_graph(g: SymplecticMatrix) -> str:
    """Circular layout, arrows drawn chord-wise; fixed points get a double
    ring.  Self-contained: no external layout engine."""
    pts = projective_line(g.p)
    fixed = set(fixed_points(g))
    size, radius, node_r = 480, 190, 16
    cx = cy = size / 2
    pos = {}
    for i, z in enumerate(pts):
        ang = 2 * math.pi * i / len(pts) - math.pi / 2
        pos[z] = (cx + radius * math.cos(ang), cy + radius * math.sin(ang))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
           '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
           'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
           '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>']
    for z, w in _mobius_edges(g):
        (x1, y1), (x2, y2) = pos[z], pos[w]
        if z == w:
            out.append(f'<circle cx="{x1:.1f}" cy="{y1 - node_r - 8:.1f}" r="8" '
                       'fill="none" stroke="black"/>')
            continue
        d = math.hypot(x2 - x1, y2 - y1)
        ux, uy = (x2 - x1) / d, (y2 - y1) / d
        out.append(f'<line x1="{x1 + ux * node_r:.1f}" y1="{y1 + uy * node_r:.1f}" '
                   f'x2="{x2 - ux * (node_r + 4):.1f}" y2="{y2 - uy * (node_r + 4):.1f}" '
                   'stroke="black" marker-end="url(#arrow)"/>')
    for z, (x, y) in pos.items():
        fill = "lightgray" if z in fixed else "white"
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{node_r}" '
                   f'fill="{fill}" stroke="black"/>')
        if z in fixed:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{node_r + 3}" '
                       'fill="none" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{y + 4:.1f}" text-anchor="middle" '
                   f'font-size="12">{_label(z)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_mobius_plot(args) -> int:
    check_modulus(args.p)
    try:
        a, b, c, d = (int(v) for v in args.matrix.split(","))
    except ValueError as err:
        raise ZkitError(f"--matrix expects a,b,c,d integers: {err}") from err
    g = SymplecticMatrix(a, b, c, d, args.p)
    text = _svg_graph(g) if args.format == "svg" else _dot_graph(g)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def cmd_selftest(args) -> int:
    primes = [int(x) for x in args.primes.split(",")]
    rng = np.random.default_rng(args.seed)
    checks = {}

    def run(name, fn):
        try:
            fn()
            checks[name] = {"pass": True}
        except Exception as err:  # noqa: BLE001 - certificate harness
            checks[name] = {"pass": False, "error": f"{type(err).__name__}: {err}"}

    def identities(p):
        h = half_exponent(p)
        w = np.exp(2j * np.pi / p)
        gs = enumerate_order3(p)
        m = magic_gate(p).matrix
        for _ in range(20):
            q = rng.integers(p, size=2)
            r = rng.integers(p, size=2)
            lhs = displacement(p, *q).matrix @ displacement(p, *r).matrix
            ph = w ** ((h * (r[0] * q[1] - r[1] * q[0])) % p)
            rhs = ph * displacement(p, q[0] + r[0], q[1] + r[1]).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-9, "composition rule"
            g = gs[rng.integers(len(gs))]
            u = symplectic_unitary(g).matrix
            cov = u @ displacement(p, *q).matrix @ u.conj().T
            assert np.max(np.abs(
                cov - displacement(p, *g.apply(tuple(q))).matrix)) < 1e-9, "covariance"
            lhs = m @ displacement(p, *q).matrix @ m.conj().T
            gm = SymplecticMatrix(1, 0, (6 * q[0]) % p, 1, p)
            rhs = (w ** ((-h * q[0] ** 3) % p)) \
                * displacement(p, q[0], (q[1] + 3 * q[0] ** 2) % p).matrix \
                @ symplectic_unitary(gm).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-9, "magic conjugation"

    def order3_count(p):
        expected = p * (p + 1) if p % 3 == 1 else p * (p - 1)
        assert len(enumerate_order3(p)) == expected, "order-3 count"

    def stabilizer_mana(p):
        for ray in mub.ivanovic_mub(p).rays():
            assert abs(magic.mana(magic.DensityMatrix.pure(ray))) <= 1e-9

    def zauner_representative(p):
        sub = zauner.zauner_projector(zauner.representative_zauner(p))
        assert sub.rank == (p - 1) // 3 + 1

    def real_structure(p):
        assert reality.check_real_structure(p)["pass"]

    for p in primes:
        check_modulus(p)
        run(f"identities_p{p}", lambda p=p: identities(p))
        run(f"mub_unbiased_p{p}", lambda p=p: mub.ivanovic_mub(p).verify(1e-9))
        run(f"order3_count_p{p}", lambda p=p: order3_count(p))
        run(f"stabilizer_mana_zero_p{p}", lambda p=p: stabilizer_mana(p))
        if p % 3 == 1:
            run(f"zauner_representative_p{p}", lambda p=p: zauner_representative(p))
            run(f"real_structure_p{p}", lambda p=p: real_structure(p))

    passed = all(c["pass"] for c in checks.values())
    _emit({"command": "selftest", "primes": primes, "pass": passed,
           "checks": checks})
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub, out_default=None):
    sub.add_argument("--p", type=int, required=True, help="odd prime > 3")
    sub.add_argument("--out", default=out_default, help="output file/directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zkit",
        description="Clifford/MUB toolkit for odd prime dimensions")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("mub", help="emit a MUB family plus certificate")
    _add_common(s)
    s.add_argument("--family", choices=["ivanovic", "alltop"], default="ivanovic")
    s.add_argument("--x", type=int, default=1, help="magic exponent (alltop)")
    s.add_argument("--conjugator", choices=["identity", "fourier"],
                   default="identity")
    s.set_defaults(fn=cmd_mub)

    s = subs.add_parser("alltop", help="emit an Alltop MUB family")
    _add_common(s)
    s.add_argument("--x", type=int, default=1)
    s.add_argument("--conjugator", choices=["identity", "fourier"],
                   default="identity")
    s.set_defaults(fn=cmd_alltop)

    s = subs.add_parser("config", help="point/subspace configuration certificates")
    _add_common(s)
    s.add_argument("--tol", type=float, default=zauner.MEMBER_TOL)
    s.add_argument("--threads", type=int, default=None,
                   help="worker threads (ZKIT_THREADS overrides default)")
    s.add_argument("--allow-slow", action="store_true")
    s.add_argument("--include-incidence", action="store_true",
                   help="embed the run-length incidence bitmap")
    s.set_defaults(fn=cmd_config)

    s = subs.add_parser("orbits", help="Clifford orbits of the Alltop vectors")
    _add_common(s)
    s.add_argument("--with-mana", action=argparse.BooleanOptionalAction,
                   default=True)
    s.add_argument("--rays", action="store_true",
                   help="also write each orbit's rays (needs --out)")
    s.set_defaults(fn=cmd_orbits)

    s = subs.add_parser("zauner", help="representative order-3 unitary report")
    _add_common(s)
    s.add_argument("--enumerate", action="store_true",
                   help="also count all Zauner subspaces")
    s.set_defaults(fn=cmd_zauner)

    s = subs.add_parser("mana", help="orbit mana table, or score a state file")
    _add_common(s)
    s.add_argument("--report", choices=["json", "csv"], default="json")
    s.add_argument("--state", default=None, help="state file to score")
    s.set_defaults(fn=cmd_mana)

    s = subs.add_parser("maximize-mana", help="random-restart mana maximizer")
    _add_common(s)
    s.add_argument("--restarts", type=int, default=50)
    s.add_argument("--iterations", type=int, default=200)
    s.add_argument("--kicks", type=int, default=60)
    s.add_argument("--seed", type=int, default=magic.DEFAULT_SEED)
    s.set_defaults(fn=cmd_maximize_mana)

    s = subs.add_parser("sic", help="SIC fiducial tools")
    sic_subs = s.add_subparsers(dest="sic_command", required=True)
    sv = sic_subs.add_parser("verify", help="verify a fiducial file")
    _add_common(sv)
    sv.add_argument("--fiducial", required=True)
    sv.set_defaults(fn=cmd_sic_verify)

    s = subs.add_parser("mobius-plot", help="projective-line action diagram")
    _add_common(s)
    s.add_argument("--matrix", required=True, help="a,b,c,d entries mod p")
    s.add_argument("--format", choices=["dot", "svg"], default="dot")
    s.set_defaults(fn=cmd_mobius_plot)

    s = subs.add_parser("selftest", help="fast certificate battery")
    s.add_argument("--primes", default="5,7")
    s.add_argument("--seed", type=int, default=magic.DEFAULT_SEED)
    s.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ZkitError as err:
        sys.stderr.write(dumps_canonical(
            {"error": type(err).__name__, "message": str(err)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
