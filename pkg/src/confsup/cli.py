"""Command-line front end.

Exit codes: 0 everything passed, 1 a property was violated, 2 bad input or a
resource guard was hit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .config_models import DEFAULT_GUARD, ConfigSpaces, ConfigModel, ordered_model
from .core.complexes import ComplexError, ResourceError, load_complex
from .report import Report

SUITES = ("formal", "transfer", "lemma42", "ring", "divided-powers", "models", "phi-factor", "mu-factor", "all")


class InputError(Exception):
    pass


def load(spec: str):
    """A complex file path, or the name of a built-in fixture."""
    path = Path(spec)
    if path.exists():
        return load_complex(path)
    try:
        return fixtures.named_complex(spec)
    except KeyError:
        raise InputError(f"no such file or fixture: {spec} (fixtures: {', '.join(fixtures.NAMES)})") from None


def _emit(rows, fmt: str, out):
    for row in rows:
        cells = [str(x) for x in row]
        if fmt == "tsv":
            out.write("\t".join(cells) + "\n")
        else:
            out.write("  ".join(cells) + "\n")


def _model(args, K, max_dim=None):
    if args.ordered:
        return ordered_model(K, args.n, subdiv=args.subdiv, max_dim=max_dim, guard=args.guard)
    spaces = ConfigSpaces(K, subdiv=args.subdiv, max_dim=max_dim, guard=args.guard)
    if args.m is None:
        return spaces.model(args.n)
    return spaces.model(args.n, args.m)


def cmd_build_model(args, out) -> int:
    K = load(args.complex)
    model = _model(args, K)
    fv = model.f_vector
    rows = [
        ("model", model.name),
        ("subdiv", args.subdiv),
        ("cells", ",".join(map(str, fv))),
        ("chi", model.euler_characteristic()),
    ]
    if not args.count_only:
        betti = [b for b, _ in (model.complex.homology(k) for k in range(model.complex.dim + 1))]
        rows.append(("betti", ",".join(map(str, betti))))
    _emit(rows, args.format, out)
    return 0


def cmd_betti(args, out) -> int:
    K = load(args.complex)
    model = _model(args, K)
    X = model.complex
    parts = []
    for k in range(X.dim + 1):
        b, t = X.homology(k)
        parts.append(f"b{k}={b}")
        if t:
            parts.append(f"t{k}=" + ",".join(map(str, t)))
    while len(parts) > 1 and parts[-1].endswith("=0") and parts[-1].startswith("b"):
        parts.pop()
    if args.format == "tsv":
        out.write("\t".join(parts) + "\n")
    else:
        out.write(" ".join(parts) + "\n")
    return 0


def _sup_spaces(args, K, max_degree):
    return ConfigSpaces(K, subdiv=args.subdiv, max_dim=max_degree + 1, guard=args.guard)


def cmd_sup(args, out) -> int:
    from .superposition import SupTable, sup

    K = load(args.complex)
    m = 0 if args.m is None else args.m
    max_degree = args.max_degree
    spaces = _sup_spaces(args, K, max_degree)
    _guard_models(spaces, [(args.n,), (m,), (args.n + m,), (args.n, m)], args.guard)
    table = SupTable(spaces, args.n + m, max_degree, l=args.l)
    A, B = table.basis(args.n), table.basis(m)
    la, lb = table.labels(args.n), table.labels(m)
    if args.class_a is not None or args.class_b is not None:
        ia = args.class_a if args.class_a is not None else 0
        ib = args.class_b if args.class_b is not None else 0
        if not (0 <= ia < len(A) and 0 <= ib < len(B)):
            raise InputError(f"class index out of range ({len(A)} and {len(B)} basis classes)")
        pairs = [(ia, ib)]
    else:
        pairs = [(i, j) for i in range(len(A)) for j in range(len(B))]
    if len(pairs) == 1 and args.class_a is not None:
        i, j = pairs[0]
        coords = sup(spaces, args.n, m, A[i], B[j]).coordinates()
        _emit([coords], args.format, out)
        return 0
    rows = []
    for i, j in pairs:
        a, b = A[i], B[j]
        if a.degree + b.degree > max_degree:
            continue
        coords = sup(spaces, args.n, m, a, b).coordinates()
        deg = table.shifted_degree(args.n + m, a.degree + b.degree)
        rows.append(("%d:%d:%d" % la[i], "%d:%d:%d" % lb[j], deg, " ".join(map(str, coords)) or "0"))
    _emit(rows, args.format, out)
    return 0


def _guard_models(spaces: ConfigSpaces, signatures, guard: int):
    total = 0
    sizes = []
    for sig in signatures:
        c = spaces.model(*sig).total_cells()
        total += c
        sizes.append(f"C{','.join(map(str, sig))}={c}")
    if total > guard:
        raise ResourceError(f"models need {total} cells in total ({' '.join(sizes)}); guard is {guard}")


def _ring_signatures(max_points: int):
    sigs = set()
    for n in range(max_points + 1):
        sigs.add((n,))
        for m in range(max_points + 1 - n):
            sigs.add((n, m))
    return sorted(sigs)


def suite_formal(args):
    from .formal_sums import verify_component_reassembly, verify_components, verify_psi_sigma_identity

    return [
        verify_psi_sigma_identity(args.max_size),
        verify_components(max(6, args.max_size)),
        verify_component_reassembly(args.max_size),
    ]


def suite_transfer(args):
    from .covers import verify_projection_formula, verify_transfer_chain_map, verify_transfer_degree

    reports = []
    for name, p in fixtures.covers().items():
        for r in (verify_transfer_degree(p), verify_transfer_chain_map(p, seed=args.seed),
                  verify_projection_formula(p)):
            r.name = f"{r.name}:{name}"
            reports.append(r)
    return reports


def suite_lemma42(args):
    from .thom import trivial_bundle, verify_lemma42_square, verify_thom_isomorphism

    reports = []
    covers = fixtures.covers()
    bundles = {}
    for name, p in covers.items():
        if p.base.name not in ("circle3", "interval"):
            continue
        b = bundles.setdefault(p.base.name, trivial_bundle(p.base))
        r = verify_lemma42_square(b, p)
        r.name = f"{r.name}:{name}"
        reports.append(r)
    for b in bundles.values():
        reports.append(b.check_fibers())
        reports.append(verify_thom_isomorphism(b))
    return reports


def _spaces_for(args, max_dim):
    names = [args.complex] if args.complex else ["interval", "disk"]
    return [ConfigSpaces(load(nm), subdiv=args.subdiv, max_dim=max_dim, guard=args.guard) for nm in names]


def suite_ring(args):
    from .superposition import sup_table, verify_ring_axioms

    reports = []
    for spaces in _spaces_for(args, 2):
        _guard_models(spaces, _ring_signatures(args.max_points), args.guard)
        reports.append(verify_ring_axioms(sup_table(spaces, args.max_points, l=args.l)))
    return reports


def suite_divided_powers(args):
    from .superposition import verify_divided_powers

    reports = []
    for spaces in _spaces_for(args, 1):
        sigs = _ring_signatures(args.max_points)
        biggest = max(spaces.model(*s).total_cells() for s in sigs)
        if biggest > args.guard:
            raise ResourceError(f"largest model needs {biggest} cells; guard is {args.guard}")
        reports.append(verify_divided_powers(spaces, args.max_points))
    return reports


def suite_models(args):
    from .config_models import euler_oracle, unordered_model

    K = load(args.complex) if args.complex else fixtures.disk()
    rep = Report(f"euler-oracle[{K.name}]")
    if K.dim % 2:
        rep.details["skipped"] = "odd-dimensional complex"
        return [rep]
    chi = K.euler_characteristic()
    for n in range(1, args.max_points + 1):
        model = ordered_model(K, n, subdiv=args.subdiv, guard=args.guard)
        rep.checked += 1
        if model.euler_characteristic() != euler_oracle(chi, n):
            rep.fail((n, model.euler_characteristic(), euler_oracle(chi, n)))
    stab = Report(f"subdivision-stability[{K.name}]")
    for n in range(1, min(args.max_points, 2) + 1):
        stab.checked += 1
        a = unordered_model(K, n, subdiv=args.subdiv, guard=args.guard)
        b = unordered_model(K, n, subdiv=args.subdiv + 1, guard=args.guard)
        ha = [a.complex.homology(k) for k in range(a.complex.dim + 1)]
        hb = [b.complex.homology(k) for k in range(b.complex.dim + 1)]
        while ha and ha[-1] == (0, []):
            ha.pop()
        while hb and hb[-1] == (0, []):
            hb.pop()
        if ha != hb:
            stab.fail((n, ha, hb))
    return [rep, stab]


def suite_phi(args):
    from .superposition import verify_phi_factorization

    return [verify_phi_factorization(args.max_size)]


def suite_mu(args):
    from .superposition import verify_mu_factorization

    reports = []
    for g in range(args.max_ground + 1):
        for n in range(g + 1):
            for m in range(g + 1):
                reports.append(verify_mu_factorization(range(g), n, m))
    rep = Report(f"mu-factorization[|G|<={args.max_ground}]")
    for r in reports:
        rep.checked += r.checked
        if not r.passed:
            rep.fail(r.counterexample)
    return [rep]


RUNNERS = {
    "formal": suite_formal,
    "transfer": suite_transfer,
    "lemma42": suite_lemma42,
    "ring": suite_ring,
    "divided-powers": suite_divided_powers,
    "models": suite_models,
    "phi-factor": suite_phi,
    "mu-factor": suite_mu,
}


def cmd_verify(args, out) -> int:
    names = [s for s in SUITES if s != "all"] if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(RUNNERS[name](args))
    for r in reports:
        out.write(r.line() + "\n")
    return 0 if all(reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="confsup", description="Superposition products on configuration-space models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_complex=True):
        sp.add_argument("--complex", required=need_complex, help="complex file or fixture name")
        sp.add_argument("--subdiv", type=int, default=2, help="barycentric subdivisions before modelling")
        sp.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="maximum number of cells")
        sp.add_argument("--format", choices=("tsv", "text"), default="tsv")
        sp.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("build-model", help="cell counts, Euler characteristic and Betti numbers of a model")
    common(b)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int)
    b.add_argument("--ordered", action="store_true")
    b.add_argument("--count-only", action="store_true", help="skip homology")
    b.set_defaults(func=cmd_build_model)

    t = sub.add_parser("betti", help="Betti numbers and torsion of a model")
    common(t)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--m", type=int)
    t.add_argument("--ordered", action="store_true")
    t.set_defaults(func=cmd_betti)

    s = sub.add_parser("sup", help="superposition products of basis classes")
    common(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--class-a", type=int)
    s.add_argument("--class-b", type=int)
    s.add_argument("--max-degree", type=int, default=1)
    s.add_argument("--l", type=int, default=1, help="regrading parameter for reported degrees")
    s.set_defaults(func=cmd_sup)

    v = sub.add_parser("verify", help="run a verification suite")
    common(v, need_complex=False)
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--max-size", type=int, default=4)
    v.add_argument("--max-points", type=int, default=3)
    v.add_argument("--max-ground", type=int, default=6)
    v.add_argument("--l", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def _validate(args):
    if args.guard <= 0:
        raise InputError("--guard must be positive")
    if args.subdiv < 0:
        raise InputError("--subdiv must be non-negative")
    for name in ("n", "m", "max_size", "max_points", "max_ground", "max_degree"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise InputError(f"--{name.replace('_', '-')} must be non-negative")
    if getattr(args, "ordered", False) and getattr(args, "m", None) is not None:
        raise InputError("--ordered and --m cannot be combined")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args, out)
    except (InputError, ComplexError, ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
