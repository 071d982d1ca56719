"""The superposition product on cohomology of configuration-space models.

sup_{n,m} restricts a cross product class on C_n x C_m to the coloured model
C_{n,m} and transfers it along the colour-forgetting cover to C_{n+m}.  The
restriction is computed directly on coloured cells, so the (much larger)
product complex is only built when asked for as a cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .config_models import ConfigSpaces, _split_key
from .core.cohomology import CohomologyClass, cross_cochain, unit_class
from .core.complexes import ComplexError
from .covers import cohomology_basis, transfer_cochain
from .formal_sums import (
    ColoredConfig,
    FormalSum,
    LabelledConfig,
    X0,
    all_configs,
    color_forget_presentation,
    cover_inverse,
    phi_component,
)
from .report import Report


def unit(spaces: ConfigSpaces, n: int) -> CohomologyClass:
    return unit_class(spaces.unordered(n))


def _check_class(spaces, n, alpha):
    if alpha.complex is not spaces.unordered(n):
        raise ComplexError(f"class does not live on the {n}-point model of {spaces.name}")


def restricted_cross(spaces: ConfigSpaces, n: int, m: int, alpha: CohomologyClass,
                     beta: CohomologyClass) -> CohomologyClass:
    """i*(alpha x beta) as a cochain on the coloured model C_{n,m}."""
    _check_class(spaces, n, alpha)
    _check_class(spaces, m, beta)
    X = spaces.colored(n, m)
    p, q = alpha.degree, beta.degree
    k = p + q
    ia, ib = alpha.complex.index[p], beta.complex.index[q]
    out = [0] * X.n_cells(k)
    for t, key in enumerate(X.cells[k] if k < len(X.cells) else []):
        (blue, red), sign = _split_key(key)
        a = ia.get(blue)
        if a is None:
            continue
        b = ib.get(red)
        if b is None:
            continue
        out[t] = sign * alpha.values[a] * beta.values[b]
    return CohomologyClass(X, k, out)


def sup(spaces: ConfigSpaces, n: int, m: int, alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """sup_{n,m}(alpha, beta) = p_!(i*(alpha x beta)) on the (n+m)-point model."""
    return transfer_cochain(spaces.cover(n, m), restricted_cross(spaces, n, m, alpha, beta))


def sup_via_product(spaces: ConfigSpaces, n: int, m: int, alpha: CohomologyClass,
                    beta: CohomologyClass) -> CohomologyClass:
    """Same product, built through the explicit product complex and inclusion map."""
    P = spaces.product(n, m)
    x = cross_cochain(P, alpha, beta)
    inc = spaces.inclusion(n, m)
    restricted = CohomologyClass(inc.source, x.degree, inc.pullback(x.degree, x.values))
    return transfer_cochain(spaces.cover(n, m), restricted)


@dataclass
class SupTable:
    """Products of basis classes for all n + m <= max_points.

    Basis classes are identified by (n, degree, index); ``l`` only affects
    the reported shifted degree ``degree + 2*l*n``.
    """

    spaces: ConfigSpaces
    max_points: int
    max_degree: int
    l: int = 1
    bases: dict = field(default_factory=dict)
    entries: dict = field(default_factory=dict)

    def shifted_degree(self, n: int, degree: int) -> int:
        return degree + 2 * self.l * n

    def basis(self, n: int) -> list:
        if n not in self.bases:
            self.bases[n] = cohomology_basis(self.spaces.unordered(n), self.max_degree)
        return self.bases[n]

    def labels(self, n: int) -> list:
        """(n, degree, index within degree) for every basis class."""
        out, seen = [], {}
        for a in self.basis(n):
            i = seen.get(a.degree, 0)
            seen[a.degree] = i + 1
            out.append((n, a.degree, i))
        return out

    def product(self, n, m, alpha, beta) -> CohomologyClass:
        return sup(self.spaces, n, m, alpha, beta)

    def fill(self):
        for n in range(self.max_points + 1):
            for m in range(self.max_points + 1 - n):
                A, B = self.basis(n), self.basis(m)
                la, lb = self.labels(n), self.labels(m)
                for (i, a), (j, b) in itertools.product(enumerate(A), enumerate(B)):
                    if a.degree + b.degree > self.max_degree:
                        continue
                    self.entries[(la[i], lb[j])] = self.product(n, m, a, b).coordinates()
        return self

    def rows(self) -> list:
        """Tab-separable rows: label a, label b, shifted degree, coordinates."""
        out = []
        for (la, lb), coords in sorted(self.entries.items()):
            deg = self.shifted_degree(la[0] + lb[0], la[1] + lb[1])
            out.append((la, lb, deg, coords))
        return out


def sup_table(spaces: ConfigSpaces, max_points: int, max_degree: int | None = None, l: int = 1) -> SupTable:
    """Fill the table; ``max_degree`` defaults to the highest degree the models support."""
    if max_degree is None:
        max_degree = (spaces.max_dim - 1) if spaces.max_dim is not None else 2 * spaces.K.dim * max_points
    return SupTable(spaces, max_points, max_degree, l).fill()


def verify_unit_laws(table: SupTable) -> Report:
    sp = table.spaces
    rep = Report(f"sup-unit[{sp.name}]")
    one = unit(sp, 0)
    for n in range(table.max_points + 1):
        for a in table.basis(n):
            rep.checked += 1
            if sup(sp, n, 0, a, one) != a or sup(sp, 0, n, one, a) != a:
                rep.fail((n, a.degree, a.coordinates()))
    return rep


def verify_divided_powers(spaces: ConfigSpaces, max_points: int, release: bool = True) -> Report:
    """sup(1_n, 1_m) == C(n+m, n) * 1_{n+m}.

    Coloured models are released after use unless ``release`` is False.
    """
    rep = Report(f"divided-powers[{spaces.name}]")
    for n in range(max_points + 1):
        for m in range(max_points + 1 - n):
            rep.checked += 1
            lhs = sup(spaces, n, m, unit(spaces, n), unit(spaces, m))
            rhs = comb(n + m, n) * unit(spaces, n + m)
            if lhs != rhs:
                rep.fail((n, m, lhs.coordinates(), rhs.coordinates()))
            if release:
                spaces.release(n, m)
    return rep


def verify_ring_axioms(table: SupTable, max_points: int | None = None) -> Report:
    """Unit laws, graded commutativity and associativity on tabulated classes."""
    sp = table.spaces
    top = table.max_points if max_points is None else max_points
    D = table.max_degree
    rep = Report(f"ring-axioms[{sp.name}]")
    rep.details["unit"] = verify_unit_laws(table).passed
    if not rep.details["unit"]:
        rep.fail("unit law")
    comm = assoc = 0
    for n in range(top + 1):
        for m in range(top + 1 - n):
            for a, b in itertools.product(table.basis(n), table.basis(m)):
                if a.degree + b.degree > D:
                    continue
                comm += 1
                lhs = sup(sp, n, m, a, b)
                sign = -1 if (a.degree * b.degree) % 2 else 1
                rhs = sign * sup(sp, m, n, b, a)
                if lhs != rhs:
                    rep.fail(("commutativity", n, a.degree, m, b.degree))
            for k in range(top + 1 - n - m):
                for a, b, c in itertools.product(table.basis(n), table.basis(m), table.basis(k)):
                    if a.degree + b.degree + c.degree > D:
                        continue
                    assoc += 1
                    left = sup(sp, n + m, k, sup(sp, n, m, a, b), c)
                    right = sup(sp, n, m + k, a, sup(sp, m, k, b, c))
                    if left != right:
                        rep.fail(("associativity", (n, a.degree), (m, b.degree), (k, c.degree)))
    rep.details.update(commutativity=comm, associativity=assoc)
    rep.checked = comm + assoc
    return rep


def _tilde_i(c: ColoredConfig):
    blue, red = c.blocks
    return (blue, red)


def verify_phi_factorization(max_total: int = 4, labels=(None, "a", X0)) -> Report:
    """phi^{(n+m,n,m)} == SP(i~) o (colour-forget)^{-1} on every configuration of size n+m.

    For m == 0 the smash with D_0 is the identity, so the left side is xi itself
    and i~ keeps the blue block.
    """
    rep = Report(f"phi-factorization[n+m<={max_total}]")
    configs = all_configs(max_total, labels)
    by_size = {}
    for xi in configs:
        by_size.setdefault(len(xi), []).append(xi)
    for total in range(1, max_total + 1):
        for n in range(total + 1):
            m = total - n
            domain = by_size.get(total, [])
            inverse = cover_inverse(color_forget_presentation(domain, n, m), comb(total, n),
                                    base=domain)
            for xi in domain:
                rep.checked += 1
                if m == 0:
                    lhs = FormalSum([xi])
                    rhs = inverse(xi).map(lambda c: c.blocks[0])
                elif n == 0:
                    lhs = FormalSum([xi])
                    rhs = inverse(xi).map(lambda c: c.blocks[1])
                else:
                    lhs = phi_component(total, n, m, xi)
                    rhs = inverse(xi).map(_tilde_i)
                if lhs != rhs:
                    rep.fail((n, m, xi))
    return rep


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return "INFINITY"


INFINITY = _Infinity()
"""The added point of a one-point compactification; absorbing for superposition."""


def superpose_points(s, t):
    """s u t for disjoint finite point sets, INFINITY otherwise."""
    if s is INFINITY or t is INFINITY:
        return INFINITY
    s, t = frozenset(s), frozenset(t)
    if s & t:
        return INFINITY
    return s | t


def separate_colors(s, t):
    """i^inf: (s, t) -> the coloured configuration (s, t), or INFINITY off its image."""
    if s is INFINITY or t is INFINITY:
        return INFINITY
    s, t = frozenset(s), frozenset(t)
    if s & t:
        return INFINITY
    return ColoredConfig((LabelledConfig(s), LabelledConfig(t)))


def forget_colors(c):
    """p^inf: a coloured configuration to its underlying point set."""
    if c is INFINITY:
        return INFINITY
    return c.forget().points


def verify_mu_factorization(ground, n: int, m: int) -> Report:
    """mu_{n,m} == p^inf o i^inf on all pairs of n- and m-subsets (and INFINITY)."""
    ground = sorted(ground)
    rep = Report(f"mu-factorization[|G|={len(ground)},n={n},m={m}]")
    S = [frozenset(c) for c in itertools.combinations(ground, n)] + [INFINITY]
    T = [frozenset(c) for c in itertools.combinations(ground, m)] + [INFINITY]
    to_inf = 0
    for s, t in itertools.product(S, T):
        rep.checked += 1
        lhs = superpose_points(s, t)
        rhs = forget_colors(separate_colors(s, t))
        if lhs != rhs:
            rep.fail((s, t))
        disjoint = s is not INFINITY and t is not INFINITY and not (s & t)
        if (lhs is INFINITY) == disjoint:
            rep.fail(("infinity does not characterise overlap", s, t))
        if s is not INFINITY and t is not INFINITY and lhs is INFINITY:
            to_inf += 1
    rep.details["finite_pairs_to_infinity"] = to_inf
    return rep
