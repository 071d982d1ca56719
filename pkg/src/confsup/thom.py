"""Disk/sphere bundle pairs over simplicial bases, Thom classes and transfers.

A bundle pair is a simplicial complex D with a subcomplex S and a simplicial
projection D -> B.  Each base vertex v carries an oriented fiber: a relative
k-cycle z_v of (pi^-1(v), pi^-1(v) n S).  The Thom class is a relative
k-cocycle taking the value 1 on every z_v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core.cohomology import CohomologyClass, relative_cup
from .core.complexes import ComplexError, RelativeComplex, SimplicialComplex, permutation_sign, simplicial_product
from .core.linalg import determinant, solve_integer
from .covers import CoveringMap, cohomology_basis, transfer_cochain
from .report import Report


class BundleError(ComplexError):
    """Bundle data are inconsistent or admit no Thom class."""


def cube(k: int) -> SimplicialComplex:
    """Triangulated [0,1]^k with vertices 0/1 tuples."""
    edge = SimplicialComplex([(0,), (1,), (0, 1)], name="I")
    F = SimplicialComplex([((0,),), ((1,),), ((0,), (1,))], name="I")
    for _ in range(k - 1):
        F = simplicial_product(F, edge)
        F = SimplicialComplex(
            (tuple(v[0] + (v[1],) for v in s) for s in F.simplices()), name="I^k"
        )
    return F


def _cube_boundary(s) -> bool:
    """Whether a simplex of the cube lies in one of its facets."""
    k = len(s[0])
    for i in range(k):
        vals = {v[i] for v in s}
        if len(vals) == 1:
            return True
    return False


@dataclass
class BundlePair:
    """(D, S) over ``base`` with vertex projection and fiber orientation cycles.

    ``fiber_cycles[v]`` is a dict {k-simplex of D: coefficient}.  ``fiber``
    is the model fiber when the pair is a product, used to build pullbacks.
    """

    base: SimplicialComplex
    disk: SimplicialComplex
    sphere: SimplicialComplex
    projection: dict
    rank: int
    fiber_cycles: dict
    fiber: SimplicialComplex | None = None
    fiber_boundary: SimplicialComplex | None = None
    _thom: CohomologyClass | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.disk.is_subcomplex(self.sphere):
            raise BundleError("sphere bundle is not a subcomplex of the disk bundle")
        for s in self.disk.simplices():
            img = {self.projection[v] for v in s}
            key = tuple(sorted(img))
            if key not in self.base.index[len(key) - 1]:
                raise BundleError(f"projection of {s!r} is not a simplex of the base")
        self.pair = self.disk.relative(self.sphere)

    def project(self, v):
        return self.projection[v]

    def fiber_pair(self, simplex) -> tuple:
        """(pi^-1(simplex), its part in S) as complexes."""
        verts = set(simplex)
        inside = [s for s in self.disk.simplices() if {self.projection[v] for v in s} <= verts]
        D = SimplicialComplex(inside, name=f"D|{simplex}")
        sph = set(self.sphere.simplices())
        S = SimplicialComplex([s for s in inside if s in sph], name=f"S|{simplex}")
        return D, S

    def check_fibers(self) -> Report:
        """Each fiber pair has H^k = Z; orientations agree along every base edge."""
        rep = Report("fiber-certificates")
        k = self.rank
        for (v,) in self.base.cells[0]:
            D, S = self.fiber_pair((v,))
            rel = D.relative(S)
            rep.checked += 1
            groups = [rel.cohomology(i) for i in range(len(rel.cells))]
            ok = all((g.rank, g.torsion) == ((1, []) if i == k else (0, [])) for i, g in enumerate(groups))
            if not ok:
                rep.fail(("fiber cohomology", v))
            z = self.fiber_cycles.get(v)
            if not z or not _is_relative_cycle(rel, k, z):
                rep.fail(("orientation cycle", v))
        if len(self.base.cells) > 1:
            for e in self.base.cells[1]:
                rep.checked += 1
                D, S = self.fiber_pair(e)
                rel = D.relative(S)
                diff = dict(self.fiber_cycles[e[0]])
                for s, c in self.fiber_cycles[e[1]].items():
                    diff[s] = diff.get(s, 0) - c
                if not _is_relative_boundary(rel, k, diff):
                    rep.fail(("orientations disagree along", e))
        return rep


def _is_relative_cycle(rel: RelativeComplex, k: int, chain: dict) -> bool:
    idx = rel.index[k]
    if any(s not in idx for s in chain):
        return False
    acc = {}
    for s, c in chain.items():
        for j, d in rel.boundary[k][idx[s]].items():
            acc[j] = acc.get(j, 0) + c * d
    return not any(acc.values())


def _is_relative_boundary(rel: RelativeComplex, k: int, chain: dict) -> bool:
    idx = rel.index[k]
    b = [0] * rel.n_cells(k)
    for s, c in chain.items():
        if s in idx:
            b[idx[s]] += c
    if not any(b):
        return True
    if k + 1 >= len(rel.cells) or not rel.cells[k + 1]:
        return False
    A = [[0] * rel.n_cells(k + 1) for _ in range(rel.n_cells(k))]
    for j, faces in enumerate(rel.boundary[k + 1]):
        for i, c in faces.items():
            A[i][j] = c
    return solve_integer(A, b) is not None


def trivial_bundle(base: SimplicialComplex, rank: int = 1, name: str = "") -> BundlePair:
    """B x [0,1]^k over B, with S = B x (boundary of the cube)."""
    if rank < 1:
        raise BundleError("rank must be positive")
    F = cube(rank)
    dF = F.subcomplex([s for s in F.simplices() if _cube_boundary(s)], name="dI^k")
    D = simplicial_product(base, F, name=name or f"{base.name} x I^{rank}")
    S = D.subcomplex([s for s in D.simplices() if _cube_boundary([v[1] for v in s])],
                     name=f"{base.name} x dI^{rank}")
    proj = {v: v[0] for (v,) in D.cells[0]}
    gen = _cube_fundamental_cycle(F, rank)
    cycles = {b: {tuple((b, f) for f in s): c for s, c in gen.items()} for (b,) in base.cells[0]}
    return BundlePair(base, D, S, proj, rank, cycles, fiber=F, fiber_boundary=dF)


def _cube_fundamental_cycle(F: SimplicialComplex, k: int) -> dict:
    """Top simplices of the cube with signs making a relative cycle, positive on the first."""
    dF = [s for s in F.simplices() if _cube_boundary(s)]
    rel = F.relative(F.subcomplex(dF))
    top = rel.cells[k]
    # monotone paths: sign of the coordinate permutation
    out = {}
    for s in top:
        order = []
        for a, b in zip(s, s[1:]):
            order.append(next(i for i in range(k) if a[i] != b[i]))
        sign = 1
        for i, j in itertools.combinations(range(k), 2):
            if order[i] > order[j]:
                sign = -sign
        out[s] = sign
    if not _is_relative_cycle(rel, k, out):
        raise BundleError("could not orient the cube")
    return out


def _pullback_base_cochain(b: BundlePair, alpha: CohomologyClass) -> list:
    """pi*(alpha) on D: alpha of the image simplex, zero on collapsed simplices."""
    k = alpha.degree
    idx = b.base.index[k]
    out = []
    for s in b.disk.cells[k]:
        img = [b.projection[v] for v in s]
        if len(set(img)) != len(img):
            out.append(0)
            continue
        key = tuple(sorted(img))
        sign = 1 if list(img) == list(key) else permutation_sign(img)
        out.append(sign * alpha.values[idx[key]])
    return out


def thom_class(b: BundlePair) -> CohomologyClass:
    """A relative k-cocycle equal to 1 on every oriented fiber, by exact solve."""
    if b._thom is not None:
        return b._thom
    rel, k = b.pair, b.rank
    n = rel.n_cells(k)
    idx = rel.index[k]
    rows, rhs = [], []
    if k + 1 < len(rel.cells):
        for faces in rel.boundary[k + 1]:
            row = [0] * n
            for i, c in faces.items():
                row[i] = c
            rows.append(row)
            rhs.append(0)
    for v, z in sorted(b.fiber_cycles.items()):
        row = [0] * n
        for s, c in z.items():
            row[idx[s]] += c
        rows.append(row)
        rhs.append(1)
    sol = solve_integer(rows, rhs, ncols=n)
    if sol is None:
        raise BundleError("no relative cocycle is a generator on every fiber (orientation or model error)")
    b._thom = CohomologyClass(rel, k, sol)
    return b._thom


def thom_class_unique(b: BundlePair) -> bool:
    """H^k(D, S) -> Z^{fibers} (evaluation on orientation cycles) is injective with torsion-free source.

    Then a cocycle vanishing on all fibers is a coboundary, so the Thom class
    is determined by the orientations.
    """
    rel, k = b.pair, b.rank
    grp = rel.cohomology(k)
    if grp.torsion:
        return False
    idx = rel.index[k]
    cols = []
    for g in grp.generators():
        cols.append([sum(c * g.values[idx[s]] for s, c in z.items()) for _, z in sorted(b.fiber_cycles.items())])
    if not cols:
        return not b.fiber_cycles
    from .core.linalg import smith_normal_form

    snf = smith_normal_form([list(r) for r in zip(*cols)], transforms=False)
    return snf.rank == len(cols)


def thom_iso(b: BundlePair, alpha: CohomologyClass) -> CohomologyClass:
    """alpha -> pi*(alpha) cup u, a relative class of degree |alpha| + k."""
    if alpha.complex is not b.base:
        raise ComplexError("class does not live on the bundle's base")
    u = thom_class(b)
    pa = CohomologyClass(b.disk, alpha.degree, _pullback_base_cochain(b, alpha))
    return relative_cup(b.pair, pa, u)


def verify_thom_isomorphism(b: BundlePair) -> Report:
    """H^i(B) and H^{i+k}(D, S) agree and thom_iso carries a basis to a basis."""
    rep = Report(f"thom-isomorphism[{b.base.name}]")
    k = b.rank
    for i in range(len(b.base.cells)):
        rep.checked += 1
        src, dst = b.base.cohomology(i), b.pair.cohomology(i + k)
        if (src.rank, src.torsion) != (dst.rank, dst.torsion):
            rep.fail(("groups differ", i))
            continue
        images = [thom_iso(b, a).coordinates() for a in src.generators()]
        nt = len(src.torsion)
        free = [list(c[nt:]) for c in images[nt:]]
        if free and abs(determinant(free)) != 1:
            rep.fail(("not unimodular", i))
        for j, c in enumerate(images[:nt]):
            if c[j] % src.torsion[j] == 0 or any(c[nt:]):
                rep.fail(("torsion generator lost", i))
    if k + len(b.base.cells) < len(b.pair.cells):
        for i in range(len(b.base.cells) + k, len(b.pair.cells)):
            if b.pair.cohomology(i).n_generators:
                rep.fail(("extra relative cohomology", i))
    for i in range(k):
        if i < len(b.pair.cells) and b.pair.cohomology(i).n_generators:
            rep.fail(("relative cohomology below the rank", i))
    return rep


@dataclass
class BundleCover:
    """A pulled-back bundle pair together with the induced relative covering."""

    bundle: BundlePair
    cover: CoveringMap  # (D~, S~) -> (D, S)
    total_cover: CoveringMap  # D~ -> D


def pullback_bundle(b: BundlePair, p: CoveringMap) -> BundleCover:
    """p*E for a product pair E = B x F and a simplicial cover p: B~ -> B."""
    if b.fiber is None:
        raise BundleError("pullbacks are built only for product bundle pairs")
    if p.base is not b.base or not isinstance(p.total, SimplicialComplex):
        raise ComplexError("cover does not map onto the bundle's base")
    Bt = p.total
    vmap = {}
    for i, (v,) in enumerate(Bt.cells[0]):
        vmap[v] = b.base.cells[0][p.assignment[0][i]][0]
    pulled = trivial_bundle(Bt, b.rank, name=f"{Bt.name} x I^{b.rank}")
    D, Dt = b.disk, pulled.disk

    def lift_map(s):
        return tuple((vmap[x], f) for x, f in s)

    assign = []
    for k, level in enumerate(Dt.cells):
        row = []
        for s in level:
            img = lift_map(s)
            if list(img) != sorted(img) or len(set(img)) != len(img):
                raise BundleError(f"lifted map is not order preserving on {s!r}")
            row.append(D.index[k][img])
        assign.append(row)
    total_cover = CoveringMap(Dt, D, assign)
    rel, relt = b.pair, pulled.pair
    rassign = []
    for k, level in enumerate(relt.cells):
        rassign.append([rel.index[k][lift_map(s)] for s in level])
    cover = CoveringMap(relt, rel, rassign)
    # orientation cycles of the pullback are lifts of the base's cycles
    pulled.fiber_cycles = {
        x: {tuple((x, f) for _, f in s): c for s, c in b.fiber_cycles[vmap[x]].items()}
        for (x,) in Bt.cells[0]
    }
    pulled._thom = CohomologyClass(relt, b.rank, [thom_class(b).values[j] for j in rassign[b.rank]])
    return BundleCover(pulled, cover, total_cover)


def verify_pulled_thom_class(bc: BundleCover) -> Report:
    """The pulled-back cochain p*(u) is a Thom class of the pulled-back pair."""
    rep = Report("pullback-thom-class")
    b = bc.bundle
    u = b._thom
    rep.checked += 1
    if not u.is_cocycle():
        rep.fail("p*(u) is not a relative cocycle")
    idx = b.pair.index[b.rank]
    for v, z in sorted(b.fiber_cycles.items()):
        rep.checked += 1
        if sum(c * u.values[idx[s]] for s, c in z.items()) != 1:
            rep.fail(("fiber value", v))
    return rep


def verify_lemma42_square(b: BundlePair, p: CoveringMap) -> Report:
    """thom_iso(p_!(alpha)) == pbar_!(thom_iso~(alpha)) for a basis of H*(B~)."""
    rep = Report(f"thom-transfer-square[{b.base.name},deg={p.degree}]")
    bc = pullback_bundle(b, p)
    rep.details["pulled_thom_class"] = verify_pulled_thom_class(bc).passed
    if not rep.details["pulled_thom_class"]:
        rep.fail("pulled back cochain is not a Thom class")
    bt = bc.bundle
    for alpha in cohomology_basis(p.total):
        # the pulled bundle's base is p.total itself
        rep.checked += 1
        lhs = thom_iso(b, transfer_cochain(p, alpha))
        rhs = transfer_cochain(bc.cover, thom_iso(bt, alpha))
        if lhs != rhs:
            rep.fail((alpha.degree, alpha.coordinates(), lhs.coordinates(), rhs.coordinates()))
    return rep
