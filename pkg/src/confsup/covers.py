"""Finite cellular covering maps, chain-level transfer and span-induced maps."""

from __future__ import annotations

from collections import Counter

from .core.cohomology import CohomologyClass, cup
from .core.complexes import CellComplex, CellMap, ComplexError, SimplicialComplex, permutation_sign
from .formal_sums import FormalSum
from .report import Report


class CoverError(ComplexError):
    """The data do not describe a covering map."""


class CoveringMap:
    """Cell assignment total -> base in which every base cell has ``degree`` preimages.

    Every preimage cell maps onto its image with incidence sign +1; the
    assignment is checked to commute with the boundary operators.
    """

    def __init__(self, total: CellComplex, base: CellComplex, assignment, degree: int | None = None,
                 check: bool = True):
        self.total = total
        self.base = base
        self.assignment = [list(level) for level in assignment]
        fibers = []
        for k in range(len(base.cells)):
            fib = [[] for _ in range(base.n_cells(k))]
            level = self.assignment[k] if k < len(self.assignment) else []
            for i, j in enumerate(level):
                fib[j].append(i)
            fibers.append(fib)
        self.fibers = fibers
        sizes = {len(f) for level in fibers for f in level}
        if degree is None:
            degree = sizes.pop() if len(sizes) == 1 else None
            if degree is None:
                raise CoverError(f"fiber sizes differ: {sorted(sizes)}")
        elif sizes - {degree}:
            raise CoverError(f"fiber sizes {sorted(sizes)} do not all equal degree {degree}")
        self.degree = degree
        if len(total.cells) > len(base.cells) and any(total.cells[len(base.cells):]):
            raise CoverError("total complex has cells above the base dimension")
        if check:
            self.check_cellular()

    def check_cellular(self):
        for k in range(1, len(self.total.cells)):
            for i, faces in enumerate(self.total.boundary[k]):
                pushed = Counter()
                for j, c in faces.items():
                    pushed[self.assignment[k - 1][j]] += c
                pushed = {j: c for j, c in pushed.items() if c}
                if pushed != self.base.boundary[k][self.assignment[k][i]]:
                    raise CoverError(f"assignment does not commute with boundary at {self.total.cells[k][i]!r}")

    @classmethod
    def simplicial(cls, total: SimplicialComplex, base: SimplicialComplex, vertex_map) -> "CoveringMap":
        """Covering from a vertex map that is order preserving on every simplex."""
        vm = vertex_map if callable(vertex_map) else vertex_map.__getitem__
        assignment = []
        for k, level in enumerate(total.cells):
            row = []
            for s in level:
                img = tuple(vm(v) for v in s)
                if len(set(img)) != len(img) or permutation_sign(img) != 1 or list(img) != sorted(img):
                    raise CoverError(f"vertex map is not order preserving and injective on {s!r}")
                if img not in base.index[k]:
                    raise CoverError(f"image of {s!r} is not a simplex of the base")
                row.append(base.index[k][img])
            assignment.append(row)
        return cls(total, base, assignment)

    def as_cell_map(self) -> CellMap:
        images = [[(k, j, 1) for j in level] for k, level in enumerate(self.assignment)]
        return CellMap(self.total, self.base, images)

    def preimages(self, k: int, j: int) -> list:
        return self.fibers[k][j]


def lifted_vertex_order(total: SimplicialComplex, vertex_map, name: str = "") -> tuple:
    """Relabel the total complex so that the covering vertex map becomes monotone.

    Returns ``(relabeled total, vertex map on new labels)``; new vertices are
    pairs ``(image, old vertex)``.
    """
    vm = vertex_map if callable(vertex_map) else vertex_map.__getitem__
    new = SimplicialComplex(
        (tuple(sorted((vm(v), v) for v in s)) for s in total.simplices()),
        name=name or total.name,
    )
    return new, (lambda w: w[0])


def simplicial_cover(total: SimplicialComplex, base: SimplicialComplex, vertex_map, name: str = "") -> CoveringMap:
    new, vm = lifted_vertex_order(total, vertex_map, name=name)
    return CoveringMap.simplicial(new, base, vm)


def pullback_cochain(p: CoveringMap, alpha: CohomologyClass) -> CohomologyClass:
    if alpha.complex is not p.base:
        raise ComplexError("cochain does not live on the base of the cover")
    k = alpha.degree
    vals = alpha.values
    return CohomologyClass(p.total, k, [vals[j] for j in p.assignment[k]])


def transfer_cochain(p: CoveringMap, beta: CohomologyClass) -> CohomologyClass:
    """Sum of the cochain over the preimages of each base cell."""
    if beta.complex is not p.total:
        raise ComplexError("cochain does not live on the total space of the cover")
    k = beta.degree
    out = [0] * p.base.n_cells(k)
    for i, j in enumerate(p.assignment[k]):
        out[j] += beta.values[i]
    return CohomologyClass(p.base, k, out)


class Span:
    """Multivalued cellular map X -> SP(Y) presented as X <-p- Xt -q-> Y.

    ``p`` is a covering map and ``q`` a cell map from its total space.
    """

    def __init__(self, cover: CoveringMap, right: CellMap):
        if not isinstance(cover, CoveringMap):
            raise CoverError("left leg of a span must be a covering map")
        if right.source is not cover.total:
            raise ComplexError("legs of the span do not share their source")
        self.cover = cover
        self.right = right

    @property
    def source(self) -> CellComplex:
        return self.cover.base

    @property
    def target(self) -> CellComplex:
        return self.right.target

    def formal_image(self, k: int, i: int) -> FormalSum:
        """Set-level value on a cell: the formal sum of image cells (degree, key)."""
        return FormalSum(self.right.image_key(k, t) for t in self.cover.preimages(k, i))

    def pullback(self, alpha: CohomologyClass) -> CohomologyClass:
        """Induced cochain map: transfer along the cover after pulling back along q."""
        if alpha.complex is not self.target:
            raise ComplexError("class does not live on the span's target")
        mid = CohomologyClass(self.cover.total, alpha.degree, self.right.pullback(alpha.degree, alpha.values))
        return transfer_cochain(self.cover, mid)


def identity_cover(K: CellComplex) -> CoveringMap:
    return CoveringMap(K, K, [list(range(K.n_cells(k))) for k in range(len(K.cells))])


def identity_map(K: CellComplex) -> CellMap:
    return CellMap(K, K, [[(k, i, 1) for i in range(K.n_cells(k))] for k in range(len(K.cells))])


def span_of_map(f: CellMap) -> Span:
    """A single-valued cell map viewed as a span with identity left leg."""
    return Span(identity_cover(f.source), f)


def induced_map_of_span(span: Span):
    """The cohomology map H*(Y) -> H*(X) of a span, as a function on classes."""
    return span.pullback


def cohomology_basis(K: CellComplex, max_degree: int | None = None) -> list:
    top = K.dim if max_degree is None else max_degree
    if K.truncated_at is not None:
        top = min(top, K.truncated_at - 1)
    out = []
    for k in range(top + 1):
        out.extend(K.cohomology(k).generators())
    return out


def verify_transfer_degree(p: CoveringMap, max_degree: int | None = None) -> Report:
    """transfer(pullback(a)) == degree * a for every basis class a of the base."""
    rep = Report(f"transfer-degree[{p.base.name}]")
    for a in cohomology_basis(p.base, max_degree):
        rep.checked += 1
        lhs = transfer_cochain(p, pullback_cochain(p, a))
        if lhs != p.degree * a:
            rep.fail((a.degree, a.coordinates(), lhs.coordinates()))
    return rep


def verify_transfer_chain_map(p: CoveringMap, trials: int = 20, seed: int = 0) -> Report:
    """transfer commutes with the coboundary on random cochains."""
    import random

    rng = random.Random(seed)
    rep = Report(f"transfer-coboundary[{p.base.name}]")
    for _ in range(trials):
        k = rng.randrange(0, max(p.total.dim, 1))
        vals = [rng.randint(-3, 3) for _ in range(p.total.n_cells(k))]
        beta = CohomologyClass(p.total, k, vals)
        lhs = p.base.coboundary(k, transfer_cochain(p, beta).values)
        d_beta = CohomologyClass(p.total, k + 1, p.total.coboundary(k, vals))
        rhs = transfer_cochain(p, d_beta).values
        rep.checked += 1
        if lhs != rhs:
            rep.fail(("degree", k))
    return rep


def verify_projection_formula(p: CoveringMap, max_degree: int | None = None) -> Report:
    """transfer(p*(a) cup b) == a cup transfer(b) at class level for basis classes."""
    if not isinstance(p.base, SimplicialComplex) or not isinstance(p.total, SimplicialComplex):
        raise ComplexError("projection formula needs simplicial base and total space")
    rep = Report(f"projection-formula[{p.base.name}]")
    top = p.base.dim
    for a in cohomology_basis(p.base, max_degree):
        for b in cohomology_basis(p.total, max_degree):
            if a.degree + b.degree > top:
                continue
            rep.checked += 1
            lhs = transfer_cochain(p, cup(pullback_cochain(p, a), b))
            rhs = cup(a, transfer_cochain(p, b))
            if lhs != rhs:
                rep.fail((a.degree, a.coordinates(), b.degree, b.coordinates()))
    return rep


def verify_naturality(g: CellMap, h: CellMap, f1: Span, f2: Span, max_degree: int | None = None) -> Report:
    """Check f1* o h* == g* o f2* for a square SP(h) o f1 == f2 o g.

    The square is first checked on underlying cells; if it fails there the
    report's ``details['precondition']`` is False and no cohomology is computed.
    """
    rep = Report("naturality")
    X1, X2 = f1.source, f2.source
    if g.source is not X1 or g.target is not X2 or h.source is not f1.target or h.target is not f2.target:
        raise ComplexError("maps do not form a square")
    for k in range(len(X1.cells)):
        for i in range(X1.n_cells(k)):
            lhs = FormalSum(h.image_key(d, h.source.index[d][ck]) for d, ck in _expand(f1.formal_image(k, i)))
            gd, gj = g.images[k][i][0], g.images[k][i][1]
            rhs = f2.formal_image(gd, gj)
            if lhs != rhs:
                rep.details["precondition"] = False
                rep.fail(("square does not commute on cell", X1.cells[k][i]))
                return rep
    rep.details["precondition"] = True
    Y2 = f2.target
    for a in cohomology_basis(Y2, max_degree):
        rep.checked += 1
        ha = CohomologyClass(h.source, a.degree, h.pullback(a.degree, a.values))
        lhs = f1.pullback(ha)
        fa = f2.pullback(a)
        rhs = CohomologyClass(X1, a.degree, g.pullback(a.degree, fa.values))
        if lhs != rhs:
            rep.fail((a.degree, a.coordinates()))
    return rep


def _expand(fs: FormalSum):
    for key, mult in fs.items():
        for _ in range(mult):
            yield key
