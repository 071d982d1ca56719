"""Deleted-product cell models of configuration spaces of a simplicial complex.

A cell of the ordered n-point model is an n-tuple of pairwise vertex-disjoint
simplices.  Unordered and coloured models are its quotients by (products of)
symmetric groups; they are built directly with one canonical representative
per orbit: the simplices sorted by the base complex's simplex order, each
carrying its colour.  Such a cell is oriented as the product of its simplices
in sorted order, so forgetting colours is sign free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial, prod

from .core.complexes import (
    CellComplex,
    CellMap,
    ComplexError,
    ProdCellComplex,
    ResourceError,
    SimplicialComplex,
    koszul_sign,
    quotient_by_free_action,
    subdivide,
)
from .covers import CoveringMap, CoverError

DEFAULT_GUARD = 5_000_000


class _SimplexTable:
    """Simplices of K in a fixed total order, with vertex sets and faces."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.simplices = sorted(K.simplices())
        self.rank = {s: i for i, s in enumerate(self.simplices)}
        self.vsets = [frozenset(s) for s in self.simplices]
        self.dims = [len(s) - 1 for s in self.simplices]
        self.faces = []
        for s in self.simplices:
            d = len(s) - 1
            if d == 0:
                self.faces.append(())
            else:
                self.faces.append(tuple((self.rank[s[:i] + s[i + 1:]], -1 if i & 1 else 1) for i in range(d + 1)))

    def disjoint_combinations(self, N: int, max_dim: int | None):
        """Increasing rank tuples of N pairwise disjoint simplices, total dim <= max_dim."""
        n = len(self.simplices)
        vsets, dims = self.vsets, self.dims
        budget = max_dim if max_dim is not None else sum(sorted(dims, reverse=True)[:N])

        def rec(start, k, used, dsum, acc):
            if k == N:
                yield tuple(acc)
                return
            for i in range(start, n - (N - k) + 1):
                d = dims[i]
                if dsum + d > budget or not used.isdisjoint(vsets[i]):
                    continue
                acc.append(i)
                yield from rec(i + 1, k + 1, used | vsets[i], dsum + d, acc)
                acc.pop()

        yield from rec(0, 0, frozenset(), 0, [])


def _multinomial(signature) -> int:
    return factorial(sum(signature)) // prod(factorial(k) for k in signature)


def _color_patterns(signature):
    """All colour sequences with ``signature[c]`` entries of colour c."""
    N = sum(signature)
    base = [c for c, k in enumerate(signature) for _ in range(k)]
    return sorted(set(itertools.permutations(base))) if N else [()]


@dataclass
class ConfigModel:
    """A built configuration-space model.

    ``signature`` is (n,) for unordered, (n, m) for coloured and (1,)*n for
    the ordered model (``ordered`` True).  ``complex`` is the cell complex;
    ``f_vector`` is available without building boundaries.
    """

    base: SimplicialComplex
    signature: tuple
    ordered: bool = False
    max_dim: int | None = None
    subdivision: int = 0
    guard: int = DEFAULT_GUARD
    name: str = ""
    _table: _SimplexTable = field(default=None, repr=False)

    def __post_init__(self):
        if self._table is None:
            self._table = _SimplexTable(self.base)

    @property
    def n_points(self) -> int:
        return sum(self.signature)

    @cached_property
    def combinations(self) -> list:
        return list(self._table.disjoint_combinations(self.n_points, self.max_dim))

    @cached_property
    def f_vector(self) -> list:
        dims = self._table.dims
        mult = factorial(self.n_points) if self.ordered else _multinomial(self.signature)
        top = 0
        counts = {}
        for combo in self.combinations:
            d = sum(dims[i] for i in combo)
            counts[d] = counts.get(d, 0) + mult
            top = max(top, d)
        return [counts.get(d, 0) for d in range(top + 1)] if counts else []

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    def total_cells(self) -> int:
        return sum(self.f_vector)

    @cached_property
    def complex(self) -> CellComplex:
        total = self.total_cells()
        if total > self.guard:
            raise ResourceError(f"model {self.name} would have {total} cells (guard {self.guard})")
        if self.ordered:
            cells, boundary = self._build_ordered()
        else:
            cells, boundary = self._build_sorted()
        truncated = None
        if self.max_dim is not None:
            full_top = sum(sorted(self._table.dims, reverse=True)[: self.n_points])
            if self.max_dim < full_top:
                truncated = self.max_dim
        while len(cells) < (self.max_dim or 0) + 1 and truncated is not None:
            cells.append([])
            boundary.append([])
        return CellComplex(cells, boundary, name=self.name, truncated_at=truncated, check=True)

    def _levels(self, keyed):
        top = max((d for d, _ in keyed), default=0)
        cells = [[] for _ in range(top + 1)]
        for d, key in keyed:
            cells[d].append(key)
        for level in cells:
            level.sort()
        return cells

    def _build_sorted(self):
        tab = self._table
        sims, dims, rank = tab.simplices, tab.dims, tab.rank
        patterns = _color_patterns(self.signature)
        keyed = []
        for combo in self.combinations:
            d = sum(dims[i] for i in combo)
            for pat in patterns:
                keyed.append((d, tuple((sims[i], c) for i, c in zip(combo, pat))))
        cells = self._levels(keyed)
        index = [{key: i for i, key in enumerate(level)} for level in cells]
        boundary = [[{} for _ in cells[0]]]
        for d in range(1, len(cells)):
            lower = index[d - 1]
            level = []
            for key in cells[d]:
                ranks = [rank[s] for s, _ in key]
                colors = [c for _, c in key]
                kd = [dims[r] for r in ranks]
                acc = {}
                shift = 0
                for pos, r in enumerate(ranks):
                    if kd[pos]:
                        sgn = -1 if shift & 1 else 1
                        for fr, fc in tab.faces[r]:
                            new_r = ranks[:pos] + [fr] + ranks[pos + 1:]
                            new_d = kd[:pos] + [kd[pos] - 1] + kd[pos + 1:]
                            order = sorted(range(len(new_r)), key=new_r.__getitem__)
                            ks = koszul_sign(new_d, order)
                            face = tuple((sims[new_r[o]], colors[o]) for o in order)
                            j = lower[face]
                            acc[j] = acc.get(j, 0) + sgn * fc * ks
                    shift += kd[pos]
                level.append({j: c for j, c in acc.items() if c})
            boundary.append(level)
        return cells, boundary

    def _build_ordered(self):
        tab = self._table
        sims, dims, rank = tab.simplices, tab.dims, tab.rank
        keyed = []
        for combo in self.combinations:
            d = sum(dims[i] for i in combo)
            for perm in itertools.permutations(combo):
                keyed.append((d, tuple(sims[i] for i in perm)))
        cells = self._levels(keyed)
        index = [{key: i for i, key in enumerate(level)} for level in cells]
        boundary = [[{} for _ in cells[0]]]
        for d in range(1, len(cells)):
            lower = index[d - 1]
            level = []
            for key in cells[d]:
                acc = {}
                shift = 0
                for pos, s in enumerate(key):
                    r = rank[s]
                    if dims[r]:
                        sgn = -1 if shift & 1 else 1
                        for fr, fc in tab.faces[r]:
                            face = key[:pos] + (sims[fr],) + key[pos + 1:]
                            j = lower[face]
                            acc[j] = acc.get(j, 0) + sgn * fc
                    shift += dims[r]
                level.append({j: c for j, c in acc.items() if c})
            boundary.append(level)
        return cells, boundary

    def betti_numbers(self) -> list:
        return self.complex.betti_numbers()


def _prepare(K: SimplicialComplex, subdiv: int) -> SimplicialComplex:
    return subdivide(K, subdiv) if subdiv else K


def ordered_model(K: SimplicialComplex, n: int, subdiv: int = 2, max_dim: int | None = None,
                  guard: int = DEFAULT_GUARD) -> ConfigModel:
    """Simplicial deleted n-fold product of K (after ``subdiv`` subdivisions)."""
    if n <= 0:
        raise ComplexError("ordered model needs n >= 1")
    L = _prepare(K, subdiv)
    return ConfigModel(L, (1,) * n, ordered=True, max_dim=max_dim, subdivision=subdiv, guard=guard,
                       name=f"F{n}({K.name})")


def unordered_model(K: SimplicialComplex, n: int, subdiv: int = 2, max_dim: int | None = None,
                    guard: int = DEFAULT_GUARD) -> ConfigModel:
    if n < 0:
        raise ComplexError("n must be non-negative")
    L = _prepare(K, subdiv)
    return ConfigModel(L, (n,), max_dim=max_dim, subdivision=subdiv, guard=guard, name=f"C{n}({K.name})")


def colored_model(K: SimplicialComplex, n: int, m: int, subdiv: int = 2, max_dim: int | None = None,
                  guard: int = DEFAULT_GUARD) -> ConfigModel:
    if n < 0 or m < 0:
        raise ComplexError("colour counts must be non-negative")
    L = _prepare(K, subdiv)
    return ConfigModel(L, (n, m), max_dim=max_dim, subdivision=subdiv, guard=guard,
                       name=f"C{n},{m}({K.name})")


def symmetric_group_action(n: int) -> list:
    """S_n acting on ordered-model keys by permuting positions, with Koszul signs.

    Identity first.  A cell key of the ordered model is a tuple of simplices.
    """
    perms = list(itertools.permutations(range(n)))

    def act(order):
        def g(key):
            dims = [len(s) - 1 for s in key]
            return tuple(key[o] for o in order), koszul_sign(dims, order)
        return g

    return [act(p) for p in perms]


def unordered_by_quotient(model: ConfigModel):
    """Quotient of an ordered model by S_n via the generic free-action quotient."""
    if not model.ordered:
        raise ComplexError("expected an ordered model")
    return quotient_by_free_action(model.complex, symmetric_group_action(model.n_points),
                                   name=f"F{model.n_points}/S")


def _forget_key(key):
    return tuple((s, 0) for s, _ in key)


def _split_key(key):
    blue = [i for i, (_, c) in enumerate(key) if c == 0]
    red = [i for i, (_, c) in enumerate(key) if c == 1]
    dims = [len(s) - 1 for s, _ in key]
    sign = koszul_sign(dims, blue + red)
    return (tuple((key[i][0], 0) for i in blue), tuple((key[i][0], 0) for i in red)), sign


def color_forget_cover(colored: ConfigModel, unordered: ConfigModel) -> CoveringMap:
    """The colour-forgetting covering C_{n,m} -> C_{n+m}, degree C(n+m, n)."""
    if colored.base is not unordered.base or colored.n_points != unordered.n_points:
        raise ComplexError("models are not built from the same base and point count")
    total, base = colored.complex, unordered.complex
    assignment = [[base.index[k][_forget_key(key)] for key in level] for k, level in enumerate(total.cells)]
    n, m = colored.signature
    cover = CoveringMap(total, base, assignment)
    if cover.degree != comb(n + m, n):
        raise CoverError(f"colour-forgetting cover has degree {cover.degree}, expected {comb(n + m, n)}")
    return cover


def color_inclusion(colored: ConfigModel, product: ProdCellComplex) -> CellMap:
    """C_{n,m} -> C_n x C_m: split a coloured configuration into blue and red parts."""
    return CellMap.from_keys(colored.complex, product, _split_key)


def euler_oracle(chi_K: int, n: int, ordered: bool = True):
    """Euler characteristic of F_n (or C_n) of an even-dimensional manifold with Euler char chi_K.

    Returns an int, or a Fraction when the unordered value is not integral
    (which flags an inadequate model).
    """
    from fractions import Fraction

    val = 1
    for i in range(n):
        val *= chi_K - i
    if ordered:
        return val
    q = Fraction(val, factorial(n))
    return int(q) if q.denominator == 1 else q


class ConfigSpaces:
    """Cache of the models, products, covers and inclusions over one base.

    ``max_dim`` bounds the cell dimension of everything built; cohomology is
    then available in degrees below ``max_dim``.
    """

    def __init__(self, K: SimplicialComplex, subdiv: int = 2, max_dim: int | None = None,
                 guard: int = DEFAULT_GUARD):
        self.source = K
        self.K = _prepare(K, subdiv)
        self.subdiv = subdiv
        self.max_dim = max_dim
        self.guard = guard
        self._table = _SimplexTable(self.K)
        self._models = {}
        self._products = {}
        self._covers = {}
        self._inclusions = {}

    @property
    def name(self) -> str:
        return self.source.name

    def model(self, *signature) -> ConfigModel:
        signature = tuple(signature)
        if signature not in self._models:
            label = ",".join(map(str, signature))
            self._models[signature] = ConfigModel(
                self.K, signature, max_dim=self.max_dim, subdivision=self.subdiv, guard=self.guard,
                name=f"C{label}({self.name})", _table=self._table,
            )
        return self._models[signature]

    def unordered(self, n: int) -> CellComplex:
        return self.model(n).complex

    def colored(self, n: int, m: int) -> CellComplex:
        return self.model(n, m).complex

    def product(self, n: int, m: int) -> ProdCellComplex:
        if (n, m) not in self._products:
            self._products[(n, m)] = ProdCellComplex(
                [self.unordered(n), self.unordered(m)], max_dim=self.max_dim,
                name=f"C{n}xC{m}({self.name})", guard=self.guard,
            )
        return self._products[(n, m)]

    def cover(self, n: int, m: int) -> CoveringMap:
        if (n, m) not in self._covers:
            self._covers[(n, m)] = color_forget_cover(self.model(n, m), self.model(n + m))
        return self._covers[(n, m)]

    def release(self, *signature):
        """Drop a cached model and everything built on it, to bound memory."""
        signature = tuple(signature)
        self._models.pop(signature, None)
        if len(signature) == 2:
            self._covers.pop(signature, None)
            self._inclusions.pop(signature, None)
            self._products.pop(signature, None)

    def inclusion(self, n: int, m: int) -> CellMap:
        if (n, m) not in self._inclusions:
            self._inclusions[(n, m)] = color_inclusion(self.model(n, m), self.product(n, m))
        return self._inclusions[(n, m)]
