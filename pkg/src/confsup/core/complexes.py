"""Finite cell complexes with exact integer boundary matrices."""

from __future__ import annotations

import itertools
from functools import cached_property
from pathlib import Path

from .linalg import reduce_chain_complex, smith_normal_form


class ComplexError(ValueError):
    """Malformed complex, map or action."""


class ResourceError(RuntimeError):
    """A construction would exceed the configured cell budget."""


def koszul_sign(dims, order) -> int:
    """Sign of reordering product factors of the given dimensions.

    ``order[i]`` is the old position of the factor placed at new position i.
    """
    odd = 0
    for i in range(len(order)):
        di = dims[order[i]]
        if di & 1:
            for j in range(i + 1, len(order)):
                if order[j] < order[i] and dims[order[j]] & 1:
                    odd ^= 1
    return -1 if odd else 1


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct items)."""
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[j] < seq[i]:
                s = -s
    return s


class CellComplex:
    """A finite chain complex of free abelian groups on named cells.

    ``cells[k]`` is the list of keys of degree k and ``boundary[k][i]`` is a
    dict ``{face index: coefficient}``.  ``truncated_at`` records the largest
    degree that was built when the complex is a skeleton of something larger;
    cohomology is then only reliable strictly below that degree.
    """

    def __init__(self, cells, boundary, name: str = "", truncated_at: int | None = None,
                 check: bool = True):
        self.cells = [list(level) for level in cells]
        while len(self.cells) > 1 and not self.cells[-1] and truncated_at is None:
            self.cells.pop()
        self.boundary = [list(level) for level in boundary[: len(self.cells)]]
        if not self.boundary:
            self.boundary = [[]]
        self.boundary[0] = [{} for _ in self.cells[0]]
        self.index = [{key: i for i, key in enumerate(level)} for level in self.cells]
        self.name = name
        self.truncated_at = truncated_at
        self._cohomology = {}
        if check:
            self.check_boundary()

    def __repr__(self):
        return f"{type(self).__name__}({self.name or '?'}, f={self.f_vector})"

    @property
    def dim(self) -> int:
        for k in range(len(self.cells) - 1, -1, -1):
            if self.cells[k]:
                return k
        return -1

    @property
    def f_vector(self) -> list:
        return [len(level) for level in self.cells]

    def n_cells(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k < len(self.cells) else 0

    def total_cells(self) -> int:
        return sum(self.f_vector)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def check_boundary(self):
        for k in range(2, len(self.cells)):
            lower = self.boundary[k - 1]
            for i, faces in enumerate(self.boundary[k]):
                acc = {}
                for j, c in faces.items():
                    for l, d in lower[j].items():
                        acc[l] = acc.get(l, 0) + c * d
                if any(acc.values()):
                    raise ComplexError(f"boundary of boundary nonzero at cell {self.cells[k][i]!r}")

    def cell_dim(self, key) -> int:
        for k, idx in enumerate(self.index):
            if key in idx:
                return k
        raise KeyError(key)

    def coboundary(self, degree: int, values: list) -> list:
        """Apply the coboundary to a dense cochain of the given degree."""
        n = self.n_cells(degree + 1)
        if n == 0:
            return []
        out = [0] * n
        for i, faces in enumerate(self.boundary[degree + 1]):
            s = 0
            for j, c in faces.items():
                v = values[j]
                if v:
                    s += c * v
            out[i] = s
        return out

    def boundary_matrix(self, k: int) -> list:
        """Dense matrix of the boundary from degree k to k-1."""
        rows, cols = self.n_cells(k - 1), self.n_cells(k)
        mat = [[0] * cols for _ in range(rows)]
        if 0 < k < len(self.boundary):
            for i, faces in enumerate(self.boundary[k]):
                for j, c in faces.items():
                    mat[j][i] = c
        return mat

    @cached_property
    def reduction(self):
        return reduce_chain_complex(self.boundary, record=True)

    @cached_property
    def _homology_reduction(self):
        if "reduction" in self.__dict__:
            return self.reduction
        return reduce_chain_complex(self.boundary, record=False)

    def homology(self, k: int):
        """(betti_k, torsion coefficients) of H_k with integer coefficients."""
        self._check_degree(k)
        red = self._homology_reduction
        n_k = len(red.remaining[k]) if k < len(red.remaining) else 0

        def reduced_snf(j):
            if j <= 0 or j >= len(red.remaining):
                return []
            rows = {c: r for r, c in enumerate(red.remaining[j - 1])}
            mat = [[0] * len(red.remaining[j]) for _ in rows]
            for col, cell in enumerate(red.remaining[j]):
                for face, c in red.boundary[j][cell].items():
                    mat[rows[face]][col] = c
            if not mat or not red.remaining[j]:
                return []
            return smith_normal_form(mat, transforms=False).diagonal

        d_k = reduced_snf(k)
        d_k1 = reduced_snf(k + 1)
        betti = n_k - len(d_k) - len(d_k1)
        return betti, [d for d in d_k1 if d > 1]

    def betti_numbers(self) -> list:
        top = self.dim if self.truncated_at is None else self.truncated_at - 1
        return [self.homology(k)[0] for k in range(top + 1)]

    def _check_degree(self, k: int):
        if self.truncated_at is not None and k >= self.truncated_at:
            raise ComplexError(f"degree {k} needs cells above the truncation at {self.truncated_at}")

    def cohomology(self, k: int):
        from .cohomology import CohomologyGroup

        self._check_degree(k)
        if k not in self._cohomology:
            self._cohomology[k] = CohomologyGroup(self, k)
        return self._cohomology[k]

    def is_subcomplex(self, other: "CellComplex") -> bool:
        """Whether ``other``'s cells are cells of self, closed under faces."""
        for k, level in enumerate(other.cells):
            for key in level:
                if k >= len(self.index) or key not in self.index[k]:
                    return False
        return True

    def relative(self, sub: "CellComplex") -> "RelativeComplex":
        return RelativeComplex(self, sub)


class RelativeComplex(CellComplex):
    """Chain complex C(K)/C(A): cochains on it are cochains of K vanishing on A."""

    def __init__(self, parent: CellComplex, sub: CellComplex):
        if not parent.is_subcomplex(sub):
            raise ComplexError("not a subcomplex")
        drop = [set(level) for level in sub.cells]
        drop += [set()] * (len(parent.cells) - len(drop))
        cells, keep_idx = [], []
        for k, level in enumerate(parent.cells):
            keep = [i for i, key in enumerate(level) if key not in drop[k]]
            keep_idx.append(keep)
            cells.append([level[i] for i in keep])
        new_of_old = [{old: new for new, old in enumerate(keep)} for keep in keep_idx]
        boundary = [[{} for _ in cells[0]]]
        for k in range(1, len(cells)):
            lower = new_of_old[k - 1]
            boundary.append([
                {lower[j]: c for j, c in parent.boundary[k][i].items() if j in lower}
                for i in keep_idx[k]
            ])
        self.parent = parent
        self.sub = sub
        self.keep_index = keep_idx
        super().__init__(cells, boundary, name=f"({parent.name},{sub.name})",
                         truncated_at=parent.truncated_at, check=True)

    def from_absolute(self, degree: int, values: list) -> list:
        return [values[i] for i in self.keep_index[degree]]

    def to_absolute(self, degree: int, values: list) -> list:
        out = [0] * self.parent.n_cells(degree)
        for v, i in zip(values, self.keep_index[degree]):
            out[i] = v
        return out


class SimplicialComplex(CellComplex):
    """Simplicial complex; cells are strictly increasing vertex tuples.

    Vertices may be any mutually comparable hashables; their order is the
    global vertex order used by oriented boundaries and by cup products.
    """

    def __init__(self, simplices, name: str = "", check: bool = True):
        simplices = set(simplices)
        if not simplices:
            cells = [[]]
        else:
            top = max(len(s) for s in simplices) - 1
            cells = [sorted(s for s in simplices if len(s) == k + 1) for k in range(top + 1)]
        index = [{key: i for i, key in enumerate(level)} for level in cells]
        boundary = [[{} for _ in cells[0]]]
        for k in range(1, len(cells)):
            lower = index[k - 1]
            level = []
            for s in cells[k]:
                level.append({lower[s[:i] + s[i + 1:]]: (-1) ** i for i in range(k + 1)})
            boundary.append(level)
        super().__init__(cells, boundary, name=name, check=check)

    @property
    def vertices(self) -> list:
        return [s[0] for s in self.cells[0]]

    def simplices(self):
        for level in self.cells:
            yield from level

    def subcomplex(self, simplices, name: str = "") -> "SimplicialComplex":
        """Face closure of ``simplices``; they must be simplices of self."""
        closure = _face_closure(simplices)
        for s in closure:
            if s not in self.index[len(s) - 1]:
                raise ComplexError(f"{s!r} is not a simplex of {self.name or 'the complex'}")
        return SimplicialComplex(closure, name=name)

    def cup(self, a_deg: int, a: list, b_deg: int, b: list) -> list:
        """Alexander-Whitney cup product of dense cochains (front face, back face)."""
        k = a_deg + b_deg
        n = self.n_cells(k)
        out = [0] * n
        if n == 0:
            return out
        ia, ib = self.index[a_deg], self.index[b_deg]
        for i, s in enumerate(self.cells[k]):
            x = a[ia[s[: a_deg + 1]]]
            if x:
                y = b[ib[s[a_deg:]]]
                if y:
                    out[i] = x * y
        return out


def _face_closure(simplices) -> set:
    out = set()
    for s in simplices:
        s = tuple(s)
        if len(set(s)) != len(s):
            raise ComplexError(f"repeated vertex in simplex {s!r}")
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            out.update(itertools.combinations(s, r))
    return out


def build_complex(top_simplices, name: str = "") -> SimplicialComplex:
    """Simplicial complex generated by the given simplices (face closure)."""
    for s in top_simplices:
        if any((isinstance(v, int) and v < 0) for v in s):
            raise ComplexError(f"negative vertex index in {list(s)!r}")
    return SimplicialComplex(_face_closure(top_simplices), name=name)


def parse_complex(text: str, name: str = "") -> SimplicialComplex:
    """Parse the plain-text format: one simplex per line, ``#`` comments."""
    tops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            simplex = [int(tok) for tok in line.split()]
        except ValueError:
            raise ComplexError(f"line {lineno}: expected whitespace-separated vertex indices") from None
        if any(v < 0 for v in simplex):
            raise ComplexError(f"line {lineno}: negative vertex index")
        if len(set(simplex)) != len(simplex):
            raise ComplexError(f"line {lineno}: repeated vertex")
        tops.append(simplex)
    return build_complex(tops, name=name)


def load_complex(path) -> SimplicialComplex:
    path = Path(path)
    return parse_complex(path.read_text(), name=path.stem)


def format_complex(K: SimplicialComplex) -> str:
    """Maximal simplices, one per line (vertices must be integers)."""
    faces_of_bigger = set()
    for level in K.cells[1:]:
        for s in level:
            for i in range(len(s)):
                faces_of_bigger.add(s[:i] + s[i + 1:])
    lines = [" ".join(map(str, s)) for s in K.simplices() if s not in faces_of_bigger]
    return "\n".join(lines) + "\n"


def relabel(K: SimplicialComplex, key=None, name: str | None = None) -> SimplicialComplex:
    """Relabel vertices to 0..n-1 in the order given by ``key``."""
    verts = sorted(K.vertices, key=key)
    new = {v: i for i, v in enumerate(verts)}
    return SimplicialComplex(
        (tuple(sorted(new[v] for v in s)) for s in K.simplices()),
        name=K.name if name is None else name,
    )


def barycentric_subdivide(K: SimplicialComplex, name: str | None = None):
    """Barycentric subdivision with integer vertices.

    Returns ``(sdK, barycenter, chain_map)`` where ``barycenter`` maps each
    simplex of K to its new vertex and ``chain_map[k][i]`` is the
    subdivision chain (dict over k-simplices of sdK) of the i-th k-simplex.
    """
    order = sorted(K.simplices(), key=lambda s: (len(s), s))
    bary = {s: i for i, s in enumerate(order)}
    new = set()

    def flags(s):
        if len(s) == 1:
            yield (s,)
            return
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            for f in flags(face):
                yield f + (s,)
    for s in K.simplices():
        for f in flags(s):
            for r in range(1, len(f) + 1):
                for sub in itertools.combinations(f, r):
                    new.add(tuple(sorted(bary[x] for x in sub)))
    sd = SimplicialComplex(new, name=(K.name + "'") if name is None else name)

    chain_map = []
    for k, level in enumerate(K.cells):
        images = []
        for s in level:
            images.append(_subdivision_chain(s, bary, sd))
        chain_map.append(images)
    return sd, bary, chain_map


def _subdivision_chain(s, bary, sd) -> dict:
    """sd(v) = v; sd(s) = cone from the barycenter of s over sd(boundary s)."""
    if len(s) == 1:
        return {sd.index[0][(bary[s],)]: 1}
    k = len(s) - 1
    acc = {}
    b = bary[s]
    for i in range(k + 1):
        face = s[:i] + s[i + 1:]
        sign = (-1) ** i
        for j, c in _subdivision_chain(face, bary, sd).items():
            tau = sd.cells[k - 1][j]
            verts = (b,) + tau
            key = tuple(sorted(verts))
            coef = sign * c * permutation_sign(verts)
            idx = sd.index[k][key]
            acc[idx] = acc.get(idx, 0) + coef
    return {i: c for i, c in acc.items() if c}


def subdivide(K: SimplicialComplex, times: int) -> SimplicialComplex:
    for _ in range(times):
        K = barycentric_subdivide(K, name=K.name)[0]
    return K


class ProdCellComplex(CellComplex):
    """Product of cell complexes; cells are tuples of factor cell keys.

    Boundary follows the Koszul rule
    d(s x t) = ds x t + (-1)^|s| s x dt, extended to several factors.
    Cells are enumerated up to ``max_dim`` when given.
    """

    def __init__(self, factors, max_dim: int | None = None, name: str = "", guard: int | None = None):
        self.factors = list(factors)
        top = sum(f.dim for f in self.factors) if self.factors else 0
        if max_dim is not None and max_dim < top:
            top_built, truncated = max_dim, max_dim
        else:
            top_built, truncated = top, None
        inherited = [f.truncated_at for f in self.factors if f.truncated_at is not None]
        if inherited:
            m = min(inherited)
            truncated = m if truncated is None else min(truncated, m)
            top_built = min(top_built, m)
        cells = [[] for _ in range(top_built + 1)]
        dims_ranges = [range(len(f.cells)) for f in self.factors]
        for dims in itertools.product(*dims_ranges):
            d = sum(dims)
            if d > top_built:
                continue
            levels = [f.cells[k] for f, k in zip(self.factors, dims)]
            if guard is not None:
                size = 1
                for lv in levels:
                    size *= len(lv)
                if sum(len(c) for c in cells) + size > guard:
                    raise ResourceError(f"product exceeds {guard} cells")
            for combo in itertools.product(*levels):
                cells[d].append(tuple(combo))
        for level in cells:
            level.sort()
        index = [{key: i for i, key in enumerate(level)} for level in cells]
        fdims = [{key: k for k, lv in enumerate(f.cells) for key in lv} for f in self.factors]
        boundary = [[{} for _ in cells[0]]]
        for d in range(1, len(cells)):
            lower = index[d - 1]
            level = []
            for cell in cells[d]:
                acc = {}
                shift = 0
                for pos, key in enumerate(cell):
                    f = self.factors[pos]
                    kd = fdims[pos][key]
                    if kd > 0:
                        sign = -1 if shift & 1 else 1
                        for j, c in f.boundary[kd][f.index[kd][key]].items():
                            face = cell[:pos] + (f.cells[kd - 1][j],) + cell[pos + 1:]
                            acc[lower[face]] = acc.get(lower[face], 0) + sign * c
                    shift += kd
                level.append({i: c for i, c in acc.items() if c})
            boundary.append(level)
        self._factor_dims = fdims
        super().__init__(cells, boundary, name=name or " x ".join(f.name for f in self.factors),
                         truncated_at=truncated)

    def factor_dims(self, cell) -> tuple:
        return tuple(fd[key] for fd, key in zip(self._factor_dims, cell))


def simplicial_product(K: SimplicialComplex, L: SimplicialComplex, name: str = "") -> SimplicialComplex:
    """Triangulated product with vertices (v, w), ordered lexicographically.

    Simplices are chains in the product of the two vertex orders that project
    to simplices of both factors.
    """
    simplices = set()
    for s in K.simplices():
        for t in L.simplices():
            p, q = len(s) - 1, len(t) - 1
            # monotone lattice paths from (0,0) to (p,q)
            for moves in itertools.combinations(range(p + q), p):
                i = j = 0
                path = [(s[0], t[0])]
                mv = set(moves)
                for step in range(p + q):
                    if step in mv:
                        i += 1
                    else:
                        j += 1
                    path.append((s[i], t[j]))
                for r in range(1, len(path) + 1):
                    simplices.update(itertools.combinations(path, r))
    return SimplicialComplex(simplices, name=name or f"{K.name} x {L.name}")


class CellMap:
    """A map sending each cell to a single cell with a sign.

    ``images[k][i] = (target degree, target index, sign)``.  At the chain level
    a cell whose image has lower dimension, or sign 0, goes to zero; at the
    level of underlying sets it still goes to its image cell.
    """

    def __init__(self, source: CellComplex, target: CellComplex, images):
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def simplicial(cls, source: SimplicialComplex, target: SimplicialComplex, vertex_map) -> "CellMap":
        vm = vertex_map if callable(vertex_map) else vertex_map.__getitem__
        images = []
        for k, level in enumerate(source.cells):
            row = []
            for s in level:
                img = [vm(v) for v in s]
                key = tuple(sorted(set(img)))
                d = len(key) - 1
                if key not in target.index[d]:
                    raise ComplexError(f"image of {s!r} is not a simplex")
                sign = permutation_sign(img) if d == k else 0
                row.append((d, target.index[d][key], sign))
            images.append(row)
        return cls(source, target, images)

    @classmethod
    def from_keys(cls, source: CellComplex, target: CellComplex, key_map) -> "CellMap":
        """``key_map(key) -> (target key, sign)`` for every cell of the source."""
        images = []
        for k, level in enumerate(source.cells):
            row = []
            for key in level:
                tkey, sign = key_map(key)
                d = k if tkey in target.index[k] else target.cell_dim(tkey)
                row.append((d, target.index[d][tkey], sign if d == k else 0))
            images.append(row)
        return cls(source, target, images)

    def pullback(self, degree: int, values: list) -> list:
        out = [0] * self.source.n_cells(degree)
        if degree >= len(self.images):
            return out
        for i, (d, j, sign) in enumerate(self.images[degree]):
            if sign and d == degree:
                out[i] = sign * values[j]
        return out

    def push_chain(self, degree: int, chain: dict) -> dict:
        acc = {}
        for i, c in chain.items():
            d, j, sign = self.images[degree][i]
            if sign and d == degree:
                acc[j] = acc.get(j, 0) + sign * c
        return {j: c for j, c in acc.items() if c}

    def is_chain_map(self) -> bool:
        for k in range(1, len(self.source.cells)):
            for i in range(self.source.n_cells(k)):
                lhs = self.push_chain(k - 1, self.source.boundary[k][i])
                d, j, sign = self.images[k][i]
                rhs = {}
                if sign and d == k:
                    rhs = {f: sign * c for f, c in self.target.boundary[k][j].items()}
                if lhs != rhs:
                    return False
        return True

    def image_key(self, degree: int, i: int):
        d, j, _ = self.images[degree][i]
        return d, self.target.cells[d][j]


def quotient_by_free_action(X: CellComplex, actions, name: str = ""):
    """Quotient of X by a group acting freely on cells.

    ``actions`` lists every group element as ``g(key) -> (key', sign)``, the
    identity first.  Orbit representatives are the smallest keys.  Returns
    ``(quotient, relabeled, projection)``: ``relabeled`` is X with each cell
    reoriented so that the projection has all incidence signs +1.
    """
    from ..covers import CoveringMap

    group = list(actions)
    rep = [dict() for _ in X.cells]  # key -> (orbit rep key, sign)
    for k, level in enumerate(X.cells):
        for key in level:
            if key in rep[k]:
                continue
            orbit = []
            for g in group:
                gk, s = g(key)
                if gk not in X.index[k]:
                    raise ComplexError(f"action does not preserve cells: {key!r} -> {gk!r}")
                orbit.append((gk, s))
            keys = [o[0] for o in orbit]
            if len(set(keys)) != len(group):
                raise ComplexError(
                    f"action is not free on cell {key!r}; subdivide the complex further")
            r = min(keys)
            r_sign = dict(orbit)[r]
            # g.e_key = s e_{gk}  =>  e_{gk} ~ s e_key ~ s * r_sign e_r
            for gk, s in orbit:
                rep[k][gk] = (r, s * r_sign)
    cells = [sorted({r for r, _ in rep[k].values()}) for k in range(len(X.cells))]
    index = [{key: i for i, key in enumerate(level)} for level in cells]
    boundary = [[{} for _ in cells[0]]]
    for k in range(1, len(cells)):
        level = []
        for key in cells[k]:
            acc = {}
            i = X.index[k][key]
            for j, c in X.boundary[k][i].items():
                fr, fs = rep[k - 1][X.cells[k - 1][j]]
                t = index[k - 1][fr]
                acc[t] = acc.get(t, 0) + c * fs
            level.append({t: c for t, c in acc.items() if c})
        boundary.append(level)
    quotient = CellComplex(cells, boundary, name=name or f"{X.name}/G", truncated_at=X.truncated_at)
    # reorient: e'_key = s e_key so that e'_key maps to +e_rep
    signs = [[rep[k][key][1] for key in X.cells[k]] for k in range(len(X.cells))]
    relabeled_bd = [[{} for _ in X.cells[0]]]
    for k in range(1, len(X.cells)):
        relabeled_bd.append([
            {j: c * signs[k][i] * signs[k - 1][j] for j, c in faces.items()}
            for i, faces in enumerate(X.boundary[k])
        ])
    relabeled = CellComplex(X.cells, relabeled_bd, name=X.name, truncated_at=X.truncated_at)
    assignment = [[index[k][rep[k][key][0]] for key in X.cells[k]] for k in range(len(X.cells))]
    projection = CoveringMap(relabeled, quotient, assignment)
    return quotient, relabeled, projection
