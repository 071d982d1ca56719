"""Integer cohomology groups with explicit coordinates, cup and cross products."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import CellComplex, ComplexError, ProdCellComplex, SimplicialComplex
from .linalg import matvec, smith_normal_form


class CohomologyGroup:
    """H^k of a cell complex as Z/t_1 + ... + Z/t_s + Z^r, with coordinates.

    Coordinates of a cocycle are ``(torsion part mod t_i, ..., free part)``.
    Generators are representative cocycles in the same order.
    """

    def __init__(self, complex: CellComplex, degree: int):
        self.complex = complex
        self.degree = degree
        red = complex.reduction
        k = degree
        rem = red.remaining
        self._cells = rem[k] if k < len(rem) else []
        pos = {c: i for i, c in enumerate(self._cells)}
        n = len(self._cells)
        prev = rem[k - 1] if 0 < k < len(rem) else []
        nxt = rem[k + 1] if k + 1 < len(rem) else []
        # reduced coboundary delta_{k-1}: rows = degree-k cells, cols = degree-(k-1) cells
        prev_pos = {c: j for j, c in enumerate(prev)}
        D = [[0] * len(prev) for _ in range(n)]
        for cell in self._cells:
            if k > 0:
                for face, c in red.boundary[k][cell].items():
                    D[pos[cell]][prev_pos[face]] = c
        if n and prev:
            snf = smith_normal_form(D)
            U, Ui, diag = snf.row_ops, snf.left, snf.diagonal
        else:
            U = Ui = [[int(i == j) for j in range(n)] for i in range(n)]
            diag = []
        r = len(diag)
        # delta_k in the new basis, restricted to the non-image coordinates
        W = [[0] * (n - r) for _ in nxt]
        for row, cell in enumerate(nxt):
            for face, c in red.boundary[k + 1][cell].items():
                col_src = Ui[pos[face]]
                for t in range(r, n):
                    if col_src[t]:
                        W[row][t - r] += c * col_src[t]
        W = [row for row in W if any(row)]
        if W and n - r:
            snf2 = smith_normal_form(W, ncols=n - r, transforms="columns")
            r2 = snf2.rank
            kernel = [row[r2:] for row in snf2.col_ops]
            kernel_inv_rows = snf2.right[r2:]
        else:
            m = n - r
            kernel = [[int(i == j) for j in range(m)] for i in range(m)]
            kernel_inv_rows = kernel
        self._U = U
        self._Ui = Ui
        self._r = r
        self._torsion_idx = [i for i, d in enumerate(diag) if d > 1]
        self.torsion = [diag[i] for i in self._torsion_idx]
        self._kernel = kernel
        self._kernel_inv = kernel_inv_rows
        self.rank = len(kernel_inv_rows)
        self._generators = None

    def __repr__(self):
        parts = [f"Z/{t}" for t in self.torsion] + (["Z^%d" % self.rank] if self.rank else [])
        return f"H^{self.degree}({self.complex.name}) = " + (" + ".join(parts) or "0")

    @property
    def n_generators(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def orders(self) -> list:
        """Order of each generator, 0 meaning infinite."""
        return self.torsion + [0] * self.rank

    def _reduced(self, values: list) -> list:
        sparse = {i: v for i, v in enumerate(values) if v}
        red = self.complex.reduction.restrict_cochain(self.degree, sparse)
        return [red.get(c, 0) for c in self._cells]

    def coordinates(self, values: list) -> tuple:
        """Class coordinates of a cocycle given as a dense value list."""
        y = matvec(self._U, self._reduced(values)) if self._cells else []
        tors = [y[i] % t for i, t in zip(self._torsion_idx, self.torsion)]
        free_part = y[self._r:]
        free = [sum(a * b for a, b in zip(row, free_part)) for row in self._kernel_inv]
        return tuple(tors + free)

    def normalize(self, coords) -> tuple:
        coords = list(coords)
        for i, t in enumerate(self.torsion):
            coords[i] %= t
        return tuple(coords)

    def representative(self, coords) -> list:
        """A cocycle (dense values) with the given class coordinates."""
        n = len(self._cells)
        y = [0] * n
        for c, i in zip(coords[: len(self.torsion)], self._torsion_idx):
            y[i] = c
        free = coords[len(self.torsion):]
        for row in range(n - self._r):
            y[self._r + row] = sum(a * b for a, b in zip(self._kernel[row], free))
        x = matvec(self._Ui, y) if n else []
        sparse = {self._cells[i]: v for i, v in enumerate(x) if v}
        full = self.complex.reduction.extend_cochain(self.degree, sparse)
        out = [0] * self.complex.n_cells(self.degree)
        for i, v in full.items():
            out[i] = v
        return out

    def generators(self) -> list:
        if self._generators is None:
            gens = []
            for j in range(self.n_generators):
                coords = [0] * self.n_generators
                coords[j] = 1
                gens.append(CohomologyClass(self.complex, self.degree, self.representative(coords)))
            self._generators = gens
        return self._generators

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self.complex, self.degree, [0] * self.complex.n_cells(self.degree))


@dataclass(eq=False)
class CohomologyClass:
    """A cocycle on a complex, compared modulo coboundaries."""

    complex: CellComplex
    degree: int
    values: list

    def __post_init__(self):
        self.values = list(self.values)
        if len(self.values) != self.complex.n_cells(self.degree):
            raise ComplexError("cochain length does not match the number of cells")

    @property
    def group(self) -> CohomologyGroup:
        return self.complex.cohomology(self.degree)

    def is_cocycle(self) -> bool:
        return not any(self.complex.coboundary(self.degree, self.values))

    def coordinates(self) -> tuple:
        return self.group.coordinates(self.values)

    def _check(self, other):
        if other.complex is not self.complex or other.degree != self.degree:
            raise ComplexError("classes live in different groups")

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        self._check(other)
        return self.coordinates() == other.coordinates()

    def __add__(self, other):
        self._check(other)
        return CohomologyClass(self.complex, self.degree, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CohomologyClass(self.complex, self.degree, [-a for a in self.values])

    def __rmul__(self, n: int):
        return CohomologyClass(self.complex, self.degree, [n * a for a in self.values])

    def is_zero(self) -> bool:
        return not any(self.coordinates())


def unit_class(K: CellComplex) -> CohomologyClass:
    return CohomologyClass(K, 0, [1] * K.n_cells(0))


def cohomology(K: CellComplex, k: int) -> list:
    """Representative cocycles: torsion generators first, then a free basis."""
    return K.cohomology(k).generators()


def cup(alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """Alexander-Whitney cup product on a simplicial host."""
    K = alpha.complex
    if beta.complex is not K:
        raise ComplexError("cup product of classes on different complexes")
    if not isinstance(K, SimplicialComplex):
        raise ComplexError("cup product needs a simplicial host; simplicialize first")
    values = K.cup(alpha.degree, alpha.values, beta.degree, beta.values)
    return CohomologyClass(K, alpha.degree + beta.degree, values)


def relative_cup(rel, alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """Cup of an absolute class on K with a relative class on (K, A); result relative."""
    K = rel.parent
    if not isinstance(K, SimplicialComplex) or alpha.complex is not K or beta.complex is not rel:
        raise ComplexError("relative cup expects (absolute on K, relative on (K, A))")
    b_abs = rel.to_absolute(beta.degree, beta.values)
    prod = K.cup(alpha.degree, alpha.values, beta.degree, b_abs)
    k = alpha.degree + beta.degree
    return CohomologyClass(rel, k, rel.from_absolute(k, prod))


def cross_cochain(P: ProdCellComplex, alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    """(a x b)(s, t) = a(s) b(t) when the dimensions match, else 0."""
    if len(P.factors) != 2 or P.factors[0] is not alpha.complex or P.factors[1] is not beta.complex:
        raise ComplexError("product complex does not match the factors of the classes")
    K, L = P.factors
    p, q = alpha.degree, beta.degree
    k = p + q
    out = [0] * P.n_cells(k)
    ik, il = K.index[p], L.index[q]
    for i, (s, t) in enumerate(P.cells[k]):
        a = ik.get(s)
        if a is None:
            continue
        b = il.get(t)
        if b is None:
            continue
        x = alpha.values[a]
        if x:
            out[i] = x * beta.values[b]
    return CohomologyClass(P, k, out)


def cross(alpha: CohomologyClass, beta: CohomologyClass, product: ProdCellComplex | None = None) -> CohomologyClass:
    if product is None:
        product = ProdCellComplex([alpha.complex, beta.complex])
    return cross_cochain(product, alpha, beta)


def relative_cohomology(K: CellComplex, A: CellComplex, k: int) -> list:
    return cohomology(K.relative(A), k)
