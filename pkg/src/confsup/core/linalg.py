"""Exact integer linear algebra.

Dense Smith normal form with unimodular transforms for small matrices, and a
sparse elimination of unit pivots that shrinks a chain complex to a small
chain-homotopy-equivalent one while remembering how to move cochains back and
forth.  All arithmetic uses Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field


Matrix = list  # list of rows, each a list of ints


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(a: Matrix, v: list) -> list:
    return [sum(x * y for x, y in zip(row, v) if x) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def determinant(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SNFResult:
    """``left @ diag(diagonal) @ right == A`` and ``row_ops @ A @ col_ops == diag``.

    ``row_ops``/``col_ops`` are the inverses of ``left``/``right``.  ``diagonal``
    lists the nonzero invariant factors, each dividing the next.
    """

    shape: tuple
    diagonal: list
    left: Matrix | None = None
    right: Matrix | None = None
    row_ops: Matrix | None = None
    col_ops: Matrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diag_matrix(self) -> Matrix:
        m, n = self.shape
        d = zeros(m, n)
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return d


def smith_normal_form(a: Matrix, ncols: int | None = None, transforms: bool | str = True) -> SNFResult:
    """Smith normal form by elimination, pivoting on the smallest nonzero entry.

    ``transforms="columns"`` tracks only the column transforms, which is all a
    kernel computation needs and avoids an m x m row transform.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    A = [list(row) for row in a]
    cols = bool(transforms)
    transforms = transforms is True
    if transforms:
        U, Ui = identity(m), identity(m)  # U @ A_orig @ V == A ; Ui = U^-1
    if cols:
        V, Vi = identity(n), identity(n)

    def row_add(dst, src, q):  # row_dst -= q * row_src
        ra, rs = A[dst], A[src]
        for j in range(n):
            if rs[j]:
                ra[j] -= q * rs[j]
        if transforms:
            ud, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ud[j] -= q * us[j]
            for row in Ui:  # col_src += q * col_dst
                if row[dst]:
                    row[src] += q * row[dst]

    def col_add(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if cols:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]
            vs, vd = Vi[src], Vi[dst]  # row_src += q * row_dst
            for j in range(n):
                if vd[j]:
                    vs[j] += q * vd[j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if cols:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for row in Ui:
                row[i] = -row[i]

    diagonal = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    row_add(i, t, q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    col_add(j, t, q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(i, t)
                else:
                    col_swap(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, -1)
        if A[t][t] < 0:
            row_neg(t)
        diagonal.append(A[t][t])
        t += 1

    res = SNFResult((m, n), diagonal)
    if transforms:
        res.row_ops, res.left = U, Ui
    if cols:
        res.col_ops, res.right = V, Vi
    return res


def integer_kernel(a: Matrix, ncols: int) -> Matrix:
    """Columns of the returned ``ncols x k`` matrix form a basis of ker(a) over Z."""
    snf = smith_normal_form([row for row in a if any(row)], ncols=ncols, transforms="columns")
    r = snf.rank
    return [row[r:] for row in snf.col_ops]


def solve_integer(a: Matrix, b: list, ncols: int | None = None):
    """Return an integer ``x`` with ``a @ x == b``, or None if there is none."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    snf = smith_normal_form(a, ncols=n)
    ub = matvec(snf.row_ops, b) if m else []
    z = [0] * n
    for i, d in enumerate(snf.diagonal):
        if ub[i] % d:
            return None
        z[i] = ub[i] // d
    if any(ub[snf.rank:]):
        return None
    return matvec(snf.col_ops, z) if n else []


@dataclass
class _Step:
    dim: int  # dimension of the eliminated cell ``a``; ``b`` has dim - 1
    a: int
    b: int
    eps: int
    bd_a: dict  # boundary of a at elimination time (includes b)
    cob_b: dict  # cofaces of b at elimination time (excludes a)


@dataclass
class Reduction:
    """Result of eliminating unit pivots from a chain complex.

    ``remaining[k]`` lists surviving cell indices of degree k and
    ``boundary[k][cell]`` their reduced boundaries.  When ``steps`` were
    recorded, ``restrict_cochain`` and ``extend_cochain`` realise the dual
    chain equivalences between the original and reduced cochain complexes.
    """

    remaining: list
    boundary: list
    steps: list = field(default_factory=list)
    recorded: bool = False

    def restrict_cochain(self, degree: int, values: dict) -> dict:
        if not self.recorded:
            raise ValueError("reduction was run without recording steps")
        x = dict(values)
        for st in self.steps:
            if st.dim == degree:
                va = x.pop(st.a, 0)
                if va:
                    f = st.eps * va
                    for y, c in st.cob_b.items():
                        x[y] = x.get(y, 0) - f * c
            elif st.dim - 1 == degree:
                x.pop(st.b, None)
        return {k: v for k, v in x.items() if v}

    def extend_cochain(self, degree: int, values: dict) -> dict:
        if not self.recorded:
            raise ValueError("reduction was run without recording steps")
        y = {k: v for k, v in values.items() if v}
        for st in reversed(self.steps):
            if st.dim - 1 == degree:
                s = 0
                for z, c in st.bd_a.items():
                    if z != st.b:
                        v = y.get(z)
                        if v:
                            s += c * v
                if s:
                    y[st.b] = -st.eps * s
        return y


def reduce_chain_complex(boundary: list, record: bool = False) -> Reduction:
    """Eliminate pairs (a, b) with ``<d a, b> = +-1`` until none remain.

    ``boundary[k][i]`` is a dict ``{face index: coefficient}`` for cell ``i``
    of degree ``k`` (``boundary[0]`` holds empty dicts).  The input is not
    modified.
    """
    top = len(boundary) - 1
    B = [{i: dict(f) for i, f in enumerate(level)} for level in boundary]
    C = [{i: {} for i in range(len(level))} for level in boundary]
    for k in range(1, top + 1):
        ck = C[k - 1]
        for i, f in B[k].items():
            for j, c in f.items():
                ck[j][i] = c
    steps = []

    def eliminate(k, a, b):
        da = B[k].pop(a)
        eps = da[b]
        for z in da:
            del C[k - 1][z][a]
        if k < top:
            for w in C[k].pop(a):
                del B[k + 1][w][a]
        else:
            C[k].pop(a)
        cob = C[k - 1].pop(b)
        db = B[k - 1].pop(b)
        if k >= 2:
            for z in db:
                del C[k - 2][z][b]
        ck = C[k - 1]
        for y, cyb in cob.items():
            f = eps * cyb
            by = B[k][y]
            del by[b]
            for z, c in da.items():
                if z == b:
                    continue
                v = by.get(z, 0) - f * c
                if v:
                    by[z] = v
                    ck[z][y] = v
                else:
                    del by[z]
                    del ck[z][y]
        if record:
            steps.append(_Step(k, a, b, eps, da, cob))

    for limit in (1, 2, 4, None):
        changed = True
        while changed:
            changed = False
            for k in range(top, 0, -1):
                bk, ck = B[k], C[k - 1]
                for a in list(bk):
                    da = bk.get(a)
                    if da is None:
                        continue
                    best, best_cost = None, None
                    for b, c in da.items():
                        if c == 1 or c == -1:
                            cost = len(ck[b])
                            if best is None or cost < best_cost:
                                best, best_cost = b, cost
                                if cost == 1:
                                    break
                    if best is not None and (limit is None or best_cost <= limit):
                        eliminate(k, a, best)
                        changed = True

    remaining = [sorted(level) for level in B]
    bd = [{i: level[i] for i in rem} for level, rem in zip(B, remaining)]
    return Reduction(remaining, bd, steps, record)
