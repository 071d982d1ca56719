"""Symmetric products on finite labelled configurations.

A :class:`FormalSum` is an element of the free abelian monoid on a set with
a distinguished basepoint; the basepoint is the monoid identity and is never
stored.  Configurations are :class:`LabelledConfig` values; pairs of them
model points of a smash product, and a pair is the basepoint as soon as one
side is.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Hashable, Iterable

from .report import Report


class _BasepointLabel:
    __slots__ = ()

    def __repr__(self):
        return "x0"

    def __reduce__(self):
        return "X0"


X0 = _BasepointLabel()
"""The basepoint of the label space; a point carrying it is degenerate."""


class _Basepoint:
    __slots__ = ()

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return "BASEPOINT"


BASEPOINT = _Basepoint()


class MalformedCover(ValueError):
    pass


@dataclass(frozen=True)
class LabelledConfig:
    """Finite set of distinct points, each with an optional label.

    ``marked`` holds points that lie in the collapsed submanifold.
    """

    points: frozenset
    labels: tuple = ()  # sorted (point, label) pairs
    marked: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        lab = dict(self.labels) if not isinstance(self.labels, dict) else self.labels
        if set(lab) - self.points:
            raise ValueError("labels given for points outside the configuration")
        object.__setattr__(self, "labels", tuple(sorted(lab.items(), key=lambda kv: kv[0])))
        object.__setattr__(self, "marked", frozenset(self.marked) & self.points)

    @classmethod
    def of(cls, *points, labels=None, marked=()) -> "LabelledConfig":
        return cls(frozenset(points), tuple((labels or {}).items()), frozenset(marked))

    def __len__(self):
        return len(self.points)

    @property
    def degenerate(self) -> bool:
        return bool(self.marked) or any(lab is X0 for _, lab in self.labels)

    @property
    def is_basepoint(self) -> bool:
        return not self.points or self.degenerate

    def restrict(self, subset) -> "LabelledConfig":
        subset = frozenset(subset)
        return LabelledConfig(
            subset & self.points,
            tuple((p, l) for p, l in self.labels if p in subset),
            self.marked & subset,
        )

    def __repr__(self):
        lab = dict(self.labels)
        pts = ",".join(f"{p}:{lab[p]}" if p in lab else str(p) for p in sorted(self.points))
        return f"xi{{{pts}}}"

    def __lt__(self, other):
        return _sort_key(self) < _sort_key(other)


@dataclass(frozen=True)
class ColoredConfig:
    """A configuration split into colour classes (blue, red, ...)."""

    blocks: tuple

    @property
    def is_basepoint(self) -> bool:
        return any(b.degenerate for b in self.blocks) or not any(b.points for b in self.blocks)

    def forget(self) -> LabelledConfig:
        pts = frozenset().union(*(b.points for b in self.blocks))
        labels = tuple(kv for b in self.blocks for kv in b.labels)
        marked = frozenset().union(*(b.marked for b in self.blocks))
        return LabelledConfig(pts, labels, marked)


def is_basepoint(x) -> bool:
    """Basepoint rule for configurations, smash pairs and the explicit basepoint."""
    if x is BASEPOINT:
        return True
    if isinstance(x, (LabelledConfig, ColoredConfig)):
        return x.is_basepoint
    if isinstance(x, tuple) and x and all(isinstance(y, (LabelledConfig, ColoredConfig)) for y in x):
        return any(is_basepoint(y) for y in x)
    return False


def _sort_key(x):
    if isinstance(x, LabelledConfig):
        return (0, len(x.points), tuple(sorted(x.points)), repr(x.labels))
    if isinstance(x, tuple):
        return (1, tuple(_sort_key(y) for y in x))
    return (2, repr(x))


class FormalSum:
    """Finite multiset with positive multiplicities; basepoint terms are dropped."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable | dict | None = None):
        c = Counter()
        if terms is None:
            pass
        elif isinstance(terms, (dict, Counter, FormalSum)):
            for x, n in (terms.items()):
                if n < 0:
                    raise ValueError("multiplicities are non-negative")
                c[x] += n
        else:
            for x in terms:
                c[x] += 1
        self._terms = {x: n for x, n in c.items() if n and not is_basepoint(x)}
        self._hash = None

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __getitem__(self, x):
        return self._terms.get(x, 0)

    def __len__(self):
        """Number of distinct terms."""
        return len(self._terms)

    def size(self) -> int:
        """Total multiplicity."""
        return sum(self._terms.values())

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other):
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        if isinstance(other, dict):
            return self == FormalSum(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return sum_add(self, other)

    def __rmul__(self, n: int) -> "FormalSum":
        if n < 0:
            raise ValueError("formal sums cannot be negated")
        return FormalSum({x: n * m for x, m in self._terms.items()})

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        body = ", ".join(f"{x!r}:{n}" for x, n in sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0])))
        return "{" + body + "}"

    def map(self, f: Callable) -> "FormalSum":
        """SP(f) for a single-valued f."""
        c = Counter()
        for x, n in self._terms.items():
            c[f(x)] += n
        return FormalSum(c)

    def bind(self, f: Callable) -> "FormalSum":
        """Additive extension of a multivalued f: sum of n * f(x)."""
        c = Counter()
        for x, n in self._terms.items():
            for y, m in f(x).items():
                c[y] += n * m
        return FormalSum(c)


EMPTY = FormalSum()


def sum_add(a: FormalSum, b: FormalSum) -> FormalSum:
    c = Counter(dict(a.items()))
    for x, n in b.items():
        c[x] += n
    return FormalSum(c)


def subsets(points) -> Iterable[frozenset]:
    pts = sorted(points)
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            yield frozenset(combo)


def scan(xi: LabelledConfig) -> FormalSum:
    """Sum of all sub-configurations; empty and degenerate ones are absorbed."""
    return FormalSum(xi.restrict(J) for J in subsets(xi.points))


def diag(xi: LabelledConfig):
    if xi.is_basepoint:
        return BASEPOINT
    return (xi, xi)


def phi(xi: LabelledConfig) -> FormalSum:
    """Sum over ordered decompositions I = A u B into disjoint parts."""
    I = xi.points
    return FormalSum((xi.restrict(A), xi.restrict(I - A)) for A in subsets(I))


def psi(xi: LabelledConfig) -> FormalSum:
    """Sum over ordered pairs (A, B) of subsets with A u B = I."""
    I = xi.points
    out = []
    for A in subsets(I):
        rest = I - A
        for extra in subsets(A):
            out.append((xi.restrict(A), xi.restrict(rest | extra)))
    return FormalSum(out)


def phi_component(p: int, q: int, r: int, xi: LabelledConfig) -> FormalSum:
    if len(xi.points) != p:
        raise ValueError(f"configuration has {len(xi.points)} points, expected {p}")
    if p != q + r:
        return EMPTY
    I = xi.points
    pts = sorted(I)
    return FormalSum((xi.restrict(A), xi.restrict(I - set(A))) for A in itertools.combinations(pts, q))


def psi_component(p: int, q: int, r: int, xi: LabelledConfig) -> FormalSum:
    if len(xi.points) != p:
        raise ValueError(f"configuration has {len(xi.points)} points, expected {p}")
    if q + r < p or q > p or r > p:
        return EMPTY
    I = xi.points
    pts = sorted(I)
    out = []
    for A in itertools.combinations(pts, q):
        rest = I - set(A)
        # B must contain the complement of A and then r - |rest| points of A
        need = r - len(rest)
        if need < 0:
            continue
        for extra in itertools.combinations(A, need):
            out.append((xi.restrict(A), xi.restrict(rest | set(extra))))
    return FormalSum(out)


@dataclass
class MultiMap:
    """A based multivalued function given by a function to formal sums.

    ``span`` optionally presents it as (cover, map): ``cover`` sends each
    element of an intermediate set to the domain, ``map`` sends it on to the
    target, and the value at x is the sum of ``map`` over the fiber of x.
    """

    func: Callable
    domain: tuple = ()
    span: tuple | None = None

    def __call__(self, x) -> FormalSum:
        if is_basepoint(x):
            return EMPTY
        return self.func(x)

    def check_span(self) -> bool:
        if self.span is None:
            return True
        cover, fmap = self.span
        fibers = {}
        for t, x in cover.items():
            fibers.setdefault(x, []).append(t)
        for x in self.domain:
            via = FormalSum(fmap(t) for t in fibers.get(x, ()))
            if via != self(x):
                return False
        return True


def multimap(func: Callable, domain: Iterable = ()) -> MultiMap:
    return MultiMap(func, tuple(domain))


def triangle(f: MultiMap, g: MultiMap) -> MultiMap:
    """(f tri g)(a, c) = sum over pairs of terms of f(a) and g(c)."""

    def fg(pair):
        if is_basepoint(pair) or pair is BASEPOINT:
            return EMPTY
        a, c = pair
        fa, gc = f(a), g(c)
        out = Counter()
        for x, n in fa.items():
            for y, m in gc.items():
                out[(x, y)] += n * m
        return FormalSum(out)

    span = None
    if f.span is not None and g.span is not None:
        (cf, mf), (cg, mg) = f.span, g.span
        cover = {(s, t): (cf[s], cg[t]) for s in cf for t in cg}
        span = (cover, lambda st: (mf(st[0]), mg(st[1])))
    return MultiMap(fg, tuple(itertools.product(f.domain, g.domain)), span)


def cover_inverse(forward: dict, degree: int | None = None, base: Iterable | None = None) -> MultiMap:
    """Invert a finite-sheeted covering given as ``{total element: base element}``.

    Every non-basepoint base element must have exactly ``degree`` preimages.
    """
    fibers = {}
    for t, x in forward.items():
        if is_basepoint(x):
            continue
        fibers.setdefault(x, []).append(t)
    domain = list(base) if base is not None else list(fibers)
    domain = [x for x in domain if not is_basepoint(x)]
    sizes = {len(fibers.get(x, ())) for x in domain}
    if degree is None:
        if len(sizes) > 1:
            raise MalformedCover(f"fiber sizes differ: {sorted(sizes)}")
        degree = sizes.pop() if sizes else 0
    elif sizes - {degree}:
        raise MalformedCover(f"fiber sizes {sorted(sizes)} do not match degree {degree}")

    def inv(x):
        return FormalSum(fibers.get(x, ()))

    m = MultiMap(inv, tuple(domain), (dict(forward), lambda t: t))
    m.degree = degree
    return m


def colorings(xi: LabelledConfig, sizes) -> list:
    """All ways to split xi into colour blocks of the given sizes."""
    pts = sorted(xi.points)
    if sum(sizes) != len(pts):
        return []
    out = []

    def rec(remaining, k, acc):
        if k == len(sizes):
            out.append(ColoredConfig(tuple(acc)))
            return
        for block in itertools.combinations(sorted(remaining), sizes[k]):
            rec(remaining - set(block), k + 1, acc + [xi.restrict(block)])

    rec(frozenset(pts), 0, [])
    return out


def color_forget_presentation(configs: Iterable[LabelledConfig], n: int, m: int) -> dict:
    """Forward map of the colour-forgetting cover over the given configurations."""
    forward = {}
    for xi in configs:
        for c in colorings(xi, (n, m)):
            forward[c] = xi
    return forward


def all_configs(max_size: int, labels=(None,)) -> list:
    """Every configuration on points 1..k, k <= max_size, labels from the alphabet."""
    out = []
    for k in range(max_size + 1):
        pts = tuple(range(1, k + 1))
        for labs in itertools.product(labels, repeat=k):
            lab = {p: l for p, l in zip(pts, labs) if l is not None}
            out.append(LabelledConfig(frozenset(pts), tuple(lab.items())))
    return out


def verify_psi_sigma_identity(max_size: int, labels=(None,)) -> Report:
    """Psi(sigma(xi)) == (sigma tri sigma)(Delta(xi)) for all xi with |xi| <= max_size."""
    rep = Report(f"psi-sigma[max_size={max_size}]")
    sigma = multimap(scan)
    ss = triangle(sigma, sigma)
    for xi in all_configs(max_size, labels):
        if xi.degenerate:
            continue
        rep.checked += 1
        lhs = scan(xi).bind(psi)
        rhs = ss(diag(xi))
        if lhs != rhs:
            rep.fail(xi)
            break
    return rep


def verify_components(max_p: int) -> Report:
    """phi and psi components agree when p == q + r and vanish when q + r < p."""
    rep = Report(f"phi-psi-components[p<={max_p}]")
    for p in range(1, max_p + 1):
        xi = LabelledConfig(frozenset(range(1, p + 1)))
        for q in range(1, p + 1):
            for r in range(1, p + 1):
                a, b = phi_component(p, q, r, xi), psi_component(p, q, r, xi)
                rep.checked += 1
                if p == q + r:
                    ok = a == b and a.size() == comb(p, q)
                elif q + r < p:
                    ok = not a and not b
                else:
                    ok = not a
                if not ok:
                    rep.fail((p, q, r))
    return rep


def verify_component_reassembly(max_size: int) -> Report:
    rep = Report(f"component-reassembly[max_size={max_size}]")
    for k in range(1, max_size + 1):
        xi = LabelledConfig(frozenset(range(1, k + 1)))
        ph = EMPTY
        ps = EMPTY
        for q in range(1, k + 1):
            for r in range(1, k + 1):
                ph = ph + phi_component(k, q, r, xi)
                ps = ps + psi_component(k, q, r, xi)
        rep.checked += 1
        if ph != phi(xi) or ps != psi(xi):
            rep.fail(xi)
    return rep
