"""Small named complexes and covers used by the tests and the CLI."""

from __future__ import annotations

import itertools

from .core.complexes import SimplicialComplex, build_complex
from .covers import identity_cover, simplicial_cover


def interval(n_edges: int = 2) -> SimplicialComplex:
    return build_complex([[i, i + 1] for i in range(n_edges)], name="interval")


def circle(n: int = 3) -> SimplicialComplex:
    return build_complex([[i, (i + 1) % n] for i in range(n)], name=f"circle{n}")


def disk() -> SimplicialComplex:
    """The 2-simplex."""
    return build_complex([[0, 1, 2]], name="disk")


def sphere() -> SimplicialComplex:
    """Boundary of the 3-simplex."""
    return build_complex([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], name="sphere")


def torus() -> SimplicialComplex:
    """Seven-vertex (Moebius) torus."""
    tris = []
    for i in range(7):
        tris.append([i, (i + 1) % 7, (i + 3) % 7])
        tris.append([i, (i + 2) % 7, (i + 3) % 7])
    return build_complex(tris, name="torus")


def annulus() -> SimplicialComplex:
    tris = []
    for i in range(3):
        j = (i + 1) % 3
        tris.append([i, j, 3 + i])
        tris.append([j, 3 + i, 3 + j])
    return build_complex(tris, name="annulus")


def icosahedron() -> SimplicialComplex:
    """Icosahedron labelled so that the antipode of v is (v + 6) mod 12."""
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for a, b in itertools.product((1, -1), repeat=2):
        pts += [(0, a, b * phi), (a, b * phi, 0), (b * phi, 0, a)]
    half = [p for p in pts if p > tuple(-x for x in p)]
    coords = half + [tuple(-x for x in p) for p in half]

    def dist2(p, q):
        return sum((x - y) ** 2 for x, y in zip(p, q))

    edge = min(dist2(coords[0], q) for q in coords[1:])
    adj = {(i, j) for i in range(12) for j in range(12) if i != j and abs(dist2(coords[i], coords[j]) - edge) < 1e-9}
    tris = [t for t in itertools.combinations(range(12), 3)
            if (t[0], t[1]) in adj and (t[1], t[2]) in adj and (t[0], t[2]) in adj]
    return build_complex(tris, name="icosahedron")


def projective_plane() -> SimplicialComplex:
    """Six-vertex RP^2: the icosahedron modulo the antipodal map v -> v +- 6."""
    ico = icosahedron()
    return build_complex({tuple(sorted(v % 6 for v in s)) for s in ico.cells[2]}, name="RP2")


def covers() -> dict:
    """Named coverings of small bases, of degrees 1 to 3."""
    c3, c6, c9 = circle(3), circle(6), circle(9)
    out = {}
    out["identity-circle"] = identity_cover(c3)
    out["circle-double"] = simplicial_cover(c6, c3, lambda v: v % 3, name="circle6")
    out["circle-triple"] = simplicial_cover(c9, c3, lambda v: v % 3, name="circle9")
    two = build_complex([[i, (i + 1) % 3] for i in range(3)] + [[3 + i, 3 + (i + 1) % 3] for i in range(3)],
                        name="circle3+circle3")
    out["circle-trivial-double"] = simplicial_cover(two, c3, lambda v: v % 3, name="2 circle3")
    ico, rp2 = icosahedron(), projective_plane()
    out["sphere-RP2"] = simplicial_cover(ico, rp2, lambda v: v % 6, name="icosahedron")
    iv = interval(2)
    ivs = build_complex([[0, 1], [1, 2], [3, 4], [4, 5]], name="interval+interval")
    out["interval-trivial-double"] = simplicial_cover(ivs, iv, lambda v: v % 3, name="2 interval")
    out["identity-interval"] = identity_cover(iv)
    return out


def named_complex(name: str) -> SimplicialComplex:
    table = {
        "interval": interval, "circle": circle, "disk": disk, "sphere": sphere,
        "torus": torus, "annulus": annulus, "rp2": projective_plane, "icosahedron": icosahedron,
    }
    if name not in table:
        raise KeyError(name)
    return table[name]()


NAMES = ("interval", "circle", "disk", "sphere", "torus", "annulus", "rp2", "icosahedron")
