"""Small double groupoids used throughout the tests and as golden files."""

import random

from .core import FiniteDoubleGroupoid
from .groupoid import (FiniteGroupoid, cyclic_group_groupoid, pair_groupoid,
                       trivial_groupoid)


def point_double_groupoid():
    """PT: one point, one arrow each way, one box."""
    V = trivial_groupoid([0])
    H = trivial_groupoid([0])
    box = "th"
    g, x = V.ident[0], H.ident[0]
    return FiniteDoubleGroupoid(
        [0], V, H, [box],
        t={box: x}, b={box: x}, l={box: g}, r={box: g},
        hcomp={(box, box): box}, vcomp={(box, box): box},
        vid={g: box}, hid={x: box},
        hinv={box: box}, vinv={box: box}, theta={0: box},
    )


def vacant_double_group(a, b):
    """Vacant double groupoid over a point: V = Z/a, H = Z/b, B = V x H.

    The box (v, h) has l = r = v and t = b = h; each composition adds
    the matching coordinate.
    """
    V = cyclic_group_groupoid(a)
    H = cyclic_group_groupoid(b)
    boxes = [(v, h) for v in range(a) for h in range(b)]
    hcomp = {((v, h), (v2, h2)): (v, (h + h2) % b)
             for v, h in boxes for v2, h2 in boxes if v == v2}
    vcomp = {((v, h), (v2, h2)): ((v + v2) % a, h)
             for v, h in boxes for v2, h2 in boxes if h == h2}
    return FiniteDoubleGroupoid(
        [0], V, H, boxes,
        t={A: A[1] for A in boxes}, b={A: A[1] for A in boxes},
        l={A: A[0] for A in boxes}, r={A: A[0] for A in boxes},
        hcomp=hcomp, vcomp=vcomp,
        vid={v: (v, 0) for v in range(a)},
        hid={h: (0, h) for h in range(b)},
        hinv={(v, h): (v, (-h) % b) for v, h in boxes},
        vinv={(v, h): ((-v) % a, h) for v, h in boxes},
        theta={0: (0, 0)},
    )


def vac22_double_groupoid():
    """VAC22: the vacant double groupoid with V = H = Z/2."""
    return vacant_double_group(2, 2)


def pair2_double_groupoid():
    """PAIR2: points {0,1}, V = H = pair groupoid, one box per corner
    quadruple (tl, tr, bl, br)."""
    pts = [0, 1]
    V = pair_groupoid(pts)
    H = pair_groupoid(pts)
    boxes = [(tl, tr, bl, br) for tl in pts for tr in pts
             for bl in pts for br in pts]
    hcomp = {}
    vcomp = {}
    for A in boxes:
        for B in boxes:
            if (A[1], A[3]) == (B[0], B[2]):
                hcomp[(A, B)] = (A[0], B[1], A[2], B[3])
            if (A[2], A[3]) == (B[0], B[1]):
                vcomp[(A, B)] = (A[0], A[1], B[2], B[3])
    return FiniteDoubleGroupoid(
        pts, V, H, boxes,
        t={A: (A[0], A[1]) for A in boxes},
        b={A: (A[2], A[3]) for A in boxes},
        l={A: (A[0], A[2]) for A in boxes},
        r={A: (A[1], A[3]) for A in boxes},
        hcomp=hcomp, vcomp=vcomp,
        vid={(q, p): (q, q, p, p) for q in pts for p in pts},
        hid={(q, p): (q, p, q, p) for q in pts for p in pts},
        hinv={A: (A[1], A[0], A[3], A[2]) for A in boxes},
        vinv={A: (A[2], A[3], A[0], A[1]) for A in boxes},
        theta={P: (P, P, P, P) for P in pts},
    )


def relabel_boxes(dg, mapping):
    """Transport the box structure along an id bijection."""
    m = mapping

    def remap_table(table):
        return {(m[A], m[B]): m[C] for (A, B), C in table.items()}

    return FiniteDoubleGroupoid(
        dg.points, dg.V, dg.H, [m[A] for A in dg.boxes],
        t={m[A]: v for A, v in dg.t.items()},
        b={m[A]: v for A, v in dg.b.items()},
        l={m[A]: v for A, v in dg.l.items()},
        r={m[A]: v for A, v in dg.r.items()},
        hcomp=remap_table(dg.hcomp), vcomp=remap_table(dg.vcomp),
        vid={g: m[A] for g, A in dg.vid.items()},
        hid={x: m[A] for x, A in dg.hid.items()},
        hinv={m[A]: m[B] for A, B in dg.hinv.items()},
        vinv={m[A]: m[B] for A, B in dg.vinv.items()},
        theta={P: m[A] for P, A in dg.theta.items()},
    )


def random_double_groupoid(seed, max_boxes=12):
    """A valid double groupoid with at most max_boxes boxes, with box ids
    shuffled so no table is in canonical order."""
    rng = random.Random(seed)
    shapes = [(a, b) for a in (1, 2, 3, 4) for b in (1, 2, 3, 4)
              if a * b <= max_boxes]
    a, b = rng.choice(shapes)
    dg = vacant_double_group(a, b)
    ids = list(range(len(dg.boxes)))
    rng.shuffle(ids)
    mapping = {A: i for A, i in zip(dg.boxes, ids)}
    return relabel_boxes(dg, mapping)
