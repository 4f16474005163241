"""Cover constructions for finite groupoids and double groupoids.

Localizes a groupoid (or double groupoid) at a finite cover of its
object set, refines per-level covers of the nerve into a compatible
bisimplicial cover, and computes the cover bicomplex whose total
1-cohomology matches the discrete theory at the finest cover.
"""

import itertools

from .errors import DomainError, MalformedInputError, ResourceCapError
from .groupoid import FiniteGroupoid
from .core import (AbelianGroupBundle, DoubleAction, FiniteDoubleGroupoid)
from .cohomology import (CohomologyGroup, cell_basepoint, h_total)
from .nerve import (DEFAULT_CELL_CAP, apply_bisimplicial, cell_h_arrow,
                    cell_v_arrow, face_h, face_v, nerve_cells)


class Cover:
    """An indexed family of subsets whose union is the carrier set."""

    __slots__ = ["carrier", "sets", "indices"]

    def __init__(self, carrier, sets):
        self.carrier = frozenset(carrier)
        self.sets = {i: frozenset(U) for i, U in sets.items()}
        self.indices = sorted(self.sets)
        for i, U in self.sets.items():
            if not U <= self.carrier:
                raise MalformedInputError(
                    "cover set %r is not a subset of the carrier" % (i,))
        covered = frozenset().union(*self.sets.values()) \
            if self.sets else frozenset()
        if covered != self.carrier:
            raise MalformedInputError("sets do not cover the carrier")

    def members(self, x):
        return [i for i in self.indices if x in self.sets[i]]


def singleton_cover(carrier):
    """One set per element; the finest possible cover."""
    return Cover(carrier, {x: frozenset([x]) for x in carrier})


def coarsest_cover(carrier):
    return Cover(carrier, {0: frozenset(carrier)})


def cech_groupoid(g, cover):
    """Arrows (i, a, j) with the source of a in U_i and the end in U_j;
    objects (i, x) with x in U_i."""
    objects = [(i, x) for i in cover.indices for x in cover.sets[i]]
    arrows = [(i, a, j) for i in cover.indices for j in cover.indices
              for a in g.arrows
              if g.src[a] in cover.sets[i] and g.end[a] in cover.sets[j]]
    src = {(i, a, j): (i, g.src[a]) for i, a, j in arrows}
    end = {(i, a, j): (j, g.end[a]) for i, a, j in arrows}
    ident = {(i, x): (i, g.ident[x], i) for i, x in objects}
    comp = {}
    for i, a, j in arrows:
        for a2 in g.arrows:
            if g.src[a2] == g.end[a]:
                for k in cover.members(g.end[a2]):
                    comp[((i, a, j), (j, a2, k))] = (i, g.comp[(a, a2)], k)
    inv = {(i, a, j): (j, g.inv[a], i) for i, a, j in arrows}
    return FiniteGroupoid(objects, arrows, src, end, ident, comp, inv)


def cech_double_groupoid(dg, cover):
    """Boxes (i, j, k, l, B): corner indices clockwise from the top
    left, with each corner vertex of B inside the named cover set."""
    V = cech_groupoid(dg.V, cover)
    H = cech_groupoid(dg.H, cover)
    U = cover.sets

    def corners(B):
        return (dg.H.src[dg.t[B]], dg.H.end[dg.t[B]],
                dg.H.end[dg.b[B]], dg.H.src[dg.b[B]])

    boxes = []
    for B in dg.boxes:
        tl, tr, br, bl = corners(B)
        for i in cover.members(tl):
            for j in cover.members(tr):
                for k in cover.members(br):
                    for l in cover.members(bl):
                        boxes.append((i, j, k, l, B))
    t = {(i, j, k, l, B): (i, dg.t[B], j) for i, j, k, l, B in boxes}
    b = {(i, j, k, l, B): (l, dg.b[B], k) for i, j, k, l, B in boxes}
    lm = {(i, j, k, l, B): (i, dg.l[B], l) for i, j, k, l, B in boxes}
    r = {(i, j, k, l, B): (j, dg.r[B], k) for i, j, k, l, B in boxes}
    hcomp, vcomp = {}, {}
    for A in boxes:
        i, j, k, l, BA = A
        for B2 in boxes:
            i2, j2, k2, l2, BB = B2
            if (j, k) == (i2, l2) and (BA, BB) in dg.hcomp:
                hcomp[(A, B2)] = (i, j2, k2, l, dg.hcomp[(BA, BB)])
            if (l, k) == (i2, j2) and (BA, BB) in dg.vcomp:
                vcomp[(A, B2)] = (i, j, k2, l2, dg.vcomp[(BA, BB)])
    vid = {(i, g, l): (i, i, l, l, dg.vid[g]) for i, g, l in V.arrows}
    hid = {(i, x, j): (i, j, j, i, dg.hid[x]) for i, x, j in H.arrows}
    hinv = {(i, j, k, l, B): (j, i, l, k, dg.hinv[B])
            for i, j, k, l, B in boxes}
    vinv = {(i, j, k, l, B): (l, k, j, i, dg.vinv[B])
            for i, j, k, l, B in boxes}
    theta = {(i, P): (i, i, i, i, dg.theta[P]) for i, P in V.objects}
    return FiniteDoubleGroupoid(V.objects, V, H, boxes, t, b, lm, r,
                                hcomp, vcomp, vid, hid, hinv, vinv, theta)


def singleton_cech_isomorphism(dg, cechdg):
    """The box bijection witnessing that localizing at a one-set cover
    changes nothing."""
    if len(cechdg.boxes) != len(dg.boxes):
        raise DomainError("box counts differ; the cover is not a "
                          "single set")
    return {B: B[4] for B in cechdg.boxes}


# ---------------------------------------------------------------------------
# Bisimplicial covers of the nerve


def pmn_positions(m, n):
    """Pairs of nonempty subsets of the row and column vertex sets,
    ordered by size then lexicographically, rows before columns."""
    rows = [tuple(c) for size in range(1, m + 2)
            for c in itertools.combinations(range(m + 1), size)]
    cols = [tuple(c) for size in range(1, n + 2)
            for c in itertools.combinations(range(n + 1), size)]
    out = [(S, T) for S in rows for T in cols]
    assert len(out) == (2 ** (m + 1) - 1) * (2 ** (n + 1) - 1)
    return out


def position_matrix(m, n):
    """The positions as a (2^(m+1)-1) x (2^(n+1)-1) array of (S, T)."""
    pos = pmn_positions(m, n)
    width = 2 ** (n + 1) - 1
    return [pos[i * width:(i + 1) * width]
            for i in range(2 ** (m + 1) - 1)]


def _delta_subset(S, k):
    return tuple(v if v < k else v + 1 for v in S)


class BisimplicialCover:
    """Refined covers of the nerve levels, indexed per level by maps
    from subset pairs to indices of the supplied per-level covers.

    Only indices with a nonempty refined set are stored; an absent
    index reads as the empty set.
    """

    __slots__ = ["dg", "raw", "bound", "positions", "pos_index", "sets"]

    def __init__(self, dg, raw_levels, bound, cap=DEFAULT_CELL_CAP):
        self.dg = dg
        self.raw = dict(raw_levels)
        self.bound = bound
        self.positions = {}
        self.pos_index = {}
        self.sets = {}
        for m in range(bound[0] + 1):
            for n in range(bound[1] + 1):
                if (m, n) not in self.raw:
                    raise MalformedInputError(
                        "missing level cover at (%d,%d)" % (m, n))
                self._refine_level(m, n, cap)

    def _refine_level(self, m, n, cap):
        dg = self.dg
        pos = pmn_positions(m, n)
        self.positions[(m, n)] = pos
        self.pos_index[(m, n)] = {p: a for a, p in enumerate(pos)}
        members = {}
        lams = set()
        cells = self.raw[(m, n)].carrier
        for C in sorted(cells):
            choices = []
            for S, T in pos:
                k, l = len(S) - 1, len(T) - 1
                img = apply_bisimplicial(dg, C, S, T)
                allowed = self.raw[(k, l)].members(img)
                if not allowed:
                    raise MalformedInputError(
                        "level cover at (%d,%d) misses a cell" % (k, l))
                choices.append(allowed)
            count = 1
            for a in choices:
                count *= len(a)
                if count > cap:
                    raise ResourceCapError(
                        "refined index set too large at (%d,%d)" % (m, n))
            for lam in itertools.product(*choices):
                lams.add(lam)
                members.setdefault(lam, []).append(C)
                if len(lams) > cap:
                    raise ResourceCapError(
                        "refined index set too large at (%d,%d)" % (m, n))
        self.sets[(m, n)] = {lam: tuple(members[lam])
                             for lam in sorted(members)}

    def indices(self, m, n):
        return sorted(self.sets[(m, n)])

    def set_of(self, m, n, lam):
        return self.sets[(m, n)].get(lam, ())

    def face_index_v(self, m, n, lam, k):
        """Index map to level (m-1, n) induced by dropping vertex row k."""
        src_pos = self.positions[(m - 1, n)]
        idx = self.pos_index[(m, n)]
        return tuple(lam[idx[(_delta_subset(S, k), T)]] for S, T in src_pos)

    def face_index_h(self, m, n, lam, k):
        src_pos = self.positions[(m, n - 1)]
        idx = self.pos_index[(m, n)]
        return tuple(lam[idx[(S, _delta_subset(T, k))]] for S, T in src_pos)

    def refinement_map(self, m, n):
        """Index map to the raw cover at the same level; each refined
        set lands inside the named raw set."""
        idx = self.pos_index[(m, n)]
        top = (tuple(range(m + 1)), tuple(range(n + 1)))
        return {lam: lam[idx[top]] for lam in self.sets[(m, n)]}


def bisimplicial_refinement(dg, raw_levels, bound, cap=DEFAULT_CELL_CAP):
    return BisimplicialCover(dg, raw_levels, bound, cap)


def finest_level_covers(dg, bound, cap=DEFAULT_CELL_CAP):
    """Every cell alone in its own set, at every level up to bound."""
    out = {}
    for m in range(bound[0] + 1):
        for n in range(bound[1] + 1):
            out[(m, n)] = singleton_cover(nerve_cells(dg, m, n, cap))
    return out


def coarsest_level_covers(dg, bound, cap=DEFAULT_CELL_CAP):
    out = {}
    for m in range(bound[0] + 1):
        for n in range(bound[1] + 1):
            out[(m, n)] = coarsest_cover(nerve_cells(dg, m, n, cap))
    return out


# ---------------------------------------------------------------------------
# The cover bicomplex


class CechCochainSpace:
    """Sections over each refined cover set at one interior bidegree.

    A value assigns to each (index, cell) pair with the cell inside
    that cover set an element of the fiber at the cell basepoint.
    """

    __slots__ = ["dg", "action", "m", "n", "bsc", "keys", "base",
                 "index", "moduli"]

    def __init__(self, dg, action, bsc, m, n):
        self.dg = dg
        self.action = action
        self.bsc = bsc
        self.m = m
        self.n = n
        self.keys = [(lam, C) for lam in bsc.indices(m, n)
                     for C in bsc.set_of(m, n, lam)]
        self.base = {key: cell_basepoint(dg, key[1]) for key in self.keys}
        self.index = {}
        self.moduli = []
        for key in self.keys:
            for a, d in enumerate(action.bundle.factors[self.base[key]]):
                self.index[(key, a)] = len(self.moduli)
                self.moduli.append(d)

    def dim(self):
        return len(self.moduli)

    def to_vector(self, values):
        vec = [0] * len(self.moduli)
        for key, val in values.items():
            if key not in self.base:
                raise DomainError("value on foreign key %r" % (key,))
            facs = self.action.bundle.factors[self.base[key]]
            if len(val) != len(facs):
                raise DomainError("value %r not in the fiber" % (val,))
            for a, (v, d) in enumerate(zip(val, facs)):
                vec[self.index[(key, a)]] = v % d
        return vec

    def from_vector(self, vec):
        assert len(vec) == len(self.moduli)
        values = {}
        for key in self.keys:
            facs = self.action.bundle.factors[self.base[key]]
            val = tuple(vec[self.index[(key, a)]] % d
                        for a, d in enumerate(facs))
            if any(val):
                values[key] = val
        return values

    def basis(self):
        for key in self.keys:
            facs = self.action.bundle.factors[self.base[key]]
            for a in range(len(facs)):
                unit = tuple(1 if b == a else 0 for b in range(len(facs)))
                yield (key, a), {key: unit}


def cech_coboundary_values_v(dg, action, bsc, values, m, n):
    """Vertical coboundary into level (m+1, n): the alternating face
    sum with the last face twisted by the inverse left arrow of the
    new bottom row, each face read off the matching refined index."""
    bundle = action.bundle
    out = {}
    for lam in bsc.indices(m + 1, n):
        for C in bsc.set_of(m + 1, n, lam):
            P = cell_basepoint(dg, C)
            acc = None
            for i in range(m + 2):
                mu = bsc.face_index_v(m + 1, n, lam, i)
                val = values.get((mu, face_v(dg, C, i)))
                if val is None or not any(val):
                    continue
                if i == m + 1:
                    g = cell_v_arrow(dg, C, m + 1, 0)
                    val = action.v(dg.V.inv[g], val)
                if i % 2:
                    val = bundle.neg(P, val)
                acc = val if acc is None else bundle.add(P, acc, val)
            if acc is not None and any(acc):
                out[(lam, C)] = acc
    return out


def cech_coboundary_values_h(dg, action, bsc, values, m, n):
    """Horizontal coboundary into level (m, n+1); the first face is
    twisted by the bottom arrow of the new first column."""
    bundle = action.bundle
    out = {}
    for lam in bsc.indices(m, n + 1):
        for C in bsc.set_of(m, n + 1, lam):
            P = cell_basepoint(dg, C)
            acc = None
            for j in range(n + 2):
                mu = bsc.face_index_h(m, n + 1, lam, j)
                val = values.get((mu, face_h(dg, C, j)))
                if val is None or not any(val):
                    continue
                if j == 0:
                    x = cell_h_arrow(dg, C, C[0], 1)
                    val = action.h(x, val)
                if j % 2:
                    val = bundle.neg(P, val)
                acc = val if acc is None else bundle.add(P, acc, val)
            if acc is not None and any(acc):
                out[(lam, C)] = acc
    return out


def cech_coboundary_matrix(dg, action, bsc, src_space, dst_space,
                           direction):
    fn = cech_coboundary_values_v if direction == "v" \
        else cech_coboundary_values_h
    cols = []
    for _, values in src_space.basis():
        out = fn(dg, action, bsc, values, src_space.m, src_space.n)
        cols.append(dst_space.to_vector(out))
    rows = dst_space.dim()
    return [[col[i] for col in cols] for i in range(rows)]


class CechBicomplex:
    """Interior-bidegree cochain spaces over a bisimplicial cover, with
    the same total-degree layout and signs as the discrete theory."""

    __slots__ = ["dg", "action", "bsc", "nmax", "spaces", "slots",
                 "matrices"]

    def __init__(self, dg, action, bsc, nmax):
        self.dg = dg
        self.action = action
        self.bsc = bsc
        self.nmax = nmax
        self.slots = {n: [(p + 1, n - p + 1) for p in range(n, -1, -1)]
                      for n in range(nmax + 2)}
        self.spaces = {}
        for n in range(nmax + 2):
            for rs in self.slots[n]:
                if rs not in self.spaces and rs[0] <= bsc.bound[0] \
                        and rs[1] <= bsc.bound[1]:
                    self.spaces[rs] = CechCochainSpace(
                        dg, action, bsc, rs[0], rs[1])
        self.matrices = {n: self._matrix(n) for n in range(nmax + 1)}

    def _space(self, rs):
        sp = self.spaces.get(rs)
        if sp is None:
            raise ResourceCapError(
                "cover bound too small for bidegree %r" % (rs,))
        return sp

    def moduli(self, n):
        out = []
        for rs in self.slots[n]:
            out.extend(self._space(rs).moduli)
        return out

    def _matrix(self, n):
        src_slots, dst_slots = self.slots[n], self.slots[n + 1]
        dst_off, dst_total = {}, 0
        for rs in dst_slots:
            dst_off[rs] = dst_total
            dst_total += self._space(rs).dim()
        src_off, src_total = {}, 0
        for rs in src_slots:
            src_off[rs] = src_total
            src_total += self._space(rs).dim()
        M = [[0] * src_total for _ in range(dst_total)]
        for r, s in src_slots:
            src = self._space((r, s))
            for rs2, direction, sign in (
                    ((r + 1, s), "v", -1 if (s - 1) % 2 else 1),
                    ((r, s + 1), "h", 1)):
                if rs2 not in dst_off:
                    continue
                blk = cech_coboundary_matrix(
                    self.dg, self.action, self.bsc, src,
                    self._space(rs2), direction)
                for ii in range(len(blk)):
                    row = M[dst_off[rs2] + ii]
                    for jj in range(src.dim()):
                        row[src_off[(r, s)] + jj] += sign * blk[ii][jj]
        return M

    def cohomology(self, n):
        return CohomologyGroup(
            self.moduli(n), self.matrices[n], self.moduli(n + 1),
            self.matrices[n - 1] if n > 0 else None,
            self.moduli(n - 1) if n > 0 else None)


def cech_bicomplex(dg, action, bsc, nmax):
    return CechBicomplex(dg, action, bsc, nmax)


def cech_h1_total(dg, action, bsc):
    """Total 1-cohomology over the cover; at the finest cover this is
    the discrete total 1-cohomology."""
    return cech_bicomplex(dg, action, bsc, 1).cohomology(1)


# ---------------------------------------------------------------------------
# Extension groups over families of covers


def pullback_bundle(cechdg, bundle):
    points = list(cechdg.points)
    return AbelianGroupBundle(points, {(i, P): bundle.factors[P]
                                       for i, P in points})


def pullback_action(cechdg, action):
    pb = pullback_bundle(cechdg, action.bundle)
    vact = {(a, k): action.vact[(a[1], k)]
            for a in cechdg.V.arrows
            for k in pb.elements(cechdg.V.end[a])}
    hact = {(a, k): action.hact[(a[1], k)]
            for a in cechdg.H.arrows
            for k in pb.elements(cechdg.H.end[a])}
    return DoubleAction(pb, vact, hact)


def cover_refinement_map(coarse, fine):
    """For each fine index, some coarse index whose set contains it."""
    theta = {}
    for j, Uj in fine.sets.items():
        for i in coarse.indices:
            if Uj <= coarse.sets[i]:
                theta[j] = i
                break
        else:
            raise DomainError("cover is not a refinement: set %r has "
                              "no superset" % (j,))
    return theta


def _coarsen_box(theta, B):
    i, j, k, l, core = B
    return (theta[i], theta[j], theta[k], theta[l], core)


def _transport_values(theta, fine_cells, values):
    """Pull a value dict on coarse localization cells back to the fine
    localization, along the index coarsening map."""
    out = {}
    for m, n, entries in fine_cells:
        coarse = (m, n, tuple(_coarsen_box(theta, B) for B in entries))
        val = values.get(coarse)
        if val is not None and any(val):
            out[(m, n, entries)] = val
    return out


def ext_group(dg, action, covers, cap=DEFAULT_CELL_CAP):
    """Extension classification over a coarse-to-fine chain of covers
    of the point set.

    Returns per-cover total 1-cohomology groups, checks that each
    transition map sends cocycles to cocycles, and reports the group
    at the finest cover.
    """
    results = []
    for cover in covers:
        cechdg = cech_double_groupoid(dg, cover)
        act = pullback_action(cechdg, action)
        ht = h_total(cechdg, act, 1, cap)
        results.append((cover, ht))
    groups = [ht.invariant_factors for _, ht in results]
    maps_ok = True
    for (c1, h1), (c2, h2) in zip(results, results[1:]):
        theta = cover_refinement_map(c1, c2)
        s_cells = h2.complex.spaces[(2, 1)].free_cells
        t_cells = h2.complex.spaces[(1, 2)].free_cells
        for cls in h1.elements():
            svals, tvals = h1.representative_cochains(cls)
            ps = _transport_values(theta, s_cells, svals)
            pt = _transport_values(theta, t_cells, tvals)
            try:
                h2.class_of_cochains([ps, pt])
            except DomainError:
                maps_ok = False
    return {
        "groups": groups,
        "maps_ok": maps_ok,
        "value": groups[-1] if groups else (),
    }
