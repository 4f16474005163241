"""Finite double groupoids: validation, core groupoid, kernel bundle,
and the conjugation double action.

A box A is drawn with sides t(A), b(A) in the horizontal groupoid H and
l(A), r(A) in the vertical groupoid V.  V is anchored by t (source) and
b (end); H by l (source) and r (end).  Horizontal composition {A B}
needs r(A) == l(B); vertical composition {A / B} needs b(A) == t(B).
"""

from .errors import DomainError
from .exactla import QuotientGroup
from .groupoid import FiniteGroupoid


class FiniteDoubleGroupoid:

    __slots__ = ["points", "V", "H", "boxes", "t", "b", "l", "r",
                 "hcomp", "vcomp", "vid", "hid", "hinv", "vinv", "theta"]

    def __init__(self, points, V, H, boxes, t, b, l, r,
                 hcomp, vcomp, vid, hid, hinv, vinv, theta):
        self.points = tuple(points)
        self.V = V
        self.H = H
        self.boxes = tuple(boxes)
        self.t = dict(t)
        self.b = dict(b)
        self.l = dict(l)
        self.r = dict(r)
        self.hcomp = dict(hcomp)
        self.vcomp = dict(vcomp)
        self.vid = dict(vid)
        self.hid = dict(hid)
        self.hinv = dict(hinv)
        self.vinv = dict(vinv)
        self.theta = dict(theta)

    # corner vertices
    def tl(self, A):
        return self.V.src[self.l[A]]

    def bl(self, A):
        return self.V.end[self.l[A]]

    def tr(self, A):
        return self.V.src[self.r[A]]

    def br(self, A):
        return self.V.end[self.r[A]]

    def hcompose(self, A, B):
        return self.hcomp[(A, B)]

    def vcompose(self, A, B):
        return self.vcomp[(A, B)]

    def is_vid(self, A):
        # thin box coming from a vertical arrow (l == r, identity t and b)
        return A == self.vid.get(self.l[A])

    def is_hid(self, A):
        # thin box coming from a horizontal arrow
        return A == self.hid.get(self.t[A])

    def is_theta(self, A):
        return A in self.theta.values()

    def boxes_by_l(self):
        out = {}
        for A in self.boxes:
            out.setdefault(self.l[A], []).append(A)
        return out

    def boxes_by_t(self):
        out = {}
        for A in self.boxes:
            out.setdefault(self.t[A], []).append(A)
        return out

    def horizontal_box_groupoid(self):
        """(B, horizontal composition) as a groupoid over V."""
        return FiniteGroupoid(self.V.arrows, self.boxes, self.l, self.r,
                              self.vid, self.hcomp, self.hinv)

    def vertical_box_groupoid(self):
        """(B, vertical composition) as a groupoid over H."""
        return FiniteGroupoid(self.H.arrows, self.boxes, self.t, self.b,
                              self.hid, self.vcomp, self.vinv)


class ValidationReport:

    __slots__ = ["structural", "violations", "filling_failures",
                 "filling_checked"]

    def __init__(self, structural, violations, filling_failures=None):
        self.structural = list(structural)
        self.violations = list(violations)
        self.filling_checked = filling_failures is not None
        self.filling_failures = list(filling_failures or [])

    @property
    def ok(self):
        return not self.structural and not self.violations

    @property
    def fills(self):
        return self.filling_checked and not self.filling_failures

    def as_dict(self):
        d = {"ok": self.ok,
             "structural": sorted(map(str, self.structural)),
             "violations": sorted(map(str, self.violations))}
        if self.filling_checked:
            d["filling_failures"] = sorted(map(str, self.filling_failures))
        return d

    def __repr__(self):
        return "ValidationReport(ok=%r, structural=%d, violations=%d)" % (
            self.ok, len(self.structural), len(self.violations))


def _structural_errors(dg):
    errs = []
    errs.extend("V: " + e for e in dg.V.structural_errors())
    errs.extend("H: " + e for e in dg.H.structural_errors())
    if set(dg.V.objects) != set(dg.points) or set(dg.H.objects) != set(dg.points):
        errs.append("side groupoids not over the declared point set")
    boxset = set(dg.boxes)
    varr, harr = set(dg.V.arrows), set(dg.H.arrows)
    for A in dg.boxes:
        if dg.t.get(A) not in harr or dg.b.get(A) not in harr:
            errs.append("t/b of box %r out of range" % (A,))
        if dg.l.get(A) not in varr or dg.r.get(A) not in varr:
            errs.append("l/r of box %r out of range" % (A,))
        if dg.hinv.get(A) not in boxset:
            errs.append("hinv of box %r out of range" % (A,))
        if dg.vinv.get(A) not in boxset:
            errs.append("vinv of box %r out of range" % (A,))
    for g in dg.V.arrows:
        if dg.vid.get(g) not in boxset:
            errs.append("vid(%r) missing or out of range" % (g,))
    for x in dg.H.arrows:
        if dg.hid.get(x) not in boxset:
            errs.append("hid(%r) missing or out of range" % (x,))
    for P in dg.points:
        if dg.theta.get(P) not in boxset:
            errs.append("theta(%r) missing or out of range" % (P,))
    for table, name in ((dg.hcomp, "hcomp"), (dg.vcomp, "vcomp")):
        for (A, B), C in table.items():
            if A not in boxset or B not in boxset or C not in boxset:
                errs.append("%s entry (%r,%r)->%r out of range" % (name, A, B, C))
    return errs


def validate_double_groupoid(dg, check_filling=False):
    """Exhaustive check of every double-groupoid axiom.

    Reports all violations, never just the first one.  Malformed table
    entries are listed separately as structural errors.
    """
    structural = _structural_errors(dg)
    if structural:
        return ValidationReport(structural, [],
                                [] if check_filling else None)

    errs = []
    errs.extend(dg.V.validate("V"))
    errs.extend(dg.H.validate("H"))

    # the two box groupoids, over V and over H
    hg = dg.horizontal_box_groupoid()
    vg = dg.vertical_box_groupoid()
    errs.extend(hg.validate("hbox"))
    errs.extend(vg.validate("vbox"))

    # side compatibility with the compositions
    for (A, B), C in dg.hcomp.items():
        if dg.r[A] == dg.l[B]:
            tt = dg.H.comp.get((dg.t[A], dg.t[B]))
            bb = dg.H.comp.get((dg.b[A], dg.b[B]))
            if dg.t[C] != tt or dg.b[C] != bb:
                errs.append("hcomp side compatibility fails at (%r,%r)" % (A, B))
    for (A, B), C in dg.vcomp.items():
        if dg.b[A] == dg.t[B]:
            ll = dg.V.comp.get((dg.l[A], dg.l[B]))
            rr = dg.V.comp.get((dg.r[A], dg.r[B]))
            if dg.l[C] != ll or dg.r[C] != rr:
                errs.append("vcomp side compatibility fails at (%r,%r)" % (A, B))

    # identity boxes have the expected thin sides
    for g in dg.V.arrows:
        E = dg.vid[g]
        if dg.l[E] != g or dg.r[E] != g \
                or dg.t[E] != dg.H.ident[dg.V.src[g]] \
                or dg.b[E] != dg.H.ident[dg.V.end[g]]:
            errs.append("vid(%r) has wrong sides" % (g,))
    for x in dg.H.arrows:
        E = dg.hid[x]
        if dg.t[E] != x or dg.b[E] != x \
                or dg.l[E] != dg.V.ident[dg.H.src[x]] \
                or dg.r[E] != dg.V.ident[dg.H.end[x]]:
            errs.append("hid(%r) has wrong sides" % (x,))
    for P in dg.points:
        if dg.theta[P] != dg.vid[dg.V.ident[P]] \
                or dg.theta[P] != dg.hid[dg.H.ident[P]]:
            errs.append("theta(%r) differs from the identity boxes" % (P,))

    # inverses flip the right sides
    for A in dg.boxes:
        Ah, Av = dg.hinv[A], dg.vinv[A]
        if dg.l[Ah] != dg.r[A] or dg.r[Ah] != dg.l[A] \
                or dg.t[Ah] != dg.H.inv[dg.t[A]] \
                or dg.b[Ah] != dg.H.inv[dg.b[A]]:
            errs.append("hinv side rule fails at %r" % (A,))
        if dg.t[Av] != dg.b[A] or dg.b[Av] != dg.t[A] \
                or dg.l[Av] != dg.V.inv[dg.l[A]] \
                or dg.r[Av] != dg.V.inv[dg.r[A]]:
            errs.append("vinv side rule fails at %r" % (A,))

    # interchange law on every compatible 2x2 array
    by_l = dg.boxes_by_l()
    by_t = dg.boxes_by_t()
    for A in dg.boxes:
        for B in by_l.get(dg.r[A], ()):
            AB = dg.hcomp.get((A, B))
            for C in by_t.get(dg.b[A], ()):
                AC = dg.vcomp.get((A, C))
                for D in by_l.get(dg.r[C], ()):
                    if dg.t[D] != dg.b[B]:
                        continue
                    lhs = dg.vcomp.get((AB, dg.hcomp.get((C, D))))
                    rhs = dg.hcomp.get((AC, dg.vcomp.get((B, D))))
                    if lhs != rhs or lhs is None:
                        errs.append(
                            "interchange fails at (%r,%r,%r,%r)" % (A, B, C, D))

    filling = None
    if check_filling:
        filling = []
        covered = {(dg.t[A], dg.r[A]) for A in dg.boxes}
        for x in dg.H.arrows:
            for g in dg.V.arrows:
                if dg.H.end[x] == dg.V.src[g] and (x, g) not in covered:
                    filling.append("no box with t=%r, r=%r" % (x, g))
    return ValidationReport([], errs, filling)


class AbelianGroupBundle:
    """Finite abelian group over each point, in invariant-factor form.

    Fiber elements are residue tuples; the fiber over P with factors
    (d1, ..., dk) is Z/d1 x ... x Z/dk.
    """

    __slots__ = ["base", "factors"]

    def __init__(self, base, factors):
        self.base = tuple(base)
        self.factors = {P: tuple(factors[P]) for P in base}
        for P, fs in self.factors.items():
            for i, d in enumerate(fs):
                assert d >= 2, "invariant factor %r at %r" % (d, P)
                assert i == 0 or d % fs[i - 1] == 0, "divisibility chain"

    def zero(self, P):
        return (0,) * len(self.factors[P])

    def add(self, P, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors[P]))

    def neg(self, P, a):
        return tuple((-x) % d for x, d in zip(a, self.factors[P]))

    def elements(self, P):
        out = [()]
        for d in self.factors[P]:
            out = [e + (c,) for e in out for c in range(d)]
        return out

    def contains(self, P, a):
        return len(a) == len(self.factors[P]) and \
            all(0 <= x < d for x, d in zip(a, self.factors[P]))

    def order(self, P):
        n = 1
        for d in self.factors[P]:
            n *= d
        return n


def constant_bundle(points, factors):
    return AbelianGroupBundle(points, {P: tuple(factors) for P in points})


class KernelBundle(AbelianGroupBundle):
    """Kernel bundle of a double groupoid, with the box <-> tuple maps."""

    __slots__ = ["dg", "_from_box", "_to_box"]

    def __init__(self, dg, fibers, from_box, to_box):
        AbelianGroupBundle.__init__(
            self, dg.points, {P: fibers[P] for P in dg.points})
        self.dg = dg
        self._from_box = from_box
        self._to_box = to_box

    def from_box(self, K):
        return self._from_box[K]

    def to_box(self, P, a):
        return self._to_box[(P, a)]

    def fiber_boxes(self, P):
        return [self.to_box(P, a) for a in self.elements(P)]


def kernel_bundle(dg):
    """Boxes with all four sides identities, fiber by fiber over P.

    The single composition (horizontal and vertical agree on the kernel)
    makes each fiber a finite abelian group; it is re-presented in
    invariant-factor form through a Smith normal form of its relations.
    """
    return bundle_from_boxes(
        dg, {P: [K for K in dg.boxes
                 if dg.t[K] == dg.H.ident[P] and dg.b[K] == dg.H.ident[P]
                 and dg.l[K] == dg.V.ident[P] and dg.r[K] == dg.V.ident[P]]
             for P in dg.points})


def bundle_from_boxes(dg, boxes_by_point):
    """Present per-point families of kernel-type boxes as an abelian
    group bundle in invariant-factor form, with the box <-> tuple maps."""
    fibers, from_box, to_box = {}, {}, {}
    for P in dg.points:
        ks = boxes_by_point[P]
        index = {K: i for i, K in enumerate(ks)}
        n = len(ks)
        for a in ks:
            for c in ks:
                h = dg.hcomp.get((a, c))
                v = dg.vcomp.get((a, c))
                if h is None or h != v:
                    raise DomainError(
                        "kernel compositions disagree over %r" % (P,))
        rels = []
        for a in ks:
            for c in ks:
                rel = [0] * n
                rel[index[a]] += 1
                rel[index[c]] += 1
                rel[index[dg.hcomp[(a, c)]]] -= 1
                rels.append(rel)
        q = QuotientGroup(n, rels)
        if any(d <= 0 for d in q.factors):
            raise DomainError("kernel fiber over %r is not finite" % (P,))
        fibers[P] = tuple(q.factors)
        seen = {}
        for K in ks:
            e = [0] * n
            e[index[K]] = 1
            cls = q.class_of(e)
            if cls in seen:
                raise DomainError(
                    "kernel fiber over %r has indistinct classes" % (P,))
            seen[cls] = K
            from_box[K] = cls
        if len(seen) != n or q.order != n:
            raise DomainError("kernel fiber over %r is not presented "
                              "faithfully" % (P,))
        for cls, K in seen.items():
            to_box[(P, cls)] = K
    return KernelBundle(dg, fibers, from_box, to_box)


class DoubleAction:
    """Left action of a double groupoid on an abelian group bundle.

    vact[(g, k)] moves k from the fiber over b(g) to the fiber over t(g);
    hact[(x, k)] moves k from the fiber over r(x) to the fiber over l(x).
    """

    __slots__ = ["bundle", "vact", "hact"]

    def __init__(self, bundle, vact, hact):
        self.bundle = bundle
        self.vact = dict(vact)
        self.hact = dict(hact)

    def v(self, g, k):
        return self.vact[(g, k)]

    def h(self, x, k):
        return self.hact[(x, k)]


def trivial_action(dg, bundle):
    """Every arrow acts as the identity; needs constant fibers along arrows."""
    vact = {(g, k): k for g in dg.V.arrows
            for k in bundle.elements(dg.V.end[g])}
    hact = {(x, k): k for x in dg.H.arrows
            for k in bundle.elements(dg.H.end[x])}
    return DoubleAction(bundle, vact, hact)


def conjugation_action(dg, kb=None):
    """The action of dg on its kernel bundle by conjugation with thin boxes."""
    kb = kb if kb is not None else kernel_bundle(dg)
    vact, hact = {}, {}
    for g in dg.V.arrows:
        P, Q = dg.V.end[g], dg.V.src[g]
        e1, e2 = dg.vid[g], dg.vid[dg.V.inv[g]]
        for k in kb.elements(P):
            K = kb.to_box(P, k)
            out = dg.vcompose(dg.vcompose(e1, K), e2)
            vact[(g, k)] = kb.from_box(out)
    for x in dg.H.arrows:
        P, Q = dg.H.end[x], dg.H.src[x]
        e1, e2 = dg.hid[x], dg.hid[dg.H.inv[x]]
        for k in kb.elements(P):
            K = kb.to_box(P, k)
            out = dg.hcompose(dg.hcompose(e1, K), e2)
            hact[(x, k)] = kb.from_box(out)
    return DoubleAction(kb, vact, hact)


def validate_action(dg, action):
    """Exhaustive check of the double-action axioms."""
    kb = action.bundle
    structural, errs = [], []
    for g in dg.V.arrows:
        P, Q = dg.V.end[g], dg.V.src[g]
        for k in kb.elements(P):
            out = action.vact.get((g, k))
            if out is None or not kb.contains(Q, out):
                structural.append("vact(%r,%r) missing or in wrong fiber"
                                  % (g, k))
    for x in dg.H.arrows:
        P, Q = dg.H.end[x], dg.H.src[x]
        for k in kb.elements(P):
            out = action.hact.get((x, k))
            if out is None or not kb.contains(Q, out):
                structural.append("hact(%r,%r) missing or in wrong fiber"
                                  % (x, k))
    if structural:
        return ValidationReport(structural, [])

    for groupoid, act, name in ((dg.V, action.vact, "vact"),
                                (dg.H, action.hact, "hact")):
        for P in dg.points:
            e = groupoid.ident[P]
            for k in kb.elements(P):
                if act[(e, k)] != k:
                    errs.append("%s: identity %r moves %r" % (name, e, k))
        for g in groupoid.arrows:
            for h in groupoid.arrows:
                if groupoid.end[g] != groupoid.src[h]:
                    continue
                gh = groupoid.comp[(g, h)]
                for k in kb.elements(groupoid.end[h]):
                    if act[(gh, k)] != act[(g, act[(h, k)])]:
                        errs.append("%s: functoriality fails at (%r,%r,%r)"
                                    % (name, g, h, k))
        for g in groupoid.arrows:
            P = groupoid.end[g]
            Q = groupoid.src[g]
            z = kb.zero(P)
            for k1 in kb.elements(P):
                for k2 in kb.elements(P):
                    s = kb.add(P, k1, k2)
                    if act[(g, s)] != kb.add(Q, act[(g, k1)], act[(g, k2)]):
                        errs.append("%s: %r is not a homomorphism" % (name, g))
                        break
                else:
                    continue
                break
            if len({act[(g, k)] for k in kb.elements(P)}) != kb.order(P) \
                    or kb.order(P) != kb.order(Q):
                errs.append("%s: %r is not an isomorphism of fibers"
                            % (name, g))

    # compatibility across every box
    for A in dg.boxes:
        linv = dg.V.inv[dg.l[A]]
        rinv = dg.V.inv[dg.r[A]]
        for k in kb.elements(dg.tr(A)):
            lhs = action.vact[(linv, action.hact[(dg.t[A], k)])]
            rhs = action.hact[(dg.b[A], action.vact[(rinv, k)])]
            if lhs != rhs:
                errs.append("compatibility fails at box %r, element %r"
                            % (A, k))
    return ValidationReport([], errs)


def core_boxes(dg):
    return [E for E in dg.boxes
            if dg.H.is_identity(dg.t[E]) and dg.V.is_identity(dg.r[E])]


def core_groupoid(dg):
    """Boxes with identity top and right sides, composed staircase-wise.

    Source is the bottom-left vertex, end the top-right one; the product
    of E and F fills the 2x2 array with thin padding and composes it.
    """
    arrows = core_boxes(dg)
    src = {E: dg.bl(E) for E in arrows}
    end = {E: dg.tr(E) for E in arrows}
    ident = {P: dg.theta[P] for P in dg.points}
    comp = {}
    for E in arrows:
        for F in arrows:
            if end[E] != src[F]:
                continue
            top = dg.hcompose(dg.vid[dg.l[F]], F)
            bottom = dg.hcompose(E, dg.hid[dg.b[F]])
            comp[(E, F)] = dg.vcompose(top, bottom)
    inv = {}
    for E in arrows:
        x = dg.hcompose(E, dg.hid[dg.H.inv[dg.b[E]]])
        inv[E] = dg.vinv[x]
    return FiniteGroupoid(dg.points, arrows, src, end, ident, comp, inv)


def core_action_on_box(dg, E, A):
    """E acting on A when the end vertex of E is the bottom-left of A.

    The 2x2 array (vid l(A), A; E, hid b(A)) composed both ways.
    """
    top = dg.hcompose(dg.vid[dg.l[A]], A)
    bottom = dg.hcompose(E, dg.hid[dg.b[A]])
    return dg.vcompose(top, bottom)
