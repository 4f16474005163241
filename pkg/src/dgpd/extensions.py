"""Extensions of a double groupoid by an abelian group bundle.

An extension presents a total double groupoid over the same side
groupoids with a projection onto the base and a kernel embedding of
the bundle.  Every extension is captured, up to equivalence, by a
smash product: boxes are pairs (fiber element, base box) anchored at
the bottom-left vertex, with compositions twisted by a closed pair of
cochains.  Classification goes through the total 1-cohomology group.
"""

from .errors import DomainError, ResourceCapError
from .core import (FiniteDoubleGroupoid, ValidationReport,
                   bundle_from_boxes, core_action_on_box, kernel_bundle,
                   validate_double_groupoid, DoubleAction)
from .cohomology import (TotalCocycle, TotalCohomology, TotalComplex,
                         h_total, is_normalized_pair, is_total_cocycle,
                         normalize_cocycle)
from .nerve import DEFAULT_CELL_CAP, make_cell


def _cocycle_value(bundle, values, cell, P):
    val = values.get(cell)
    if val is None:
        return bundle.zero(P)
    if len(val) != len(bundle.factors[P]):
        raise DomainError("cochain value %r not in the fiber over %r"
                          % (val, P))
    return tuple(v % d for v, d in zip(val, bundle.factors[P]))


def smash_product(dg, action, z):
    """The double groupoid on fiber-box pairs twisted by (sigma, tau).

    The construction is attempted for any pair of value dicts; when the
    pair is not a closed total 1-cocycle the output fails validation,
    which is how non-cocycles are detected.
    """
    bundle = action.bundle
    V, H = dg.V, dg.H

    def tau(F, G):
        return _cocycle_value(bundle, z.tau, make_cell(1, 2, (F, G)),
                              dg.bl(F))

    def sigma(F, G):
        return _cocycle_value(bundle, z.sigma, make_cell(2, 1, (F, G)),
                              dg.bl(G))

    boxes = [(k, F) for F in dg.boxes for k in bundle.elements(dg.bl(F))]
    t = {(k, F): dg.t[F] for k, F in boxes}
    b = {(k, F): dg.b[F] for k, F in boxes}
    l = {(k, F): dg.l[F] for k, F in boxes}
    r = {(k, F): dg.r[F] for k, F in boxes}
    hcomp, vcomp = {}, {}
    for (F, G), FG in dg.hcomp.items():
        P = dg.bl(F)
        tv = tau(F, G)
        for K in bundle.elements(P):
            for L in bundle.elements(dg.bl(G)):
                val = bundle.add(P, bundle.add(P, K, action.h(dg.b[F], L)),
                                 tv)
                hcomp[((K, F), (L, G))] = (val, FG)
    for (F, G), FG in dg.vcomp.items():
        Q = dg.bl(G)
        sv = sigma(F, G)
        linv = V.inv[dg.l[G]]
        for K in bundle.elements(dg.bl(F)):
            for L in bundle.elements(Q):
                val = bundle.add(Q, bundle.add(Q, action.v(linv, K), L), sv)
                vcomp[((K, F), (L, G))] = (val, FG)
    vid = {g: (bundle.zero(V.end[g]), dg.vid[g]) for g in V.arrows}
    hid = {x: (bundle.zero(H.src[x]), dg.hid[x]) for x in H.arrows}
    theta = {P: (bundle.zero(P), dg.theta[P]) for P in dg.points}
    hinv, vinv = {}, {}
    for K, F in boxes:
        P = dg.bl(F)
        Fh, Fv = dg.hinv[F], dg.vinv[F]
        inner = bundle.neg(P, bundle.add(P, K, tau(F, Fh)))
        hinv[(K, F)] = (action.h(H.inv[dg.b[F]], inner), Fh)
        Q = dg.bl(Fv)
        vinv[(K, F)] = (bundle.neg(Q, bundle.add(Q, action.v(dg.l[F], K),
                                                 sigma(F, Fv))), Fv)
    return FiniteDoubleGroupoid(dg.points, V, H, boxes, t, b, l, r,
                                hcomp, vcomp, vid, hid, hinv, vinv, theta)


class ExtensionPresentation:
    """A total double groupoid with a projection onto the base and an
    embedding of the bundle as its double kernel."""

    __slots__ = ["total", "base", "bundle", "proj", "iota", "_action"]

    def __init__(self, total, base, bundle, proj, iota, action=None):
        self.total = total
        self.base = base
        self.bundle = bundle
        self.proj = dict(proj)
        self.iota = dict(iota)
        self._action = action

    @property
    def action(self):
        if self._action is None:
            self._action = induced_action(self)
        return self._action


def smash_extension(dg, action, z):
    total = smash_product(dg, action, z)
    proj = {B: B[1] for B in total.boxes}
    iota = {(P, k): (k, dg.theta[P])
            for P in dg.points for k in action.bundle.elements(P)}
    return ExtensionPresentation(total, dg, action.bundle, proj, iota,
                                 action)


def validate_extension(ext):
    """Exhaustive check that (total, proj, iota) is an extension."""
    total, base, bundle = ext.total, ext.base, ext.bundle
    errs = []
    if total.V is not base.V and total.V.arrows != base.V.arrows:
        errs.append("side groupoid V differs between total and base")
    if total.H is not base.H and total.H.arrows != base.H.arrows:
        errs.append("side groupoid H differs between total and base")
    baseboxes = set(base.boxes)
    for B in total.boxes:
        F = ext.proj.get(B)
        if F not in baseboxes:
            errs.append("projection of %r missing or out of range" % (B,))
            continue
        if (total.t[B], total.b[B], total.l[B], total.r[B]) != \
                (base.t[F], base.b[F], base.l[F], base.r[F]):
            errs.append("projection changes the sides of %r" % (B,))
    if errs:
        return ValidationReport(errs, [])
    if set(ext.proj.values()) != baseboxes:
        errs.append("projection is not surjective")
    for (A, B), C in total.hcomp.items():
        if ext.proj[C] != base.hcomp.get((ext.proj[A], ext.proj[B])):
            errs.append("projection breaks horizontal composition at "
                        "(%r,%r)" % (A, B))
    for (A, B), C in total.vcomp.items():
        if ext.proj[C] != base.vcomp.get((ext.proj[A], ext.proj[B])):
            errs.append("projection breaks vertical composition at "
                        "(%r,%r)" % (A, B))
    for g in base.V.arrows:
        if ext.proj[total.vid[g]] != base.vid[g]:
            errs.append("projection moves the vertical identity of %r"
                        % (g,))
    for x in base.H.arrows:
        if ext.proj[total.hid[x]] != base.hid[x]:
            errs.append("projection moves the horizontal identity of %r"
                        % (x,))
    kernel = {B for B in total.boxes
              if ext.proj[B] == base.theta[total.bl(B)]}
    image = set(ext.iota.values())
    if kernel != image:
        errs.append("kernel of the projection differs from the embedded "
                    "bundle")
    kb_boxes = {K for K in total.boxes
                if total.H.is_identity(total.t[K])
                and total.H.is_identity(total.b[K])
                and total.V.is_identity(total.l[K])
                and total.V.is_identity(total.r[K])}
    if not kernel <= kb_boxes:
        errs.append("kernel contains a box with a non-identity side")
    for P in base.points:
        z = bundle.zero(P)
        if ext.iota.get((P, z)) != total.theta[P]:
            errs.append("embedding does not send zero to theta at %r"
                        % (P,))
        for k1 in bundle.elements(P):
            for k2 in bundle.elements(P):
                got = total.hcomp.get((ext.iota[(P, k1)],
                                       ext.iota[(P, k2)]))
                if got != ext.iota[(P, bundle.add(P, k1, k2))]:
                    errs.append("embedding is not additive at %r" % (P,))
                    break
            else:
                continue
            break
    return ValidationReport([], errs)


def double_kernel(ext):
    """The kernel of the projection, presented as an abelian group
    bundle over the points of the total double groupoid."""
    total, base = ext.total, ext.base
    ks = {P: sorted((B for B in total.boxes
                     if ext.proj[B] == base.theta[P]
                     and total.bl(B) == P), key=repr)
          for P in base.points}
    for P, boxes in ks.items():
        for K in boxes:
            if not (total.H.is_identity(total.t[K])
                    and total.H.is_identity(total.b[K])
                    and total.V.is_identity(total.l[K])
                    and total.V.is_identity(total.r[K])):
                raise DomainError("kernel box %r has a non-identity side"
                                  % (K,))
    return bundle_from_boxes(total, ks)


def induced_action(ext):
    """Conjugation of the base on the embedded bundle, in bundle
    coordinates: thin boxes of the total conjugate kernel boxes."""
    total, bundle = ext.total, ext.bundle
    inv_iota = {B: pk for pk, B in ext.iota.items()}
    vact, hact = {}, {}
    for g in total.V.arrows:
        P = total.V.end[g]
        e1, e2 = total.vid[g], total.vid[total.V.inv[g]]
        for k in bundle.elements(P):
            out = total.vcompose(total.vcompose(e1, ext.iota[(P, k)]), e2)
            vact[(g, k)] = inv_iota[out][1]
    for x in total.H.arrows:
        P = total.H.end[x]
        e1, e2 = total.hid[x], total.hid[total.H.inv[x]]
        for k in bundle.elements(P):
            out = total.hcompose(total.hcompose(e1, ext.iota[(P, k)]), e2)
            hact[(x, k)] = inv_iota[out][1]
    return DoubleAction(bundle, vact, hact)


def section_of(ext):
    """A side-preserving section of the projection: thin boxes lift to
    thin boxes, everything else to the lowest-id preimage."""
    total, base = ext.total, ext.base
    fibers = {}
    for B in total.boxes:
        fibers.setdefault(ext.proj[B], []).append(B)
    sec = {}
    for g in base.V.arrows:
        sec[base.vid[g]] = total.vid[g]
    for x in base.H.arrows:
        sec[base.hid[x]] = total.hid[x]
    for F in sorted(base.boxes, key=repr):
        if F not in sec:
            sec[F] = min(fibers[F], key=repr)
    return sec


def _kernel_difference(ext, B1, B2):
    """The bundle element translating B2 to B1 inside one fiber of the
    projection; translation is the staircase action of kernel boxes."""
    total, bundle = ext.total, ext.bundle
    P = total.bl(B2)
    for k in bundle.elements(P):
        if core_action_on_box(total, ext.iota[(P, k)], B2) == B1:
            return k
    raise DomainError("boxes %r and %r are not in the same kernel orbit"
                      % (B1, B2))


def cocycle_from_extension(ext, section=None, cap=DEFAULT_CELL_CAP):
    """Extract the twisting pair by comparing lifted composites with
    lifts of composites; normalized via the standard correction when
    the supplied section is not thin-preserving."""
    total, base = ext.total, ext.base
    sec = section if section is not None else section_of(ext)
    for F, B in sec.items():
        if ext.proj[B] != F:
            raise DomainError("section does not split the projection at %r"
                              % (F,))
    sigma, tau = {}, {}
    for (F, G), FG in base.hcomp.items():
        val = _kernel_difference(ext, total.hcomp[(sec[F], sec[G])],
                                 sec[FG])
        if any(val):
            tau[make_cell(1, 2, (F, G))] = val
    for (F, G), FG in base.vcomp.items():
        val = _kernel_difference(ext, total.vcomp[(sec[F], sec[G])],
                                 sec[FG])
        if any(val):
            sigma[make_cell(2, 1, (F, G))] = val
    z = TotalCocycle(sigma, tau)
    action = ext.action
    if not is_total_cocycle(base, action, z, cap):
        raise DomainError("extracted pair is not closed; the input is "
                          "not an extension")
    if not is_normalized_pair(base, action, z, cap):
        z = normalize_cocycle(base, action, z, cap)
    return z


def _difference_class(dg, action, z1, z2, cohomology=None,
                      cap=DEFAULT_CELL_CAP):
    bundle = action.bundle
    ht = cohomology if cohomology is not None \
        else h_total(dg, action, 1, cap)
    dsigma, dtau = {}, {}
    for out, v1, v2 in ((dsigma, z1.sigma, z2.sigma),
                        (dtau, z1.tau, z2.tau)):
        for c in set(v1) | set(v2):
            m, n, entries = c
            P = dg.bl(entries[0]) if (m, n) == (1, 2) \
                else dg.bl(entries[1])
            val = bundle.add(P, _cocycle_value(bundle, v1, c, P),
                             bundle.neg(P, _cocycle_value(bundle, v2, c,
                                                          P)))
            if any(val):
                out[c] = val
    return ht, ht.class_of_cochains([dsigma, dtau])


def extensions_equivalent(e1, e2, cap=DEFAULT_CELL_CAP):
    """Equivalence via the cohomological criterion: the extracted
    cocycles differ by a coboundary."""
    if e1.base.boxes != e2.base.boxes or e1.base is not e2.base and \
            set(e1.base.boxes) != set(e2.base.boxes):
        raise DomainError("extensions have different bases")
    if e1.bundle.factors != e2.bundle.factors:
        raise DomainError("extensions have different bundles")
    z1 = cocycle_from_extension(e1, cap=cap)
    z2 = cocycle_from_extension(e2, cap=cap)
    ht, cls = _difference_class(e1.base, e1.action, z1, z2, cap=cap)
    return cls == ht.class_of([0] * len(ht.moduli))


def phi_search_equivalent(e1, e2, cap=10 ** 6):
    """Independent equivalence test: exhaustive search for a box map
    commuting with both projections and embeddings.  Exponential in the
    number of base boxes; oracle use only."""
    base, bundle = e1.base, e1.bundle
    s1, s2 = section_of(e1), section_of(e2)
    free = sorted(base.boxes, key=repr)
    total = 1
    for F in free:
        total *= bundle.order(base.bl(F))
        if total > cap:
            raise ResourceCapError("translation search space too large")

    def build_phi(lam):
        phi = {}
        for F in free:
            P = base.bl(F)
            for k in bundle.elements(P):
                B1 = core_action_on_box(e1.total, e1.iota[(P, k)], s1[F])
                B2 = core_action_on_box(
                    e2.total,
                    e2.iota[(P, bundle.add(P, k, lam[F]))], s2[F])
                phi[B1] = B2
        return phi

    def is_morphism(phi):
        for (A, B), C in e1.total.hcomp.items():
            if e2.total.hcomp.get((phi[A], phi[B])) != phi[C]:
                return False
        for (A, B), C in e1.total.vcomp.items():
            if e2.total.vcomp.get((phi[A], phi[B])) != phi[C]:
                return False
        return True

    def rec(i, lam):
        if i == len(free):
            return is_morphism(build_phi(lam))
        P = base.bl(free[i])
        for k in bundle.elements(P):
            lam[free[i]] = k
            if rec(i + 1, lam):
                return True
        return False

    return rec(0, {})


def classify_extensions(dg, action, cap=DEFAULT_CELL_CAP):
    """One smash-product representative per total 1-cohomology class."""
    ht = h_total(dg, action, 1, cap)
    out = []
    for cls in sorted(ht.elements()):
        svals, tvals = ht.representative_cochains(cls)
        z = TotalCocycle(svals, tvals)
        ext = smash_extension(dg, action, z)
        report = validate_double_groupoid(ext.total)
        if not report.ok:
            raise DomainError("representative of class %r fails "
                              "validation" % (cls,))
        out.append((cls, z, ext))
    return out
