"""Finite groupoids with explicit composition tables.

Arrows and objects are hashable ids.  Composition g*h is defined
exactly when end(g) == src(h); the composite runs g first, then h.
"""

from .errors import MalformedInputError


class FiniteGroupoid:

    __slots__ = ["objects", "arrows", "src", "end", "ident", "comp", "inv"]

    def __init__(self, objects, arrows, src, end, ident, comp, inv):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.src = dict(src)
        self.end = dict(end)
        self.ident = dict(ident)
        self.comp = dict(comp)
        self.inv = dict(inv)

    def identity(self, P):
        return self.ident[P]

    def is_identity(self, g):
        return g == self.ident.get(self.src.get(g))

    def compose(self, g, h):
        return self.comp[(g, h)]

    def inverse(self, g):
        return self.inv[g]

    def compose_chain(self, gs):
        """Composite of a nonempty composable tuple, left to right."""
        out = gs[0]
        for g in gs[1:]:
            out = self.comp[(out, g)]
        return out

    def structural_errors(self):
        errs = []
        objs, arrs = set(self.objects), set(self.arrows)
        for g in self.arrows:
            if self.src.get(g) not in objs:
                errs.append("src(%r) missing or out of range" % (g,))
            if self.end.get(g) not in objs:
                errs.append("end(%r) missing or out of range" % (g,))
            if self.inv.get(g) not in arrs:
                errs.append("inv(%r) missing or out of range" % (g,))
        for P in self.objects:
            if self.ident.get(P) not in arrs:
                errs.append("ident(%r) missing or out of range" % (P,))
        for (g, h), k in self.comp.items():
            if g not in arrs or h not in arrs or k not in arrs:
                errs.append("comp entry (%r,%r)->%r out of range" % (g, h, k))
        return errs

    def validate(self, tag=""):
        """All groupoid-law violations, as a deterministic list of strings."""
        pre = tag + ": " if tag else ""
        errs = [pre + e for e in self.structural_errors()]
        if errs:
            return errs
        for g in self.arrows:
            for h in self.arrows:
                defined = (g, h) in self.comp
                should = self.end[g] == self.src[h]
                if defined and not should:
                    errs.append(pre + "comp(%r,%r) defined but ends mismatch"
                                % (g, h))
                if should and not defined:
                    errs.append(pre + "comp(%r,%r) undefined" % (g, h))
                if defined and should:
                    k = self.comp[(g, h)]
                    if self.src[k] != self.src[g] or self.end[k] != self.end[h]:
                        errs.append(pre + "comp(%r,%r) has wrong endpoints"
                                    % (g, h))
        if errs:
            return errs
        for P in self.objects:
            e = self.ident[P]
            if self.src[e] != P or self.end[e] != P:
                errs.append(pre + "ident(%r) not an endo-arrow at %r" % (P, P))
        for g in self.arrows:
            if self.comp[(self.ident[self.src[g]], g)] != g:
                errs.append(pre + "left identity fails at %r" % (g,))
            if self.comp[(g, self.ident[self.end[g]])] != g:
                errs.append(pre + "right identity fails at %r" % (g,))
            gi = self.inv[g]
            if self.src.get(gi) != self.end[g] or self.end.get(gi) != self.src[g]:
                errs.append(pre + "inv(%r) has wrong endpoints" % (g,))
            elif self.comp[(g, gi)] != self.ident[self.src[g]] \
                    or self.comp[(gi, g)] != self.ident[self.end[g]]:
                errs.append(pre + "inverse law fails at %r" % (g,))
        by_src = {}
        for h in self.arrows:
            by_src.setdefault(self.src[h], []).append(h)
        for g in self.arrows:
            for h in by_src.get(self.end[g], ()):
                gh = self.comp[(g, h)]
                for k in by_src.get(self.end[h], ()):
                    if self.comp[(gh, k)] != self.comp[(g, self.comp[(h, k)])]:
                        errs.append(pre + "associativity fails at (%r,%r,%r)"
                                    % (g, h, k))
        return errs

    def composable_tuples(self, n):
        """All composable n-tuples of arrows, in lexicographic id order."""
        if n == 0:
            return [()]
        by_src = {}
        for h in self.arrows:
            by_src.setdefault(self.src[h], []).append(h)
        out = [(g,) for g in self.arrows]
        for _ in range(n - 1):
            out = [t + (h,) for t in out for h in by_src.get(self.end[t[-1]], ())]
        return out


def trivial_groupoid(points):
    """Groupoid with only identity arrows over the given point set."""
    ident = {P: ("id", P) for P in points}
    arrows = [ident[P] for P in points]
    return FiniteGroupoid(
        points, arrows,
        src={a: a[1] for a in arrows},
        end={a: a[1] for a in arrows},
        ident=ident,
        comp={(a, a): a for a in arrows},
        inv={a: a for a in arrows},
    )


def pair_groupoid(points):
    """Arrows (P,Q) with composition (P,Q)(Q,R) = (P,R)."""
    pts = list(points)
    arrows = [(P, Q) for P in pts for Q in pts]
    return FiniteGroupoid(
        pts, arrows,
        src={(P, Q): P for P, Q in arrows},
        end={(P, Q): Q for P, Q in arrows},
        ident={P: (P, P) for P in pts},
        comp={((P, Q), (Q2, R)): (P, R)
              for P, Q in arrows for Q2, R in arrows if Q == Q2},
        inv={(P, Q): (Q, P) for P, Q in arrows},
    )


def cyclic_group_groupoid(n, point=0):
    """Z/n as a one-object groupoid."""
    arrows = list(range(n))
    return FiniteGroupoid(
        [point], arrows,
        src={a: point for a in arrows},
        end={a: point for a in arrows},
        ident={point: 0},
        comp={(a, b): (a + b) % n for a in arrows for b in arrows},
        inv={a: (-a) % n for a in arrows},
    )
