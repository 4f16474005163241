"""The bisimplicial nerve of a double groupoid.

A cell is a tuple (m, n, entries) with entries row major, top row
first, 1-based in the mathematical indexing:
  (0,0) -> a single point, (r,0) -> r composable vertical arrows,
  (0,s) -> s composable horizontal arrows, (r,s) -> r*s boxes.

Every face and degeneracy map is an instance of the functorial action
of a pair of monotone vertex maps on the grid, so the simplicial
relations hold by construction; the tests still check them one by one.
"""

from itertools import product

from .errors import DomainError, ResourceCapError
from .core import core_action_on_box, core_boxes, core_groupoid

DEFAULT_CELL_CAP = 10 ** 6


def make_cell(m, n, entries):
    return (m, n, tuple(entries))


def box_at(cell, i, j):
    # 1-based row and column
    m, n, entries = cell
    return entries[(i - 1) * n + (j - 1)]


def cell_is_valid(dg, cell):
    m, n, entries = cell
    if m == 0 and n == 0:
        return len(entries) == 1 and entries[0] in dg.points
    if n == 0:
        return all(dg.V.end[entries[i]] == dg.V.src[entries[i + 1]]
                   for i in range(m - 1))
    if m == 0:
        return all(dg.H.end[entries[j]] == dg.H.src[entries[j + 1]]
                   for j in range(n - 1))
    for i in range(1, m + 1):
        for j in range(1, n):
            if dg.r[box_at(cell, i, j)] != dg.l[box_at(cell, i, j + 1)]:
                return False
    for i in range(1, m):
        for j in range(1, n + 1):
            if dg.b[box_at(cell, i, j)] != dg.t[box_at(cell, i + 1, j)]:
                return False
    return True


def nerve_cells(dg, m, n, cap=DEFAULT_CELL_CAP):
    """All (m,n) cells in lexicographic entry order."""
    if m == 0 and n == 0:
        return [make_cell(0, 0, (P,)) for P in sorted(dg.points)]
    if n == 0:
        tuples = dg.V.composable_tuples(m)
        if len(tuples) > cap:
            raise ResourceCapError("cell cap exceeded at (%d,%d)" % (m, n))
        return [make_cell(m, 0, t) for t in sorted(tuples)]
    if m == 0:
        tuples = dg.H.composable_tuples(n)
        if len(tuples) > cap:
            raise ResourceCapError("cell cap exceeded at (%d,%d)" % (m, n))
        return [make_cell(0, n, t) for t in sorted(tuples)]

    by_l = dg.boxes_by_l()
    rows = [(A,) for A in dg.boxes]
    for _ in range(n - 1):
        rows = [row + (B,) for row in rows for B in by_l.get(dg.r[row[-1]], ())]
        if len(rows) > cap:
            raise ResourceCapError("cell cap exceeded at (%d,%d)" % (m, n))
    rows_by_top = {}
    for row in rows:
        rows_by_top.setdefault(tuple(dg.t[A] for A in row), []).append(row)
    cells = [row for row in rows]
    for _ in range(m - 1):
        cells = [c + row for c in cells
                 for row in rows_by_top.get(tuple(dg.b[A] for A in c[-n:]), ())]
        if len(cells) > cap:
            raise ResourceCapError("cell cap exceeded at (%d,%d)" % (m, n))
    return [make_cell(m, n, c) for c in sorted(cells)]


def cell_vertex(dg, cell, k, c):
    """Point at row boundary k (0..m) and column boundary c (0..n)."""
    m, n, entries = cell
    if m == 0 and n == 0:
        return entries[0]
    if n == 0:
        g = entries[k - 1] if k > 0 else entries[0]
        return dg.V.end[g] if k > 0 else dg.V.src[g]
    if m == 0:
        x = entries[c - 1] if c > 0 else entries[0]
        return dg.H.end[x] if c > 0 else dg.H.src[x]
    if k == 0 and c == 0:
        return dg.tl(box_at(cell, 1, 1))
    if k == 0:
        return dg.tr(box_at(cell, 1, c))
    if c == 0:
        return dg.bl(box_at(cell, k, 1))
    return dg.br(box_at(cell, k, c))


def cell_h_arrow(dg, cell, k, c):
    """Horizontal arrow at row boundary k, spanning column c (1..n)."""
    m, n, entries = cell
    if m == 0:
        return entries[c - 1]
    if k == 0:
        return dg.t[box_at(cell, 1, c)]
    return dg.b[box_at(cell, k, c)]


def cell_v_arrow(dg, cell, k, c):
    """Vertical arrow at column boundary c, spanning row k (1..m)."""
    m, n, entries = cell
    if n == 0:
        return entries[k - 1]
    if c == 0:
        return dg.l[box_at(cell, k, 1)]
    return dg.r[box_at(cell, k, c)]


def block_composite(dg, cell, rows, cols):
    """Composite of the sub-matrix given by nonempty 1-based index ranges."""
    row_comps = [_row_composite(dg, cell, i, cols) for i in rows]
    out = row_comps[0]
    for nxt in row_comps[1:]:
        out = dg.vcompose(out, nxt)
    return out


def _row_composite(dg, cell, i, cols):
    out = box_at(cell, i, cols[0])
    for j in cols[1:]:
        out = dg.hcompose(out, box_at(cell, i, j))
    return out


def apply_bisimplicial(dg, cell, f1, f2):
    """Pull back a cell along monotone vertex maps.

    f1 lists the images in 0..m of the m'+1 row boundaries of the new
    cell; f2 does the same for columns.  Empty ranges produce thin
    entries (identity rows or columns, theta at collapsed corners).
    """
    m, n, _ = cell
    mp, np_ = len(f1) - 1, len(f2) - 1
    assert all(a <= b for a, b in zip(f1, f1[1:]))
    assert all(a <= b for a, b in zip(f2, f2[1:]))
    assert 0 <= f1[0] and f1[-1] <= m and 0 <= f2[0] and f2[-1] <= n

    def hspan(k, j):
        # composite H-arrow at boundary k over target column j
        cols = range(f2[j - 1] + 1, f2[j] + 1)
        if not cols:
            return dg.H.ident[cell_vertex(dg, cell, k, f2[j])]
        return dg.H.compose_chain([cell_h_arrow(dg, cell, k, c) for c in cols])

    def vspan(c, i):
        rows = range(f1[i - 1] + 1, f1[i] + 1)
        if not rows:
            return dg.V.ident[cell_vertex(dg, cell, f1[i], c)]
        return dg.V.compose_chain([cell_v_arrow(dg, cell, k, c) for k in rows])

    if mp == 0 and np_ == 0:
        return make_cell(0, 0, (cell_vertex(dg, cell, f1[0], f2[0]),))
    if mp == 0:
        return make_cell(0, np_, tuple(hspan(f1[0], j)
                                       for j in range(1, np_ + 1)))
    if np_ == 0:
        return make_cell(mp, 0, tuple(vspan(f2[0], i)
                                      for i in range(1, mp + 1)))

    entries = []
    for i in range(1, mp + 1):
        rows = list(range(f1[i - 1] + 1, f1[i] + 1))
        for j in range(1, np_ + 1):
            cols = list(range(f2[j - 1] + 1, f2[j] + 1))
            if rows and cols:
                entries.append(block_composite(dg, cell, rows, cols))
            elif rows:
                entries.append(dg.vid[vspan(f2[j], i)])
            elif cols:
                entries.append(dg.hid[hspan(f1[i], j)])
            else:
                entries.append(
                    dg.theta[cell_vertex(dg, cell, f1[i], f2[j])])
    return make_cell(mp, np_, entries)


def _delta(i, m):
    # vertex map of the injection [m-1] -> [m] skipping i
    return tuple(j if j < i else j + 1 for j in range(m))


def _sigma(i, m):
    # vertex map of the surjection [m+1] -> [m] repeating i
    return tuple(j if j <= i else j - 1 for j in range(m + 2))


def _iota(m):
    return tuple(range(m + 1))


def face_v(dg, cell, i):
    """Vertical face: drop or merge rows; i in 0..m."""
    m, n, _ = cell
    if not 0 <= i <= m or m == 0:
        raise DomainError("vertical face index %d out of range" % i)
    return apply_bisimplicial(dg, cell, _delta(i, m), _iota(n))


def face_h(dg, cell, j):
    m, n, _ = cell
    if not 0 <= j <= n or n == 0:
        raise DomainError("horizontal face index %d out of range" % j)
    return apply_bisimplicial(dg, cell, _iota(m), _delta(j, n))


def degeneracy_v(dg, cell, i):
    """Vertical degeneracy: insert an identity row after boundary i."""
    m, n, _ = cell
    if not 0 <= i <= m:
        raise DomainError("vertical degeneracy index %d out of range" % i)
    return apply_bisimplicial(dg, cell, _sigma(i, m), _iota(n))


def degeneracy_h(dg, cell, j):
    m, n, _ = cell
    if not 0 <= j <= n:
        raise DomainError("horizontal degeneracy index %d out of range" % j)
    return apply_bisimplicial(dg, cell, _iota(m), _sigma(j, n))


def is_degenerate(dg, cell):
    """True when the cell is in the image of some degeneracy map.

    For edge cells this means an identity-arrow entry; for box matrices
    it means a whole row of horizontal-identity boxes or a whole column
    of vertical-identity boxes.
    """
    m, n, entries = cell
    if m == 0 and n == 0:
        return False
    if n == 0:
        return any(dg.V.is_identity(g) for g in entries)
    if m == 0:
        return any(dg.H.is_identity(x) for x in entries)
    for i in range(1, m + 1):
        if all(dg.is_hid(box_at(cell, i, j)) for j in range(1, n + 1)):
            return True
    for j in range(1, n + 1):
        if all(dg.is_vid(box_at(cell, i, j)) for i in range(1, m + 1)):
            return True
    return False


# ---------------------------------------------------------------------------
# Corner matrices and the core-orbit realization.
#
# The corner matrix of an (m,n) cell has entry (k,l), 0 <= k <= m and
# 0 <= l <= n, equal to the composite of the sub-matrix of rows k+1..m
# and columns 1..l, padded with thin boxes when a range is empty.  The
# core groupoid translates such matrices entrywise; a matrix is in the
# domain of psi exactly when it is a core translate of a corner matrix.
# ---------------------------------------------------------------------------


def staircase_matrix(dg, cell):
    m, n, entries = cell
    if m == 0 or n == 0:
        P = cell_vertex(dg, cell, m, 0)
        out = []
        for k in range(m + 1):
            row = [dg.theta[P] if k == m
                   else dg.vid[dg.V.compose_chain(entries[k:])]]
            for l in range(1, n + 1):
                if k < m:
                    row.append(dg.vid[dg.V.compose_chain(entries[k:])])
                else:
                    row.append(dg.hid[dg.H.compose_chain(entries[:l])])
            out.append(tuple(row))
        return tuple(out)
    out = []
    for k in range(m + 1):
        row = []
        rows = list(range(k + 1, m + 1))
        for l in range(n + 1):
            cols = list(range(1, l + 1))
            if rows and cols:
                row.append(block_composite(dg, cell, rows, cols))
            elif rows:
                g = dg.V.compose_chain([dg.l[box_at(cell, i, 1)]
                                        for i in rows])
                row.append(dg.vid[g])
            elif cols:
                x = dg.H.compose_chain([dg.b[box_at(cell, m, j)]
                                        for j in cols])
                row.append(dg.hid[x])
            else:
                row.append(dg.theta[dg.bl(box_at(cell, m, 1))])
        out.append(tuple(row))
    return tuple(out)


def matrix_gamma(dg, mat):
    return dg.bl(mat[-1][0])


def translate_matrix(dg, E, mat):
    """Entrywise core action of E on a corner matrix."""
    if dg.tr(E) != matrix_gamma(dg, mat):
        raise DomainError("core arrow does not reach the matrix basepoint")
    return tuple(tuple(core_action_on_box(dg, E, A) for A in row)
                 for row in mat)


class CoreOrbit:
    """Orbit of a corner matrix under the entrywise core action.

    The stored representative is the unique corner matrix in the orbit
    whose bottom-left entry is a theta box.
    """

    __slots__ = ["m", "n", "representative"]

    def __init__(self, m, n, representative):
        self.m = m
        self.n = n
        self.representative = representative

    def __eq__(self, other):
        return isinstance(other, CoreOrbit) \
            and self.representative == other.representative

    def __hash__(self):
        return hash((self.m, self.n, self.representative))

    def __repr__(self):
        return "CoreOrbit(%d, %d, %r)" % (self.m, self.n, self.representative)


def _canonical_matrix(dg, mat):
    """Translate so the bottom-left entry becomes a theta box."""
    E = mat[-1][0]
    if E not in set(core_boxes(dg)):
        raise DomainError("bottom-left entry is not a core box")
    cg = core_groupoid(dg)
    return translate_matrix(dg, cg.inv[E], mat)


def phi(dg, cell):
    """Cell -> orbit of its corner matrix."""
    m, n, _ = cell
    return CoreOrbit(m, n, staircase_matrix(dg, cell))


def psi(dg, orbit):
    """Orbit -> cell, via the 2x2 mixed-inverse composites."""
    mat = orbit.representative if isinstance(orbit, CoreOrbit) else orbit
    m, n = len(mat) - 1, len(mat[0]) - 1
    if m == 0 and n == 0:
        return make_cell(0, 0, (dg.bl(mat[0][0]),))
    if m == 0:
        xs = [dg.H.compose(dg.H.inv[dg.t[mat[0][j - 1]]], dg.t[mat[0][j]])
              for j in range(1, n + 1)]
        return make_cell(0, n, xs)
    if n == 0:
        gs = [dg.V.compose(dg.l[mat[k - 1][0]], dg.V.inv[dg.l[mat[k][0]]])
              for k in range(1, m + 1)]
        return make_cell(m, 0, gs)
    entries = []
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            top = dg.hcompose(dg.hinv[mat[i - 1][j - 1]], mat[i - 1][j])
            bottom = dg.hcompose(dg.vinv[dg.hinv[mat[i][j - 1]]],
                                 dg.vinv[mat[i][j]])
            entries.append(dg.vcompose(top, bottom))
    return make_cell(m, n, entries)


def orbit_of_matrix(dg, mat):
    """Orbit of an arbitrary member matrix, or a domain error when the
    matrix is not a core translate of a corner matrix."""
    m, n = len(mat) - 1, len(mat[0]) - 1
    canon = _canonical_matrix(dg, mat)
    cell = psi(dg, canon)
    if staircase_matrix(dg, cell) != canon:
        raise DomainError("matrix is not in the corner-matrix family")
    return CoreOrbit(m, n, canon)


def corner_matrix_family(dg, m, n, cap=DEFAULT_CELL_CAP):
    """All matrices in the corner family at (m,n), by brute-force scan
    of every box matrix with row-constant l sides and column-constant
    b sides."""
    out = []
    by_lb = {}
    for A in dg.boxes:
        by_lb.setdefault((dg.l[A], dg.b[A]), []).append(A)
    for P in sorted(dg.points):
        ls = [g for g in dg.V.arrows if dg.V.end[g] == P]
        bs = [x for x in dg.H.arrows if dg.H.src[x] == P]
        for lrow in product(ls, repeat=m + 1):
            for bcol in product(bs, repeat=n + 1):
                slots = [by_lb.get((lrow[i], bcol[j]), [])
                         for i in range(m + 1) for j in range(n + 1)]
                total = 1
                for s in slots:
                    total *= len(s)
                if total == 0:
                    continue
                if len(out) + total > cap:
                    raise ResourceCapError("corner matrix cap exceeded")
                for flat in product(*slots):
                    mat = tuple(tuple(flat[i * (n + 1) + j]
                                      for j in range(n + 1))
                                for i in range(m + 1))
                    try:
                        orbit_of_matrix(dg, mat)
                    except DomainError:
                        continue
                    out.append(mat)
    return out


def orbit_count(dg, m, n, cap=DEFAULT_CELL_CAP):
    """Number of core orbits in the corner family, by direct scan."""
    reps = set()
    for mat in corner_matrix_family(dg, m, n, cap):
        reps.add(_canonical_matrix(dg, mat))
    return len(reps)
