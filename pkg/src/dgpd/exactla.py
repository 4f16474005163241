"""Exact integer linear algebra: Smith normal form, kernels, quotients.

Matrices are lists of lists of Python ints, row major.  Everything is
computed over Z with no floating point; correctness of the transforms
is cheap to re-check (U*A*V == D) and the test suite does so.
"""

from math import gcd


def xgcd(a, b):
    # invariant: x*a + y*b == g, next_x*a + next_y*b == next_g
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return g, x, y


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(n, m):
    return [[0] * m for _ in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    C = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Ci = C[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    Ci[j] += a * Bt[j]
    return C


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def determinant(A):
    # fraction-free Gaussian elimination (Bareiss)
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[-1][-1]


class SmithForm:
    """D = U * A * V with U, V unimodular; inverses tracked alongside."""

    __slots__ = ["D", "U", "V", "Uinv", "Vinv", "rank", "nrows", "ncols"]

    def __init__(self, A, ncols=None):
        n = len(A)
        m = len(A[0]) if n else (ncols or 0)
        D = [row[:] for row in A]
        U, Uinv = identity_matrix(n), identity_matrix(n)
        V, Vinv = identity_matrix(m), identity_matrix(m)

        def row_swap(i, j):
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            for r in Uinv:
                r[i], r[j] = r[j], r[i]

        def col_swap(i, j):
            for r in D:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

        def row_add(i, j, q):
            # row i += q * row j
            if q == 0:
                return
            D[i] = [a + q * b for a, b in zip(D[i], D[j])]
            U[i] = [a + q * b for a, b in zip(U[i], U[j])]
            for r in Uinv:
                r[j] -= q * r[i]

        def col_add(i, j, q):
            # col i += q * col j
            if q == 0:
                return
            for r in D:
                r[i] += q * r[j]
            for r in V:
                r[i] += q * r[j]
            Vinv[j] = [a - q * b for a, b in zip(Vinv[j], Vinv[i])]

        def row_neg(i):
            D[i] = [-a for a in D[i]]
            U[i] = [-a for a in U[i]]
            for r in Uinv:
                r[i] = -r[i]

        t = 0
        while t < n and t < m:
            # find a pivot
            pi, pj = -1, -1
            for i in range(t, n):
                for j in range(t, m):
                    if D[i][j]:
                        pi, pj = i, j
                        break
                if pi >= 0:
                    break
            if pi < 0:
                break
            row_swap(t, pi)
            col_swap(t, pj)
            while True:
                # clear column t
                for i in range(t + 1, n):
                    a, b = D[t][t], D[i][t]
                    if b == 0:
                        continue
                    if b % a == 0:
                        row_add(i, t, -(b // a))
                    else:
                        g, x, y = xgcd(a, b)
                        # [x, y; -b/g, a/g] has determinant 1
                        p, q = -(b // g), a // g
                        Dt, Di = D[t], D[i]
                        D[t] = [x * u + y * v for u, v in zip(Dt, Di)]
                        D[i] = [p * u + q * v for u, v in zip(Dt, Di)]
                        Ut, Ui = U[t], U[i]
                        U[t] = [x * u + y * v for u, v in zip(Ut, Ui)]
                        U[i] = [p * u + q * v for u, v in zip(Ut, Ui)]
                        for r in Uinv:
                            u, v = r[t], r[i]
                            r[t] = q * u - p * v
                            r[i] = -y * u + x * v
                # clear row t
                dirty = False
                for j in range(t + 1, m):
                    a, b = D[t][t], D[t][j]
                    if b == 0:
                        continue
                    if b % a == 0:
                        col_add(j, t, -(b // a))
                    else:
                        g, x, y = xgcd(a, b)
                        p, q = -(b // g), a // g
                        for r in D:
                            u, v = r[t], r[j]
                            r[t] = x * u + y * v
                            r[j] = p * u + q * v
                        for r in V:
                            u, v = r[t], r[j]
                            r[t] = x * u + y * v
                            r[j] = p * u + q * v
                        Vt, Vj = Vinv[t], Vinv[j]
                        Vinv[t] = [q * u - p * v for u, v in zip(Vt, Vj)]
                        Vinv[j] = [-y * u + x * v for u, v in zip(Vt, Vj)]
                        dirty = True
                if not dirty and all(D[i][t] == 0 for i in range(t + 1, n)):
                    break
            if D[t][t] < 0:
                row_neg(t)
            t += 1

        # enforce the divisibility chain
        changed = True
        while changed:
            changed = False
            for i in range(t - 1):
                a, b = D[i][i], D[i + 1][i + 1]
                if b % a != 0:
                    changed = True
                    # fold b into position i: add col i+1 to col i,
                    # then redo the 2x2 block
                    col_add(i, i + 1, 1)
                    g, x, y = xgcd(a, b)
                    # rows: [x, y; -b/g, a/g]
                    p, q = -(b // g), a // g
                    Di, Dj = D[i], D[i + 1]
                    D[i] = [x * u + y * v for u, v in zip(Di, Dj)]
                    D[i + 1] = [p * u + q * v for u, v in zip(Di, Dj)]
                    Ui, Uj = U[i], U[i + 1]
                    U[i] = [x * u + y * v for u, v in zip(Ui, Uj)]
                    U[i + 1] = [p * u + q * v for u, v in zip(Ui, Uj)]
                    for r in Uinv:
                        u, v = r[i], r[i + 1]
                        r[i] = q * u - p * v
                        r[i + 1] = -y * u + x * v
                    # clear the off-diagonal entry left in column i+1
                    b2 = D[i][i + 1]
                    assert D[i][i] == g
                    col_add(i + 1, i, -(b2 // g))
                    rem = D[i + 1][i + 1]
                    if rem < 0:
                        row_neg(i + 1)

        self.D, self.U, self.V = D, U, V
        self.Uinv, self.Vinv = Uinv, Vinv
        self.nrows, self.ncols = n, m
        self.rank = t

    def diagonal(self):
        return [self.D[i][i] for i in range(self.rank)]


def smith_normal_form(A, ncols=None):
    return SmithForm(A, ncols)


def kernel_basis(A, ncols=None):
    """Basis of the integer kernel {x : A x = 0}, as a list of vectors."""
    sf = SmithForm(A, ncols)
    return [[sf.V[i][j] for i in range(sf.ncols)]
            for j in range(sf.rank, sf.ncols)]


def solve(A, b, ncols=None):
    """One integer solution x of A x = b, or None."""
    sf = SmithForm(A, ncols)
    y = mat_vec(sf.U, b)
    z = [0] * sf.ncols
    for i in range(sf.nrows):
        if i < sf.rank:
            d = sf.D[i][i]
            if y[i] % d != 0:
                return None
            z[i] = y[i] // d
        elif y[i] != 0:
            return None
    return mat_vec(sf.V, z)


class QuotientGroup:
    """Z^n modulo the column span of a relation matrix.

    Elements are classes of integer vectors.  `factors` lists the cyclic
    orders of the nontrivial invariant factors; 0 stands for an infinite
    factor (never occurs for the finite groups handled here).
    """

    __slots__ = ["n", "sf", "coords", "factors"]

    def __init__(self, n, relation_columns):
        R = [[col[i] for col in relation_columns] for i in range(n)]
        if not relation_columns:
            R = [[] for _ in range(n)]
        self.n = n
        self.sf = SmithForm(R) if n else None
        self.coords = []
        self.factors = []
        if n:
            diag = self.sf.diagonal()
            for i in range(n):
                d = diag[i] if i < len(diag) else 0
                if d != 1:
                    self.coords.append(i)
                    self.factors.append(d)

    def class_of(self, x):
        if self.n == 0:
            return ()
        y = mat_vec(self.sf.U, x)
        out = []
        for i, d in zip(self.coords, self.factors):
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def lift(self, cls):
        if self.n == 0:
            return []
        y = [0] * self.n
        for i, c in zip(self.coords, cls):
            y[i] = c
        return mat_vec(self.sf.Uinv, y)

    @property
    def order(self):
        r = 1
        for d in self.factors:
            if d == 0:
                return 0
            r *= d
        return r

    def elements(self):
        assert all(d > 0 for d in self.factors)
        def rec(i):
            if i == len(self.factors):
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.factors[i]):
                    yield (c,) + rest
        return list(rec(0))


def invariant_factors_of_quotient(n, relation_columns):
    return QuotientGroup(n, relation_columns).factors
