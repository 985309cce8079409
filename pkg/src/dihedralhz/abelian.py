"""Exact integer linear algebra: Smith normal form, finitely generated
abelian groups, and maps between presented groups.

Everything here is over Z with arbitrary-precision integers.  Matrices are
dense lists of rows; a presentation (n, R) means the quotient of Z^n by the
column span of R.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class NotAComplex(Exception):
    """Consecutive differentials do not compose to zero."""


class MalformedMap(Exception):
    """Matrix does not carry source relations into target relations."""


# ---------------------------------------------------------------------------
# dense matrix helpers


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    ra, ca = len(A), len(A[0]) if A else 0
    cb = len(B[0]) if B else 0
    out = [[0] * cb for _ in range(ra)]
    for i in range(ra):
        Ai = A[i]
        Oi = out[i]
        for k in range(ca):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(cb):
                    if Bk[j]:
                        Oi[j] += a * Bk[j]
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def hstack(A, B):
    if not A:
        return [list(row) for row in B]
    if not B:
        return [list(row) for row in A]
    return [list(ra) + list(rb) for ra, rb in zip(A, B)]


def columns(A):
    return transpose(A)


def from_columns(cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


def det(A):
    """Determinant of a small integer matrix, by integer row elimination."""
    n = len(A)
    M = [row[:] for row in A]
    sign = 1
    result = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        for r in range(col + 1, n):
            while M[r][col]:
                q = M[r][col] // M[col][col]
                if q:
                    M[r] = [x - q * y for x, y in zip(M[r], M[col])]
                if M[r][col]:
                    M[col], M[r] = M[r], M[col]
                    sign = -sign
        result *= M[col][col]
    return sign * result


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M):
    """Return (D, U, V) with U*M*V = D, U, V unimodular, D diagonal with
    nonnegative entries forming a divisibility chain d1 | d2 | ...
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [row[:] for row in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    n = min(rows, cols)
    while t < n:
        # find pivot: smallest nonzero abs value in remaining block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v:
                    if best is None or abs(v) < best:
                        best = abs(v)
                        piv = (i, j)
                        if best == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            # clear column t
            dirty = False
            for r in range(t + 1, rows):
                if A[r][t]:
                    q = A[r][t] // A[t][t]
                    addmul_row(r, t, -q)
                    if A[r][t]:
                        swap_rows(t, r)
                        dirty = True
            for c in range(t + 1, cols):
                if A[t][c]:
                    q = A[t][c] // A[t][t]
                    addmul_col(c, t, -q)
                    if A[t][c]:
                        swap_cols(t, c)
                        dirty = True
            if not dirty:
                break
        # ensure pivot divides the rest of the block
        d = A[t][t]
        fixed = True
        for r in range(t + 1, rows):
            for c in range(t + 1, cols):
                if A[r][c] % d:
                    addmul_row(t, r, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if d < 0:
            negate_row(t)
        t += 1
    return A, U, V


def snf_diagonal(M):
    D, _, _ = smith_normal_form(M)
    n = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(n)]


def invariant_factors_of_quotient(ngens, rel_matrix):
    """Invariant factors of Z^ngens / colspan(rel_matrix).

    Returns (free_rank, [d1, d2, ...]) with 2 <= d1 | d2 | ...
    """
    if ngens == 0:
        return 0, []
    if not rel_matrix or not rel_matrix[0]:
        return ngens, []
    d = snf_diagonal(rel_matrix)
    rank = sum(1 for x in d if x)
    torsion = sorted(x for x in d if x > 1)
    return ngens - rank, torsion


# ---------------------------------------------------------------------------
# integer system solving


def solve_int(A, b):
    """One integer solution x of A x = b, or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    D, U, V = smith_normal_form(A)
    c = mat_vec(U, b)
    z = [0] * cols
    n = min(rows, cols)
    for i in range(rows):
        di = D[i][i] if i < n else 0
        if di:
            if c[i] % di:
                return None
            z[i] = c[i] // di
        else:
            if c[i]:
                return None
    return mat_vec(V, z)


def kernel_basis(A):
    """Columns forming a basis of the integer kernel of A."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    D, _, V = smith_normal_form(A)
    n = min(rows, cols)
    ker = []
    for j in range(cols):
        dj = D[j][j] if j < n else 0
        if not dj:
            ker.append([V[i][j] for i in range(cols)])
    return ker


def lattice_basis(gens, dim):
    """Basis (list of vectors of length dim) of the lattice spanned by gens.

    Column-style Hermite reduction: column operations preserve the lattice,
    so the nonzero reduced columns are a basis.
    """
    cols = [list(g) for g in gens if any(g)]
    if not cols:
        return []
    basis = []
    row = 0
    while row < dim and cols:
        live = [c for c in cols if c[row]]
        rest = [c for c in cols if not c[row]]
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[row]))
            piv = live[0]
            new_live = [piv]
            for c in live[1:]:
                q = c[row] // piv[row]
                c = [x - q * y for x, y in zip(c, piv)]
                if c[row]:
                    new_live.append(c)
                elif any(c):
                    rest.append(c)
            live = new_live
        if live:
            basis.append(live[0])
        cols = rest
        row += 1
    return basis


def in_lattice(v, gens):
    """Is v in the lattice spanned by gens (vectors of the same length)?"""
    if all(x == 0 for x in v):
        return True
    if not gens:
        return False
    A = from_columns(gens, len(v))
    return solve_int(A, v) is not None


# ---------------------------------------------------------------------------
# groups and maps


@dataclass(frozen=True)
class FgAbGroup:
    """Canonical form of a finitely generated abelian group."""

    free_rank: int
    torsion: tuple

    def __post_init__(self):
        assert self.free_rank >= 0
        assert all(d >= 2 for d in self.torsion), self.torsion
        for a, b in zip(self.torsion, self.torsion[1:]):
            assert b % a == 0, self.torsion

    @staticmethod
    def from_relations(ngens, rel_matrix):
        fr, tor = invariant_factors_of_quotient(ngens, rel_matrix)
        return FgAbGroup(fr, tuple(tor))

    @staticmethod
    def zero():
        return FgAbGroup(0, ())

    @staticmethod
    def free(rank):
        return FgAbGroup(rank, ())

    @staticmethod
    def cyclic(n):
        if n == 0:
            return FgAbGroup(1, ())
        if n == 1:
            return FgAbGroup(0, ())
        return FgAbGroup(0, (abs(n),))

    def direct_sum(self, other):
        merged = merge_invariant_factors(list(self.torsion), list(other.torsion))
        return FgAbGroup(self.free_rank + other.free_rank, tuple(merged))

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self):
        if self.free_rank:
            return 0
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def merge_invariant_factors(t1, t2):
    """Invariant factors of the direct sum of two torsion groups."""
    from collections import defaultdict

    primary = defaultdict(list)
    for d in list(t1) + list(t2):
        n = d
        f = 2
        while f * f <= n:
            if n % f == 0:
                e = 0
                while n % f == 0:
                    n //= f
                    e += 1
                primary[f].append(e)
            f += 1
        if n > 1:
            primary[n].append(1)
    for q in primary:
        primary[q].sort(reverse=True)
    k = max((len(v) for v in primary.values()), default=0)
    out = []
    for i in range(k - 1, -1, -1):
        d = 1
        for q, exps in primary.items():
            if i < len(exps):
                d *= q ** exps[i]
        out.append(d)
    return out


@dataclass(frozen=True)
class Presentation:
    """Z^ngens modulo the column span of rels (a tuple of row-tuples)."""

    ngens: int
    rels: tuple

    @staticmethod
    def make(ngens, rel_matrix):
        rels = tuple(tuple(row) for row in rel_matrix) if rel_matrix else ()
        return Presentation(ngens, rels)

    @staticmethod
    def free(n):
        return Presentation(n, ())

    def rel_list(self):
        return [list(row) for row in self.rels]

    def rel_columns(self):
        R = self.rel_list()
        return columns(R) if R and R[0] else []

    def group(self):
        return FgAbGroup.from_relations(self.ngens, self.rel_list())

    def contains_in_relations(self, v):
        return in_lattice(v, self.rel_columns())


class FgAbMap:
    """Homomorphism between presented groups, given on generators."""

    def __init__(self, source: Presentation, target: Presentation, matrix, check=True):
        self.source = source
        self.target = target
        self.matrix = [list(row) for row in matrix]
        assert len(self.matrix) == target.ngens or target.ngens == 0
        if target.ngens == 0:
            self.matrix = [[] for _ in range(0)]
        if check and not self._well_formed():
            raise MalformedMap("matrix does not respect relations")

    def _well_formed(self):
        tcols = self.target.rel_columns()
        for r in self.source.rel_columns():
            img = mat_vec(self.matrix, r) if self.target.ngens else []
            if self.target.ngens and not in_lattice(img, tcols):
                return False
        return True

    # -- algebra ---------------------------------------------------------

    def compose(self, other):
        """self after other (other first)."""
        assert other.target.ngens == self.source.ngens
        if self.target.ngens == 0 or other.source.ngens == 0 or self.source.ngens == 0:
            return FgAbMap(
                other.source,
                self.target,
                zeros(self.target.ngens, other.source.ngens),
                check=False,
            )
        return FgAbMap(
            other.source, self.target, mat_mul(self.matrix, other.matrix), check=False
        )

    def add(self, other):
        assert self.source.ngens == other.source.ngens
        assert self.target.ngens == other.target.ngens
        M = [
            [a + b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.matrix, other.matrix)
        ]
        return FgAbMap(self.source, self.target, M, check=False)

    def scale(self, k):
        return FgAbMap(
            self.source,
            self.target,
            [[k * x for x in row] for row in self.matrix],
            check=False,
        )

    @staticmethod
    def identity_map(pres):
        return FgAbMap(pres, pres, identity(pres.ngens), check=False)

    @staticmethod
    def zero_map(source, target):
        return FgAbMap(source, target, zeros(target.ngens, source.ngens), check=False)

    def equals(self, other):
        """Equality as homomorphisms (matrix difference lands in relations)."""
        if (
            self.source.ngens != other.source.ngens
            or self.target.ngens != other.target.ngens
        ):
            return False
        tcols = self.target.rel_columns()
        for j in range(self.source.ngens):
            diff = [
                self.matrix[i][j] - other.matrix[i][j]
                for i in range(self.target.ngens)
            ]
            if any(diff) and not in_lattice(diff, tcols):
                return False
        return True

    def is_zero(self):
        return self.equals(FgAbMap.zero_map(self.source, self.target))

    # -- invariants ------------------------------------------------------

    def cokernel_presentation(self):
        R = hstack(self.matrix, self.target.rel_list())
        return Presentation.make(self.target.ngens, R)

    def kernel_lattice(self):
        """Generators of {x in Z^ns : Mx in target relations}."""
        ns = self.source.ngens
        tR = self.target.rel_list()
        if self.target.ngens == 0:
            return [[1 if i == j else 0 for i in range(ns)] for j in range(ns)]
        big = hstack(self.matrix, [[-x for x in row] for row in tR])
        ker = kernel_basis(big)
        gens = [v[:ns] for v in ker]
        return [g for g in gens if any(g)]

    def kernel_presentation(self):
        ns = self.source.ngens
        L = self.kernel_lattice()
        B = lattice_basis(L, ns)
        if not B:
            return Presentation.free(0)
        Bmat = from_columns(B, ns)
        rels = []
        for r in self.source.rel_columns():
            z = solve_int(Bmat, r)
            assert z is not None, "source relation not in kernel lattice"
            rels.append(z)
        return Presentation.make(len(B), from_columns(rels, len(B)) if rels else [])

    def image_presentation(self):
        ns = self.source.ngens
        L = self.kernel_lattice()
        return Presentation.make(ns, from_columns(L, ns) if L else [])

    def invariants(self):
        """(kernel, image, cokernel, factors) as in the module contract."""
        ker = self.kernel_presentation().group()
        img = self.image_presentation().group()
        cok = self.cokernel_presentation().group()
        rel = hstack(self.matrix, self.target.rel_list())
        if rel and rel[0]:
            factors = [d for d in snf_diagonal(rel) if d]
        else:
            factors = []
        return ker, img, cok, factors

    def signature(self):
        """Isomorphism-invariant fingerprint used to compare structure maps."""
        ker, img, cok, _ = self.invariants()
        return (
            (ker.free_rank, ker.torsion),
            (img.free_rank, img.torsion),
            (cok.free_rank, cok.torsion),
        )


def map_invariants(f: FgAbMap):
    return f.invariants()


# ---------------------------------------------------------------------------
# homology of complexes of free abelian groups


class FreeComplex:
    """Bounded complex of free abelian groups.

    ranks: dict degree -> rank; diffs: dict degree n -> matrix of
    d_n : C_n -> C_{n-1} (rank_{n-1} x rank_n, dense).
    """

    def __init__(self, ranks, diffs, check=True):
        self.ranks = dict(ranks)
        self.diffs = {n: [list(r) for r in m] for n, m in diffs.items()}
        if check:
            self._check()

    def rank(self, n):
        return self.ranks.get(n, 0)

    def diff(self, n):
        m = self.diffs.get(n)
        if m is None:
            return zeros(self.rank(n - 1), self.rank(n))
        return m

    def degrees(self):
        return sorted(self.ranks)

    def _check(self):
        for n in list(self.diffs):
            d = self.diffs[n]
            if len(d) != self.rank(n - 1) or (d and len(d[0]) != self.rank(n)):
                raise ValueError(f"differential at degree {n} has wrong shape")
        for n in self.degrees():
            dn = self.diff(n)
            dn1 = self.diff(n + 1)
            if self.rank(n + 1) and self.rank(n - 1):
                sq = mat_mul(dn, dn1)
                if any(any(row) for row in sq):
                    raise NotAComplex(f"d∘d != 0 at degree {n + 1}")

    def shifted(self, k):
        """Suspension: degree n of the result is degree n-k of self."""
        ranks = {n + k: r for n, r in self.ranks.items()}
        diffs = {n + k: m for n, m in self.diffs.items()}
        return FreeComplex(ranks, diffs, check=False)

    def homology_presentation(self, n):
        """(cycle basis matrix, presentation of H_n in that basis)."""
        rk = self.rank(n)
        if rk == 0:
            return [], Presentation.free(0)
        dn = self.diff(n)
        if self.rank(n - 1) == 0:
            cycles = [[1 if i == j else 0 for i in range(rk)] for j in range(rk)]
        else:
            cycles = kernel_basis(dn)
        if not cycles:
            return [], Presentation.free(0)
        K = from_columns(cycles, rk)
        rels = []
        if self.rank(n + 1):
            for col in columns(self.diff(n + 1)):
                z = solve_int(K, col)
                if z is None:
                    raise NotAComplex("boundary is not a cycle")
                rels.append(z)
        pres = Presentation.make(
            len(cycles), from_columns(rels, len(cycles)) if rels else []
        )
        return K, pres


def homology_at(complex_: FreeComplex, n: int) -> FgAbGroup:
    _, pres = complex_.homology_presentation(n)
    return pres.group()
