"""Size reduction of sparse integer chain complexes.

Discrete-Morse style elimination of unit-coefficient incidences.  Each
step removes a pair (a, b) with <db, a> = ±1 and rewrites the remaining
differential; the chain homotopy equivalence with the original complex is
tracked so homology classes and induced maps can be transported back.

With eps = <db, a> and p the projection that forgets a and b:
    d'(x)  = p(dx) - eps * <dx, a> * p(db)
    iota(x) = x - eps * <dx, a> * b          (core -> original, chain map)
    pi(v)   = p(v) - eps * <v, a> * p(db)    (original -> core, chain map)
and pi ∘ iota = id on the core.

Pairs are processed cheapest first (Markowitz cost (|db|-1)(|cofaces(a)|-1)
through a lazy heap), so free-face and free-coface cascades, which cause no
fill-in at all, run before anything else.
"""

from __future__ import annotations

import heapq

from .abelian import FgAbMap, FreeComplex, from_columns, solve_int


class SparseComplex:
    """Plain chain complex, sparse columns: diffs[n][k] = {i: coeff}."""

    def __init__(self, ranks, diffs):
        self.ranks = {n: r for n, r in ranks.items() if r}
        self.diffs = {
            n: [dict(c) for c in cols]
            for n, cols in diffs.items()
            if any(c for c in cols)
        }

    def rank(self, n):
        return self.ranks.get(n, 0)

    def degrees(self):
        return sorted(self.ranks)

    def diff_cols(self, n):
        return self.diffs.get(n, [dict() for _ in range(self.rank(n))])

    def total_rank(self):
        return sum(self.ranks.values())

    def to_free_complex(self):
        ranks = dict(self.ranks)
        diffs = {}
        for n in self.degrees():
            lo = self.rank(n - 1)
            if lo == 0:
                continue
            M = [[0] * self.rank(n) for _ in range(lo)]
            for k, c in enumerate(self.diff_cols(n)):
                for i, v in c.items():
                    M[i][k] = v
            diffs[n] = M
        return FreeComplex(ranks, diffs)

    def verify(self):
        for n in self.degrees():
            hi = self.diffs.get(n + 1)
            lo = self.diffs.get(n)
            if not hi or not lo:
                continue
            for c in hi:
                acc = {}
                for mid, v in c.items():
                    for low, w in lo[mid].items():
                        acc[low] = acc.get(low, 0) + v * w
                assert not any(acc.values()), f"d∘d != 0 at {n + 1}"


class Reduction:
    """Core complex plus the transport maps to and from the original."""

    def __init__(self, original: SparseComplex):
        self.original_ranks = dict(original.ranks)
        self._run(original)

    def _run(self, X):
        # global integer cell ids
        offsets = {}
        degree_of = []
        local_of = []
        total = 0
        for n in X.degrees():
            offsets[n] = total
            r = X.rank(n)
            degree_of.extend([n] * r)
            local_of.extend(range(r))
            total += r
        boundary = [dict() for _ in range(total)]
        coboundary = [set() for _ in range(total)]
        for n in X.degrees():
            base = offsets[n]
            below = offsets.get(n - 1)
            for k, c in enumerate(X.diff_cols(n)):
                cell = base + k
                for i, v in c.items():
                    face = below + i
                    boundary[cell][face] = v
                    coboundary[face].add(cell)

        alive = [True] * total
        iota = {cell: {cell: 1} for cell in range(total)}
        pi = {cell: {cell: 1} for cell in range(total)}

        def best_pair(b):
            db = boundary[b]
            best = None
            for a, v in db.items():
                if v == 1 or v == -1:
                    cost = (len(db) - 1) * (len(coboundary[a]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, a, v)
                        if cost == 0:
                            break
            return best

        heap = []
        for b in range(total):
            found = best_pair(b)
            if found:
                heapq.heappush(heap, (found[0], b))
        while heap:
            cost0, b = heapq.heappop(heap)
            if not alive[b]:
                continue
            found = best_pair(b)
            if found is None:
                continue
            cost, a, eps = found
            if cost > cost0 and heap and heap[0][0] < cost:
                heapq.heappush(heap, (cost, b))
                continue
            db = boundary[b]
            pa = pi[a]
            # update pi rows of the other faces of b
            for y, w in db.items():
                if y == a:
                    continue
                row = pi[y]
                for orig, x in pa.items():
                    nv = row.get(orig, 0) - eps * w * x
                    if nv:
                        row[orig] = nv
                    elif orig in row:
                        del row[orig]
            del pi[a]
            del pi[b]
            ib = iota[b]
            touched = set()
            for x in [x for x in coboundary[a] if x != b and alive[x]]:
                c = boundary[x].pop(a)
                factor = -eps * c
                bx = boundary[x]
                for y, w in db.items():
                    if y == a:
                        continue
                    nv = bx.get(y, 0) + factor * w
                    if nv:
                        if y not in bx:
                            coboundary[y].add(x)
                        bx[y] = nv
                    elif y in bx:
                        del bx[y]
                        coboundary[y].discard(x)
                        touched.add(y)
                col = iota[x]
                for orig, v in ib.items():
                    nv = col.get(orig, 0) + factor * v
                    if nv:
                        col[orig] = nv
                    elif orig in col:
                        del col[orig]
                touched.add(x)
            for y in db:
                coboundary[y].discard(b)
                touched |= coboundary[y]
            for x in coboundary[b]:
                if alive[x] and b in boundary[x]:
                    del boundary[x][b]
            for y in boundary[a]:
                coboundary[y].discard(a)
            coboundary[a] = set()
            coboundary[b] = set()
            boundary[a] = {}
            boundary[b] = {}
            del iota[a]
            del iota[b]
            alive[a] = False
            alive[b] = False
            touched.discard(a)
            touched.discard(b)
            for x in touched:
                if alive[x] and boundary[x]:
                    found = best_pair(x)
                    if found:
                        heapq.heappush(heap, (found[0], x))

        survivors = [cell for cell in range(total) if alive[cell]]
        self.cell_index = {}
        cells = {}
        for cell in survivors:
            n = degree_of[cell]
            lst = cells.setdefault(n, [])
            self.cell_index[cell] = len(lst)
            lst.append(cell)
        ranks = {n: len(lst) for n, lst in cells.items()}
        diffs = {}
        for n, lst in cells.items():
            cols = []
            for cell in lst:
                cols.append(
                    {self.cell_index[f]: v for f, v in boundary[cell].items()}
                )
            diffs[n] = cols
        self.core = SparseComplex(ranks, diffs)
        self.iota = {
            n: [
                {local_of[f]: v for f, v in iota[cell].items()}
                for cell in lst
            ]
            for n, lst in cells.items()
        }
        # pi stored per degree, per original local index
        self.pi = {}
        for cell, row in pi.items():
            j = self.cell_index[cell]
            for orig, v in row.items():
                self.pi.setdefault(degree_of[orig], {}).setdefault(
                    local_of[orig], {}
                )[j] = v

    def project(self, n, vec):
        """Apply pi to a sparse vector in original degree n."""
        table = self.pi.get(n, {})
        out = {}
        for k, v in vec.items():
            row = table.get(k)
            if not row:
                continue
            for j, w in row.items():
                out[j] = out.get(j, 0) + v * w
        return {j: v for j, v in out.items() if v}

    def include(self, n, vec):
        """Apply iota to a sparse vector on the degree-n core basis."""
        cols = self.iota.get(n, [])
        out = {}
        for j, v in vec.items():
            for k, w in cols[j].items():
                out[k] = out.get(k, 0) + v * w
        return {k: v for k, v in out.items() if v}


def reduce_complex(X: SparseComplex) -> Reduction:
    return Reduction(X)


def homology_of(X: SparseComplex, n):
    """Invariants of H_n, reducing first."""
    red = reduce_complex(X)
    _, pres = red.core.to_free_complex().homology_presentation(n)
    return pres.group()


def induced_map(red_src, red_dst, chain_cols, n):
    """Transport a chain map (sparse columns on original bases, degree n)
    to a map between the degree-n cores: pi_dst ∘ f ∘ iota_src."""
    out = []
    for j in range(red_src.core.rank(n)):
        v = red_src.include(n, {j: 1})
        w = {}
        for k, x in v.items():
            for i, y in chain_cols[k].items():
                w[i] = w.get(i, 0) + x * y
        out.append(red_dst.project(n, w))
    return out


def homology_map(red_src, red_dst, chain_cols, n):
    """FgAbMap on H_n induced by a degree-preserving chain map given on the
    original bases."""
    core_map = induced_map(red_src, red_dst, chain_cols, n)
    return core_homology_map(red_src.core, red_dst.core, core_map, n)


def core_homology_map(core_src, core_dst, core_map, n):
    """FgAbMap on H_n induced by a chain map given on the core bases."""
    A = core_src.to_free_complex()
    B = core_dst.to_free_complex()
    KA, PA = A.homology_presentation(n)
    KB, PB = B.homology_presentation(n)
    # image of each H_n(A) generator, as a cycle in B, solved against KB
    cols = []
    rank_b = B.rank(n)
    for j in range(PA.ngens):
        v = {}
        for i in range(A.rank(n)):
            if KA[i][j]:
                w = core_map[i]
                for k, x in w.items():
                    v[k] = v.get(k, 0) + KA[i][j] * x
        dense = [v.get(k, 0) for k in range(rank_b)]
        if PB.ngens == 0:
            cols.append([])
            continue
        sol = _solve_mod_boundaries(KB, PB, B, n, dense)
        cols.append(sol)
    matrix = [
        [cols[j][i] if cols[j] else 0 for j in range(PA.ngens)]
        for i in range(PB.ngens)
    ]
    return FgAbMap(PA, PB, matrix)


def _solve_mod_boundaries(KB, PB, B, n, dense):
    """Write a cycle as KB-combination modulo boundaries."""
    rank = B.rank(n)
    cols = [[KB[i][j] for i in range(rank)] for j in range(PB.ngens)]
    d = B.diff(n + 1)
    for k in range(B.rank(n + 1)):
        cols.append([d[i][k] for i in range(rank)])
    A = from_columns(cols, rank)
    sol = solve_int(A, dense)
    assert sol is not None, "image of a cycle is not a cycle"
    return sol[: PB.ngens]


def level_to_sparse(level) -> SparseComplex:
    """View a fixed-level complex (gmodules.LevelComplex) as a SparseComplex."""
    return SparseComplex(dict(level.ranks), dict(level.diffs))
