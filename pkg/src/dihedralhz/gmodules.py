"""Integer representations of D_2p and bounded chain complexes of them.

Modules carry the actions of the two generators xi and tau.  Internally an
action is either a signed permutation (the fast path: every module built by
the sphere models, tensor products and duals is of this kind) or a small
dense integer matrix.  Differentials are stored sparsely, one dict per
source basis vector.

Sign conventions, fixed once:
    tensor:  d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy
    dual:    (C^)_{-n} = C_n^*, d^(f) = -(-1)^{|f|} f∘d  (|f| = -n)
    hom:     Hom(C, D) := dual(C) ⊗ D
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import (
    from_columns,
    kernel_basis,
    mat_mul,
    identity,
    solve_int,
)
from .dihedral import GroupSpec, GroupElement, contains


class InvalidTwist(Exception):
    """Coset labeling does not define a group action."""


class NotEquivariant(Exception):
    """A differential fails to commute with the group action."""


# ---------------------------------------------------------------------------
# actions


@dataclass(frozen=True)
class SignedPerm:
    """g . e_k = signs[k] * e_perm[k]."""

    perm: tuple
    signs: tuple

    @staticmethod
    def identity_action(rank):
        return SignedPerm(tuple(range(rank)), (1,) * rank)

    @property
    def rank(self):
        return len(self.perm)

    def compose(self, other):
        """self after other."""
        p = tuple(self.perm[k] for k in other.perm)
        s = tuple(other.signs[k] * self.signs[other.perm[k]] for k in range(len(p)))
        return SignedPerm(p, s)

    def inverse(self):
        rank = self.rank
        inv = [0] * rank
        s = [1] * rank
        for k in range(rank):
            inv[self.perm[k]] = k
            s[self.perm[k]] = self.signs[k]
        return SignedPerm(tuple(inv), tuple(s))

    def power(self, n):
        out = SignedPerm.identity_action(self.rank)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = base.compose(out)
        return out

    def is_identity(self):
        return all(p == k for k, p in enumerate(self.perm)) and all(
            s == 1 for s in self.signs
        )

    def tensor(self, other):
        m = other.rank
        perm = []
        signs = []
        for i in range(self.rank):
            for j in range(m):
                perm.append(self.perm[i] * m + other.perm[j])
                signs.append(self.signs[i] * other.signs[j])
        return SignedPerm(tuple(perm), tuple(signs))

    def dual(self):
        # For orthogonal (signed permutation) actions the dual action has
        # the same permutation and signs.
        return self

    def apply_sparse(self, vec):
        """Apply to a sparse vector {index: coeff}."""
        return {self.perm[k]: self.signs[k] * c for k, c in vec.items()}

    def matrix(self):
        rank = self.rank
        M = [[0] * rank for _ in range(rank)]
        for k in range(rank):
            M[self.perm[k]][k] = self.signs[k]
        return M


def action_from_matrix(M):
    """Return a SignedPerm if M is a signed permutation matrix, else M."""
    rank = len(M)
    perm = [None] * rank
    signs = [1] * rank
    for k in range(rank):
        hits = [(i, M[i][k]) for i in range(rank) if M[i][k]]
        if len(hits) != 1 or abs(hits[0][1]) != 1:
            return [row[:] for row in M]
        perm[k] = hits[0][0]
        signs[k] = hits[0][1]
    if sorted(perm) != list(range(rank)):
        return [row[:] for row in M]
    return SignedPerm(tuple(perm), tuple(signs))


def _as_matrix(action):
    return action.matrix() if isinstance(action, SignedPerm) else action


def _compose(a, b):
    if isinstance(a, SignedPerm) and isinstance(b, SignedPerm):
        return a.compose(b)
    return mat_mul(_as_matrix(a), _as_matrix(b))


def _act_sparse(action, vec):
    if isinstance(action, SignedPerm):
        return action.apply_sparse(vec)
    out = {}
    M = action
    for k, c in vec.items():
        for i, m in enumerate(col(M, k)):
            if m:
                out[i] = out.get(i, 0) + c * m
    return {i: v for i, v in out.items() if v}


def col(M, k):
    return [row[k] for row in M]


def _is_identity(action, rank):
    if isinstance(action, SignedPerm):
        return action.is_identity()
    return action == identity(rank)


# ---------------------------------------------------------------------------
# modules


class GIntModule:
    """A free Z-module with a D_2p action given on the generators xi, tau."""

    def __init__(self, spec: GroupSpec, rank, xi, tau, check=True):
        self.spec = spec
        self.rank = rank
        self.xi = action_from_matrix(xi) if isinstance(xi, list) else xi
        self.tau = action_from_matrix(tau) if isinstance(tau, list) else tau
        if check:
            self._check()

    def _check(self):
        p = self.spec.p
        if isinstance(self.xi, SignedPerm):
            assert self.xi.rank == self.rank and self.tau.rank == self.rank
            if not self.xi.power(p).is_identity():
                raise ValueError("xi action does not have order dividing p")
            if not self.tau.compose(self.tau).is_identity():
                raise ValueError("tau action is not an involution")
            lhs = self.tau.compose(self.xi)
            rhs = self.xi.power(p - 1).compose(self.tau)
            if lhs != rhs:
                raise ValueError("dihedral relation fails")
        else:
            Mx, Mt = _as_matrix(self.xi), _as_matrix(self.tau)
            acc = identity(self.rank)
            for _ in range(p):
                acc = mat_mul(Mx, acc)
            if acc != identity(self.rank):
                raise ValueError("xi action does not have order dividing p")
            if mat_mul(Mt, Mt) != identity(self.rank):
                raise ValueError("tau action is not an involution")
            lhs = mat_mul(Mt, Mx)
            rhs = Mt
            for _ in range(p - 1):
                rhs = mat_mul(Mx, rhs)
            if lhs != rhs:
                raise ValueError("dihedral relation fails")

    def action_of(self, g: GroupElement):
        out = SignedPerm.identity_action(self.rank) if isinstance(
            self.xi, SignedPerm
        ) else identity(self.rank)
        for _ in range(g.j):
            out = _compose(self.tau, out)
        for _ in range(g.i):
            out = _compose(self.xi, out)
        # g = xi^i tau^j acts as xi-action^i ∘ tau-action^j
        return out

    def is_perm(self):
        return isinstance(self.xi, SignedPerm) and isinstance(self.tau, SignedPerm)

    def tensor(self, other):
        if self.is_perm() and other.is_perm():
            return GIntModule(
                self.spec,
                self.rank * other.rank,
                self.xi.tensor(other.xi),
                self.tau.tensor(other.tau),
                check=False,
            )
        Mx = _kron(_as_matrix(self.xi), _as_matrix(other.xi))
        Mt = _kron(_as_matrix(self.tau), _as_matrix(other.tau))
        return GIntModule(self.spec, self.rank * other.rank, Mx, Mt, check=False)

    def dual(self):
        if self.is_perm():
            return GIntModule(
                self.spec, self.rank, self.xi.dual(), self.tau.dual(), check=False
            )
        # dual action is inverse transpose
        Mx = _inverse_transpose(_as_matrix(self.xi))
        Mt = _inverse_transpose(_as_matrix(self.tau))
        return GIntModule(self.spec, self.rank, Mx, Mt, check=False)


def _kron(A, B):
    ra, rb = len(A), len(B)
    out = [[0] * (ra * rb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ra):
            if A[i][j]:
                for k in range(rb):
                    for l in range(rb):
                        if B[k][l]:
                            out[i * rb + k][j * rb + l] = A[i][j] * B[k][l]
    return out


def _inverse_transpose(M):
    n = len(M)
    cols = []
    T = [[M[j][i] for j in range(n)] for i in range(n)]
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        x = solve_int(T, e)
        assert x is not None, "action matrix is not invertible over Z"
        cols.append(x)
    return from_columns(cols, n)


def trivial_module(spec, rank=1):
    return GIntModule(
        spec,
        rank,
        SignedPerm.identity_action(rank),
        SignedPerm.identity_action(rank),
        check=False,
    )


def sign_module(spec):
    """The rank-1 module where xi acts by +1 and tau by -1."""
    return GIntModule(spec, 1, SignedPerm((0,), (1,)), SignedPerm((0,), (-1,)))


def regular_module(spec):
    return permutation_module(spec, "e", None)


def permutation_module(spec: GroupSpec, tag, twist=None):
    """Permutation module Z[G/S] where S is the standard subgroup for `tag`
    conjugated by `twist` (a GroupElement or None).

    Basis vectors are the left cosets g·S', S' = twist·S·twist^-1, in the
    order produced by enumerating canonical group elements.
    """
    sub = spec.subgroup_elements(tag)
    if twist is not None:
        if twist.spec != spec:
            raise InvalidTwist("twist element from a different group")
        t_inv = twist.inverse()
        sub = [twist * s * t_inv for s in sub]
    sub_set = set(sub)
    cosets = []
    seen = set()
    for g in spec.elements():
        if g in seen:
            continue
        coset = frozenset(g * s for s in sub_set)
        seen |= coset
        cosets.append((g, coset))
    index = {coset: k for k, (_, coset) in enumerate(cosets)}
    rank = len(cosets)

    def perm_of(x):
        perm = [0] * rank
        for k, (g, _) in enumerate(cosets):
            target = frozenset((x * g) * s for s in sub_set)
            if target not in index:
                raise InvalidTwist("labeling does not define a G-action")
            perm[k] = index[target]
        return SignedPerm(tuple(perm), (1,) * rank)

    return GIntModule(spec, rank, perm_of(spec.xi()), perm_of(spec.tau()))


# ---------------------------------------------------------------------------
# complexes


class GComplex:
    """Bounded complex of GIntModules with sparse equivariant differentials.

    diffs[n] is a list (over the basis of C_n) of {target_index: coeff}
    dicts describing d_n : C_n -> C_{n-1}.
    """

    def __init__(self, spec, modules, diffs, check=True):
        self.spec = spec
        self.modules = dict(modules)
        self.diffs = {n: [dict(c) for c in cols] for n, cols in diffs.items()}
        if check:
            self.verify()

    def rank(self, n):
        m = self.modules.get(n)
        return m.rank if m else 0

    def module(self, n):
        return self.modules.get(n)

    def degrees(self):
        return sorted(self.modules)

    def diff_cols(self, n):
        return self.diffs.get(n, [dict() for _ in range(self.rank(n))])

    def total_rank(self):
        return sum(m.rank for m in self.modules.values())

    def euler_characteristic(self):
        return sum((-1) ** n * m.rank for n, m in self.modules.items())

    def verify(self):
        for n, cols in self.diffs.items():
            if len(cols) != self.rank(n):
                raise ValueError(f"differential at {n} has wrong source rank")
            rk = self.rank(n - 1)
            for c in cols:
                for i in c:
                    if not 0 <= i < rk:
                        raise ValueError(f"differential at {n} hits bad index")
        self.verify_squares_zero()
        self.verify_equivariance()

    def verify_squares_zero(self):
        for n in self.degrees():
            cols_hi = self.diffs.get(n + 1)
            cols_lo = self.diffs.get(n)
            if not cols_hi or not cols_lo:
                continue
            for c in cols_hi:
                acc = {}
                for mid, v in c.items():
                    for low, w in cols_lo[mid].items():
                        acc[low] = acc.get(low, 0) + v * w
                if any(acc.values()):
                    raise ValueError(f"d∘d != 0 at degree {n + 1}")

    def verify_equivariance(self):
        for n, cols in self.diffs.items():
            src = self.module(n)
            dst = self.module(n - 1)
            if src is None or dst is None:
                if any(c for c in cols):
                    raise ValueError(f"differential at {n} into missing module")
                continue
            for gen_src, gen_dst in ((src.xi, dst.xi), (src.tau, dst.tau)):
                for k, c in enumerate(cols):
                    lhs = _act_sparse(gen_dst, c)
                    img = _act_sparse(gen_src, {k: 1})
                    rhs = {}
                    for k2, s in img.items():
                        for i, v in cols[k2].items():
                            rhs[i] = rhs.get(i, 0) + s * v
                    lhs = {i: v for i, v in lhs.items() if v}
                    rhs = {i: v for i, v in rhs.items() if v}
                    if lhs != rhs:
                        raise NotEquivariant(f"differential at degree {n}")


def point_complex(spec):
    """The one-point complex: Z (trivial action) in degree 0."""
    return GComplex(spec, {0: trivial_module(spec)}, {}, check=False)


def tensor_complex(C: GComplex, D: GComplex) -> GComplex:
    spec = C.spec
    degs_c = C.degrees()
    degs_d = D.degrees()
    blocks = {}
    modules = {}
    for k in degs_c:
        for l in degs_d:
            n = k + l
            if n not in blocks:
                blocks[n] = []
            blocks[n].append((k, l))
    offsets = {}
    for n, pairs in blocks.items():
        pairs.sort()
        off = 0
        mod = None
        for k, l in pairs:
            offsets[(k, l)] = off
            m = C.module(k).tensor(D.module(l))
            off += m.rank
            mod = m if mod is None else _direct_sum_module(mod, m)
        modules[n] = mod
    diffs = {}
    for n, pairs in blocks.items():
        if n - 1 not in blocks:
            continue
        cols = []
        for k, l in pairs:
            ck = C.diff_cols(k) if k - 1 in C.modules else None
            dl = D.diff_cols(l) if l - 1 in D.modules else None
            rank_d_l = D.rank(l)
            rank_d_l1 = D.rank(l - 1)
            for i in range(C.rank(k)):
                for j in range(rank_d_l):
                    colv = {}
                    if ck is not None:
                        base = offsets.get((k - 1, l))
                        if base is not None:
                            for i2, v in ck[i].items():
                                colv[base + i2 * rank_d_l + j] = v
                    if dl is not None:
                        base = offsets.get((k, l - 1))
                        if base is not None:
                            sign = -1 if k % 2 else 1
                            for j2, v in dl[j].items():
                                idx = base + i * rank_d_l1 + j2
                                colv[idx] = colv.get(idx, 0) + sign * v
                    cols.append({a: b for a, b in colv.items() if b})
        diffs[n] = cols
    return GComplex(spec, modules, diffs, check=False)


def _direct_sum_module(a: GIntModule, b: GIntModule):
    if a.is_perm() and b.is_perm():
        ra = a.rank
        perm_x = tuple(a.xi.perm) + tuple(p + ra for p in b.xi.perm)
        sign_x = tuple(a.xi.signs) + tuple(b.xi.signs)
        perm_t = tuple(a.tau.perm) + tuple(p + ra for p in b.tau.perm)
        sign_t = tuple(a.tau.signs) + tuple(b.tau.signs)
        return GIntModule(
            a.spec,
            a.rank + b.rank,
            SignedPerm(perm_x, sign_x),
            SignedPerm(perm_t, sign_t),
            check=False,
        )
    Ax, Bx = _as_matrix(a.xi), _as_matrix(b.xi)
    At, Bt = _as_matrix(a.tau), _as_matrix(b.tau)
    return GIntModule(
        a.spec,
        a.rank + b.rank,
        _block_diag(Ax, Bx),
        _block_diag(At, Bt),
        check=False,
    )


def _block_diag(A, B):
    n, m = len(A), len(B)
    out = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = A[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = B[i][j]
    return out


def dual_complex(C: GComplex) -> GComplex:
    """(C^)_{-n} = C_n^* with d^ = -(-1)^{|f|} (transpose)."""
    modules = {-n: C.module(n).dual() for n in C.degrees()}
    diffs = {}
    for n in C.degrees():
        if n + 1 not in C.modules:
            continue
        # d^ : (C^)_{-n} -> (C^)_{-n-1} is ± transpose of d_{n+1}
        sign = -1 if (-n) % 2 else 1
        sign = -sign  # -(-1)^{|f|}, |f| = -n
        cols = [dict() for _ in range(C.rank(n))]
        for j, c in enumerate(C.diff_cols(n + 1)):
            for i, v in c.items():
                cols[i][j] = sign * v
        diffs[-n] = cols
    return GComplex(C.spec, modules, diffs, check=False)


def hom_total_complex(C: GComplex, D: GComplex) -> GComplex:
    return tensor_complex(dual_complex(C), D)


# ---------------------------------------------------------------------------
# fixed points, restrictions, transfers


_GENERATORS = {
    "e": (),
    "C2": ("tau",),
    "Cp": ("xi",),
    "G": ("xi", "tau"),
}


class FixedBasis:
    """Basis of the L-fixed vectors of a module, as sparse vectors."""

    def __init__(self, vectors, orbit_of=None, rep_sign=None):
        self.vectors = vectors  # list of {index: coeff}
        # for permutation modules: orbit id of each module index, and the
        # coefficient the orbit sum has at that index (used for fast lookup)
        self.orbit_of = orbit_of
        self.rep_sign = rep_sign

    def __len__(self):
        return len(self.vectors)

    def coords_of(self, vec, matrix_cols=None):
        """Express an invariant sparse vector in this basis."""
        if self.orbit_of is not None:
            out = {}
            seen = set()
            for idx, v in vec.items():
                o = self.orbit_of.get(idx)
                if o is None:
                    if v:
                        raise ValueError("vector not in fixed submodule")
                    continue
                if o in seen:
                    continue
                seen.add(o)
                out[o] = v * self.rep_sign[idx]
            return {o: v for o, v in out.items() if v}
        # generic: solve against the dense basis matrix
        if not self.vectors:
            if any(vec.values()):
                raise ValueError("vector not in fixed submodule")
            return {}
        dim = 1 + max(max(v) for v in self.vectors if v)
        dim = max(dim, 1 + max(vec, default=0))
        cols = []
        for v in self.vectors:
            dense = [0] * dim
            for i, x in v.items():
                dense[i] = x
            cols.append(dense)
        A = from_columns(cols, dim)
        b = [0] * dim
        for i, x in vec.items():
            b[i] = x
        sol = solve_int(A, b)
        if sol is None:
            raise ValueError("vector not in fixed submodule")
        return {k: v for k, v in enumerate(sol) if v}


def fixed_basis(module: GIntModule, tag) -> FixedBasis:
    gens = _GENERATORS[tag]
    if not gens:
        vecs = [{k: 1} for k in range(module.rank)]
        return FixedBasis(
            vecs, orbit_of={k: k for k in range(module.rank)}, rep_sign=[1] * module.rank
        )
    actions = [getattr(module, g) for g in gens]
    if module.is_perm():
        rank = module.rank
        orbit_of = {}
        rep_sign = [0] * rank
        vectors = []
        for start in range(rank):
            if start in orbit_of:
                continue
            oid = len(vectors)
            sign = {start: 1}
            stack = [start]
            dead = False
            while stack:
                k = stack.pop()
                for act in actions:
                    k2 = act.perm[k]
                    s2 = sign[k] * act.signs[k]
                    if k2 in sign:
                        if sign[k2] != s2:
                            dead = True
                    else:
                        sign[k2] = s2
                        stack.append(k2)
            for k in sign:
                orbit_of[k] = oid if not dead else None
            if dead:
                for k in sign:
                    del orbit_of[k]
                continue
            for k, s in sign.items():
                rep_sign[k] = s
            vectors.append(dict(sign))
        # orbit ids must be consecutive: rebuild mapping
        return FixedBasis(vectors, orbit_of=orbit_of, rep_sign=rep_sign)
    # generic path: kernel of stacked (A_g - I)
    rank = module.rank
    stacked = []
    for act in actions:
        M = _as_matrix(act)
        for i in range(rank):
            stacked.append([M[i][j] - (1 if i == j else 0) for j in range(rank)])
    basis = kernel_basis(stacked) if stacked else []
    vecs = [{i: v for i, v in enumerate(b) if v} for b in basis]
    return FixedBasis(vecs)


class LevelComplex:
    """The L-fixed subcomplex of a GComplex, as a plain sparse complex."""

    def __init__(self, ranks, diffs, bases):
        self.ranks = ranks  # {degree: rank}
        self.diffs = diffs  # {degree: list of {i: coeff}}
        self.bases = bases  # {degree: FixedBasis}

    def total_rank(self):
        return sum(self.ranks.values())


def fixed_subcomplex(C: GComplex, tag) -> LevelComplex:
    bases = {n: fixed_basis(C.module(n), tag) for n in C.degrees()}
    ranks = {n: len(bases[n]) for n in C.degrees()}
    diffs = {}
    for n in C.degrees():
        if n - 1 not in C.modules:
            continue
        cols = C.diff_cols(n)
        src = bases[n]
        dst = bases[n - 1]
        out = []
        for v in src.vectors:
            acc = {}
            for k, s in v.items():
                for i, w in cols[k].items():
                    acc[i] = acc.get(i, 0) + s * w
            acc = {i: x for i, x in acc.items() if x}
            out.append(dst.coords_of(acc))
        diffs[n] = out
    return LevelComplex(ranks, diffs, bases)


def restriction_chain_map(big: LevelComplex, small: LevelComplex):
    """Inclusion of L-fixed vectors into K-fixed vectors, K ⊆ L, per degree."""
    out = {}
    for n, basis in big.bases.items():
        cols = []
        for v in basis.vectors:
            cols.append(small.bases[n].coords_of(v))
        out[n] = cols
    return out


def transfer_chain_map(C: GComplex, small: LevelComplex, big: LevelComplex,
                       small_tag, big_tag):
    """Coset-representative sum tr : C^K -> C^L for K ⊆ L."""
    spec = C.spec
    K = set(spec.subgroup_elements(small_tag))
    reps = []
    covered = set()
    for g in spec.subgroup_elements(big_tag):
        if g in covered:
            continue
        reps.append(g)
        covered |= {g * k for k in K}
    out = {}
    for n in C.degrees():
        module = C.module(n)
        actions = [module.action_of(g) for g in reps]
        cols = []
        for v in small.bases[n].vectors:
            acc = {}
            for act in actions:
                for i, x in _act_sparse(act, v).items():
                    acc[i] = acc.get(i, 0) + x
            acc = {i: x for i, x in acc.items() if x}
            cols.append(big.bases[n].coords_of(acc))
        out[n] = cols
    return out


def element_chain_map(C: GComplex, level: LevelComplex, g: GroupElement):
    """Action of g on the fixed subcomplex (g must normalize the subgroup)."""
    out = {}
    for n in C.degrees():
        act = C.module(n).action_of(g)
        cols = []
        for v in level.bases[n].vectors:
            cols.append(level.bases[n].coords_of(_act_sparse(act, v)))
        out[n] = cols
    return out
