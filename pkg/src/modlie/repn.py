"""Finite-dimensional modules over reduced enveloping algebras.

A module is a list of action matrices, one per Lie-algebra basis generator;
the constructor checks the bracket relations and the p-character equation
rho(x)^p - rho(x^[p]) = chi(x)^p Id on every generator, so an FdModule is
valid by construction.

Submodule machinery:
  * spin / submodule / quotient at the matrix level,
  * a chopper with Norton-certified irreducibility (random algebra elements,
    characteristic polynomial factors, kernel spins on both sides),
  * homomorphism spaces computed from a cyclic generator by the
    standard-basis method (and through the dual for arbitrary sources),
  * three radical algorithms: the Jacobson radical of the enveloping matrix
    algebra (characteristic-coefficient chain, self-certifying via a
    nilpotent-ideal check), kernels of all homomorphisms onto the simple
    constituents, and a brute-force submodule enumeration for small modules.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .config import (GuardExceeded, InvariantError, MEATAXE_TRIES, MODULE_DIM_GUARD,
                     RADICAL_ALGEBRA_DIM_GUARD, RADICAL_BRUTE_DIM_GUARD)
from .field import FieldElement, FieldSpec
from .linalg import (EchelonAccumulator, Subspace, fadd, fkernel, fmatmul, fneg, fpow,
                     frref, fscale, fsub, fcharpoly)
from .liealg import (Functional, Report, ReportCheck, RestrictedLieAlgebra,
                     SubalgebraDatum, centralizer, is_nilpotent_functional)
from .env import ReducedEnvAlgebra, reduced_env
from .polyring import Poly


class Weight:
    """An integral weight; kept as integers for dot-action arithmetic and
    reduced mod p when a module is built."""

    __slots__ = ("coords", "p")

    def __init__(self, coords, p):
        self.coords = tuple(int(v) for v in coords)
        self.p = p

    @property
    def reduced(self):
        return tuple(v % self.p for v in self.coords)

    def __eq__(self, other):
        return isinstance(other, Weight) and self.coords == other.coords and self.p == other.p

    def __hash__(self):
        return hash((self.coords, self.p))

    def __repr__(self):
        return f"Weight{self.coords}"


def _cartan_entry(n, s, i):
    """alpha_s(H_i) for sl_n, 1-based simple root labels."""
    if s == i:
        return 2
    if abs(s - i) == 1:
        return -1
    return 0


def dot_minus_w0(lam: Weight, s: int, n: int) -> Weight:
    """(-w0)(lam + rho) - rho in integer coordinates, with w0 = s_alpha the
    longest element of the rank-1 Levi attached to simple root s of sl_n."""
    rank = n - 1
    shifted = [lam.coords[i] + 1 for i in range(rank)]
    coeff = shifted[s - 1]
    reflected = [shifted[i] - coeff * _cartan_entry(n, s, i + 1) for i in range(rank)]
    out = [-reflected[i] - 1 for i in range(rank)]
    return Weight(out, lam.p)


class FdModule:
    """A U_chi(l)-module given by one action matrix per basis generator."""

    def __init__(self, parent: ReducedEnvAlgebra, action, label="", cyclic_vector=None,
                 weight=None, check=True):
        self.parent = parent
        self.algebra = parent.algebra
        self.chi = parent.chi
        self.field = parent.base
        if len(action) != self.algebra.N:
            raise ValueError("need one action matrix per basis generator")
        self.action = [np.asarray(a, dtype=np.int64) % self.field.p for a in action]
        dims = {a.shape for a in self.action}
        if len(dims) > 1 or any(a.ndim != 2 or a.shape[0] != a.shape[1] for a in self.action):
            raise ValueError("action matrices must be square of equal size")
        self.dim = self.action[0].shape[0] if self.action else 0
        if self.dim > MODULE_DIM_GUARD:
            raise GuardExceeded(f"module dimension {self.dim} exceeds guard {MODULE_DIM_GUARD}")
        self.label = label or f"module(dim {self.dim})"
        self.cyclic_vector = None if cyclic_vector is None else \
            np.asarray(cyclic_vector, dtype=np.int64) % self.field.p
        self.weight = weight
        if check:
            rep = self.verify()
            if not rep.ok:
                raise InvariantError(f"{self.label}: module axioms fail:\n{rep}")

    def verify(self) -> Report:
        """Bracket relations and the p-character equation on all generators."""
        alg = self.algebra
        spec = self.field
        p = spec.p
        checks = []
        ok, witness = True, None
        for i in range(alg.N):
            for j in range(alg.N):
                lhs = fsub(spec, fmatmul(spec, self.action[i], self.action[j]),
                           fmatmul(spec, self.action[j], self.action[i]))
                rhs = np.zeros_like(lhs)
                for m in np.nonzero(alg.C[i, j])[0]:
                    rhs = fadd(spec, rhs, fscale(spec, self.action[int(m)], int(alg.C[i, j, m])))
                if np.any(fsub(spec, lhs, rhs)):
                    ok, witness = False, f"[{alg.names[i]}, {alg.names[j]}]"
                    break
            if not ok:
                break
        checks.append(ReportCheck("bracket relations", ok, witness))
        ok, witness = True, None
        for i in range(alg.N):
            lhs = fpow(spec, self.action[i], p)
            for m in np.nonzero(alg.pbasis[i])[0]:
                lhs = fsub(spec, lhs, fscale(spec, self.action[int(m)], int(alg.pbasis[i][m])))
            chi_v = int(self.chi.coords[i]) % p  # chi(x)^p = chi(x) over GF(p)
            lhs = fsub(spec, lhs, (chi_v * np.eye(self.dim, dtype=np.int64)) % p)
            if np.any(lhs):
                ok, witness = False, alg.names[i]
                break
        checks.append(ReportCheck("p-character equation", ok, witness))
        return Report(checks)

    # -- basic constructions -------------------------------------------------------

    def act(self, i: int, vec: np.ndarray) -> np.ndarray:
        return fmatmul(self.field, self.action[i], vec.reshape(-1, 1))[:, 0]

    def direct_sum(self, other: "FdModule") -> "FdModule":
        if other.parent is not self.parent:
            raise ValueError("modules over different algebras")
        n, m = self.dim, other.dim
        action = []
        for a, b in zip(self.action, other.action):
            big = np.zeros((n + m, n + m), dtype=np.int64)
            big[:n, :n] = a
            big[n:, n:] = b
            action.append(big)
        return FdModule(self.parent, action, label=f"{self.label}(+){other.label}", check=False)

    def dual(self) -> "FdModule":
        """Contragredient module; the p-character flips sign."""
        chi_neg = Functional(self.algebra, self.chi.spec, fneg(self.chi.spec, self.chi.coords))
        parent = reduced_env(self.algebra, chi_neg)
        action = [fneg(self.field, a.T) for a in self.action]
        return FdModule(parent, action, label=f"{self.label}^*", check=False)

    def submodule(self, W: Subspace) -> "FdModule":
        gens = _submodule_gens(self.field, self.action, W)
        return FdModule(self.parent, gens, label=f"{self.label}|sub{W.dim}", check=False)

    def quotient(self, W: Subspace) -> "FdModule":
        gens = _quotient_gens(self.field, self.action, W)
        return FdModule(self.parent, gens, label=f"{self.label}/sub{W.dim}", check=False)

    def is_zero(self):
        return self.dim == 0

    def fingerprint(self):
        """Cheap iso-invariant prefilter: dimension and generator traces."""
        tr = tuple(int(np.trace(a) % self.field.p) for a in self.action)
        return (self.dim, tr)

    def to_json_dict(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "field": self.field.describe(),
            "chi": [int(v) for v in self.chi.coords],
            "generators": list(self.algebra.names),
            "action": [[[int(v) for v in row] for row in a] for a in self.action],
        }

    def __repr__(self):
        return f"FdModule({self.label}, dim {self.dim})"


def _submodule_gens(spec, action, W: Subspace):
    B = W.mat
    piv = list(W.pivots)
    out = []
    for G in action:
        img = fmatmul(spec, B, G.T)          # row i = G applied to basis row i
        out.append(img[:, piv].T.copy())     # coords via RREF pivots
    return out


def _quotient_gens(spec, action, W: Subspace):
    n = action[0].shape[0] if action else 0
    free = [c for c in range(n) if c not in W.pivots]
    out = []
    for G in action:
        mat = np.zeros((len(free), len(free)), dtype=np.int64)
        for j, fc in enumerate(free):
            col = G[:, fc].copy()
            red = W.reduce_vector(col)
            mat[:, j] = red[free]
        out.append(mat)
    return out


# -- spinning ------------------------------------------------------------


def spin_rows(spec, action, seed_rows) -> Subspace:
    n = action[0].shape[0] if action else 0
    acc = EchelonAccumulator(spec, n)
    acc.insert(np.atleast_2d(np.asarray(seed_rows, dtype=np.int64)))
    while True:
        before = acc.dim
        basis = acc.basis()
        if basis.size == 0:
            break
        for G in action:
            acc.insert(fmatmul(spec, basis, G.T))
        if acc.dim == before:
            break
    return Subspace.from_rows(spec, n, acc.basis())


def spin(M: FdModule, vectors) -> Subspace:
    """Smallest action-invariant subspace containing the given vectors."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if vecs.size == 0 or not np.any(vecs):
        return Subspace.zero(M.field, M.dim)
    return spin_rows(M.field, M.action, vecs)


# -- meataxe: chop into composition factors with certificates ---------------------------


class MeataxeError(Exception):
    pass


def _random_algebra_element(spec, action, rng):
    n = action[0].shape[0]
    p = spec.p
    out = (rng.randrange(p) * np.eye(n, dtype=np.int64)) % p
    for G in action:
        c = rng.randrange(p)
        if c:
            out = fadd(spec, out, fscale(spec, G, c))
    # a few quadratic words sharpen the spectrum
    for _ in range(2):
        i, j = rng.randrange(len(action)), rng.randrange(len(action))
        c = rng.randrange(p)
        if c:
            out = fadd(spec, out, fscale(spec, fmatmul(spec, action[i], action[j]), c))
    return out


def _try_split(spec, action, dim, rng):
    """Either a proper nonzero invariant subspace, or None for certified simple."""
    if dim == 1:
        return None
    for _ in range(MEATAXE_TRIES):
        theta = _random_algebra_element(spec, action, rng)
        cp = Poly(spec, fcharpoly(spec, theta))
        for f, _mult in cp.factor(random.Random(17)):
            fk = fkernel(spec, f.eval_matrix(theta))
            if fk.shape[0] == 0:
                continue
            for row in fk:
                W = spin_rows(spec, action, row)
                if 0 < W.dim < dim:
                    return W
            if fk.shape[0] == f.degree:
                # Norton: all kernel spins full; test one vector on the dual side
                tk = fkernel(spec, f.eval_matrix(theta.T))
                WT = spin_rows(spec, [g.T for g in action], tk[0])
                if WT.dim < dim:
                    P = fkernel(spec, WT.mat)  # perp of a dual submodule
                    W = Subspace.from_rows(spec, dim, P)
                    if 0 < W.dim < dim:
                        return W
                    raise MeataxeError("inconsistent dual split")
                return None
    raise MeataxeError(f"could not certify a module of dimension {dim}")


def chop(M: FdModule, seed=0):
    """Composition factors of M as certified-simple FdModules (with
    multiplicity, in discovery order)."""
    out = []
    rng = random.Random(seed)

    def rec(action, dim):
        if dim == 0:
            return
        W = _try_split(M.field, action, dim, rng)
        if W is None:
            out.append(FdModule(M.parent, action, label=f"{M.label}|factor", check=False))
            return
        rec(_submodule_gens(M.field, action, W), W.dim)
        rec(_quotient_gens(M.field, action, W), dim - W.dim)

    rec(M.action, M.dim)
    return out


# -- homomorphism spaces ------------------------------------------------------------


def _std_basis_relations(spec, action, seed):
    """Spin a cyclic generator, recording how each standard basis vector was
    produced (parent, generator) and all linear relations discovered."""
    n = action[0].shape[0]
    p = spec.p
    seed = np.asarray(seed, dtype=np.int64) % p
    if not np.any(seed):
        raise ValueError("zero seed")
    basis = [seed]
    words = [(-1, -1)]
    # echelon rows with their expressions in the standard basis
    rows = np.zeros((0, n), dtype=np.int64)
    trans = []  # python rows, length == len(basis) at insert time
    pivots = []

    def reduce_express(v):
        coeffs = np.zeros(len(basis), dtype=np.int64)
        v = v.copy()
        for r, c in enumerate(pivots):
            f = int(v[c])
            if f:
                if spec.k == 1:
                    v = (v - f * rows[r]) % p
                else:
                    v = spec.SUB[v, spec.MUL[f, rows[r]]]
                t = trans[r]
                for idx, tv in enumerate(t):
                    if tv:
                        if spec.k == 1:
                            coeffs[idx] = (coeffs[idx] + f * tv) % p
                        else:
                            coeffs[idx] = spec.ADD[coeffs[idx], spec.MUL[f, tv]]
        return v, coeffs

    def insert(v, expr):
        nz = np.nonzero(v)[0]
        c = int(nz[0])
        if spec.k == 1:
            inv = pow(int(v[c]), p - 2, p)
            vrow = (v * inv) % p
            trow = [(t * inv) % p for t in expr]
        else:
            inv = int(spec.INV[v[c]])
            vrow = spec.MUL[v, inv]
            trow = [int(spec.MUL[int(t), inv]) for t in expr]
        nonlocal rows
        for r in range(len(pivots)):
            f = int(rows[r, c])
            if f:
                if spec.k == 1:
                    rows[r] = (rows[r] - f * vrow) % p
                    for idx, tv in enumerate(trow):
                        if idx < len(trans[r]):
                            trans[r][idx] = (trans[r][idx] - f * tv) % p
                        elif tv:
                            trans[r].extend([0] * (idx - len(trans[r])) + [(-f * tv) % p])
                else:
                    rows[r] = spec.SUB[rows[r], spec.MUL[f, vrow]]
                    nf = int(spec.NEG[f])
                    for idx, tv in enumerate(trow):
                        contrib = int(spec.MUL[nf, int(tv)])
                        if idx < len(trans[r]):
                            trans[r][idx] = int(spec.ADD[trans[r][idx], contrib])
                        elif contrib:
                            trans[r].extend([0] * (idx - len(trans[r])) + [contrib])
        pos = int(np.searchsorted(np.array(pivots + [n]), c))
        rows = np.insert(rows, pos, vrow, axis=0)
        pivots.insert(pos, c)
        trans.insert(pos, list(trow))

    red0, _ = reduce_express(seed)
    insert(red0, [1])
    relations = []
    qi = 0
    while qi < len(basis):
        for gi, G in enumerate(action):
            w = fmatmul(spec, G, basis[qi].reshape(-1, 1))[:, 0]
            residual, coeffs = reduce_express(w)
            if np.any(residual):
                j = len(basis)
                basis.append(w)
                words.append((qi, gi))
                expr = [0] * (j + 1)
                for idx, cv in enumerate(coeffs):
                    expr[idx] = int((-cv) % p if spec.k == 1 else spec.NEG[cv])
                expr[j] = 1
                insert(residual, expr)
            else:
                relations.append((qi, gi, coeffs))
        qi += 1
    return basis, words, relations


def hom_space_cyclic(spec, src_action, src_seed, tgt_action):
    """Basis of {F : F rho_src(g) = rho_tgt(g) F} for a cyclic source.

    Returns matrices of shape (tgt_dim, src_dim); raises if the seed does not
    generate the source.
    """
    sdim = src_action[0].shape[0]
    tdim = tgt_action[0].shape[0]
    basis, words, relations = _std_basis_relations(spec, src_action, src_seed)
    if len(basis) < sdim:
        raise ValueError("seed vector does not generate the source module")
    U = [None] * sdim
    U[0] = np.eye(tdim, dtype=np.int64)
    for j in range(1, sdim):
        par, gi = words[j]
        U[j] = fmatmul(spec, tgt_action[gi], U[par])
    acc = EchelonAccumulator(spec, tdim)
    for (i, gi, coeffs) in relations:
        mat = fmatmul(spec, tgt_action[gi], U[i])
        for j, cv in enumerate(coeffs):
            if cv:
                mat = fsub(spec, mat, fscale(spec, U[j], int(cv)))
        if np.any(mat):
            acc.insert(mat)
        if acc.dim == tdim:
            return []
    K = fkernel(spec, acc.basis()) if acc.dim else np.eye(tdim, dtype=np.int64)
    Bmat = np.stack(basis, axis=1)  # columns = standard basis vectors
    R, piv = frref(spec, np.concatenate([Bmat, np.eye(sdim, dtype=np.int64)], axis=1))
    Binv = R[:, sdim:]
    homs = []
    for w in K:
        cols = np.stack([fmatmul(spec, U[j], w.reshape(-1, 1))[:, 0] for j in range(sdim)], axis=1)
        homs.append(fmatmul(spec, cols, Binv))
    return homs


def hom_space(M: FdModule, N: FdModule, seed=None):
    """Basis of Hom(M, N); M must be cyclic (Vermas carry their generator,
    certified simples are cyclic from any nonzero vector)."""
    if M.field != N.field:
        raise ValueError("modules over different fields")
    if seed is None:
        seed = M.cyclic_vector
    if seed is None:
        seed = np.zeros(M.dim, dtype=np.int64)
        seed[0] = 1
    return hom_space_cyclic(M.field, M.action, seed, N.action)


def hom_space_to_simple(M: FdModule, S: FdModule):
    """Hom(M, S) for arbitrary M and simple S, through the dual side."""
    src = [g.T.copy() for g in S.action]
    tgt = [g.T.copy() for g in M.action]
    seed = np.zeros(S.dim, dtype=np.int64)
    seed[0] = 1
    return [H.T.copy() for H in hom_space_cyclic(S.field, src, seed, tgt)]


def modules_isomorphic(A: FdModule, B: FdModule, both_simple=True) -> bool:
    if A.dim != B.dim:
        return False
    if A.fingerprint() != B.fingerprint():
        return False
    homs = hom_space_to_simple(A, B) if both_simple else hom_space(A, B)
    return len(homs) > 0


# -- radicals ------------------------------------------------------------


def _flatten(mats):
    return np.stack([m.reshape(-1) for m in mats], axis=0)


def _matrix_algebra_basis(spec, action, dim):
    """Echelon basis of the unital matrix algebra generated by the action."""
    width = dim * dim
    acc = EchelonAccumulator(spec, width)
    seedmats = [np.eye(dim, dtype=np.int64)] + [a.copy() for a in action]
    frontier = []
    for m in seedmats:
        if acc.insert(m.reshape(1, -1)):
            frontier.append(m)
    while frontier:
        new = []
        for b in frontier:
            for g in action:
                cand = fmatmul(spec, b, g)
                if acc.insert(cand.reshape(1, -1)):
                    new.append(cand)
        frontier = new
    return [row.reshape(dim, dim) for row in acc.basis()]


def _charcoeff_root(spec, mat, i):
    """phi_i = i-fold p-th root of the elementary symmetric function e_{p^i}
    of the eigenvalues, read off the characteristic polynomial."""
    n = mat.shape[0]
    k = spec.p ** i
    cp = fcharpoly(spec, mat)
    if k > n:
        return 0
    c = int(cp[n - k])
    sign = 1 if k % 2 == 0 else spec.p - 1
    v = (c * sign) % spec.p if spec.k == 1 else int(spec.MUL[c, sign])
    for _ in range(i):
        v = v if spec.k == 1 else int(spec.PROOT[v])
    return v


def _is_nilpotent_ideal(spec, action, mats, dim):
    if not mats:
        return True
    span = EchelonAccumulator(spec, dim * dim)
    span.insert(_flatten(mats))
    for b in mats:
        for g in action:
            if not span.contains(fmatmul(spec, g, b).reshape(-1)):
                return False
            if not span.contains(fmatmul(spec, b, g).reshape(-1)):
                return False
    cur = mats
    while cur:
        acc = EchelonAccumulator(spec, dim * dim)
        for a in cur:
            for b in mats:
                acc.insert(fmatmul(spec, a, b).reshape(1, -1))
        if acc.dim >= len(cur):
            return False
        cur = [row.reshape(dim, dim) for row in acc.basis()]
    return True


def radical_matrix_algebra(spec, action, dim):
    """Jacobson radical of the enveloping matrix algebra via the chain of
    characteristic-coefficient forms (trace first, then p-power coefficients
    with p-th roots); each stage is verified by a nilpotent-ideal check, so a
    returned answer is certified."""
    L = _matrix_algebra_basis(spec, action, dim)
    max_i = 0
    while spec.p ** (max_i + 1) <= dim:
        max_i += 1
    for i in range(0, max_i + 1):
        if not L:
            return []
        if _is_nilpotent_ideal(spec, action, L, dim):
            return L
        m = len(L)
        G = np.zeros((m, m), dtype=np.int64)
        for s in range(m):
            for t in range(m):
                G[s, t] = _charcoeff_root(spec, fmatmul(spec, L[s], L[t]), i)
        K = fkernel(spec, G.T)  # rows xi with sum_s xi_s G[s,t] = 0 for all t
        newL = []
        acc = EchelonAccumulator(spec, dim * dim)
        for xi in K:
            mat = np.zeros((dim, dim), dtype=np.int64)
            for s in range(m):
                if xi[s]:
                    mat = fadd(spec, mat, fscale(spec, L[s], int(xi[s])))
            if acc.insert(mat.reshape(1, -1)):
                newL.append(mat)
        L = [row.reshape(dim, dim) for row in acc.basis()]
    if _is_nilpotent_ideal(spec, action, L, dim):
        return L
    raise InvariantError("radical chain did not terminate in a nilpotent ideal")


def _radical_algebra_method(M: FdModule) -> Subspace:
    rad = radical_matrix_algebra(M.field, M.action, M.dim)
    if not rad:
        return Subspace.zero(M.field, M.dim)
    rows = np.concatenate([r.T for r in rad], axis=0)  # images of basis vectors
    return Subspace.from_rows(M.field, M.dim, rows)


def _simple_types(M: FdModule, seed=0):
    """Distinct iso-classes among the composition factors, discovery order."""
    leaves = chop(M, seed=seed)
    types = []
    for leaf in leaves:
        if not any(modules_isomorphic(leaf, t) for t in types):
            types.append(leaf)
    return types


def _radical_homs_method(M: FdModule, types=None) -> Subspace:
    """rad M = intersection of the kernels of all homomorphisms onto simple
    constituents."""
    if M.dim == 0:
        return Subspace.zero(M.field, M.dim)
    types = types if types is not None else _simple_types(M)
    inter = Subspace.full(M.field, M.dim)
    for S in types:
        for F in hom_space_to_simple(M, S):
            ker = Subspace.from_rows(M.field, M.dim, fkernel(M.field, F))
            inter = inter.intersect(ker)
    return inter


def _canonical_seeds(p, dim):
    for lead in range(dim):
        tail = dim - lead - 1
        for rest in itertools.product(range(p), repeat=tail):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = rest
            yield v


def _radical_bruteforce(M: FdModule) -> Subspace:
    """Oracle: spin every 1-dimensional subspace, close under sums, intersect
    the maximal proper submodules."""
    if M.field.k != 1:
        raise ValueError("brute-force radical runs over prime fields only")
    if M.dim > RADICAL_BRUTE_DIM_GUARD:
        raise GuardExceeded(f"brute force limited to dim <= {RADICAL_BRUTE_DIM_GUARD}")
    if M.dim == 0:
        return Subspace.zero(M.field, 0)
    subs = {}
    for seed in _canonical_seeds(M.field.p, M.dim):
        W = spin(M, seed)
        subs[W.mat.tobytes()] = W
    # close under sums
    changed = True
    while changed:
        changed = False
        items = list(subs.values())
        for a, b in itertools.combinations(items, 2):
            s = a.sum(b)
            key = s.mat.tobytes()
            if key not in subs:
                subs[key] = s
                changed = True
        if len(subs) > 20000:
            raise GuardExceeded("submodule lattice too large for the oracle")
    proper = [w for w in subs.values() if w.dim < M.dim]
    maximal = [w for w in proper
               if not any(o.dim > w.dim and o.contains(w) for o in proper)]
    rad = Subspace.full(M.field, M.dim)
    for w in maximal:
        rad = rad.intersect(w)
    if not proper:
        rad = Subspace.zero(M.field, M.dim)
    return rad


def radical(M: FdModule, method="auto") -> Subspace:
    """The intersection of all maximal submodules.

    method: 'algebra' (enveloping-algebra Jacobson radical; default for small
    modules), 'homs' (kernels of maps onto the simple constituents; default
    above the size guard), or 'bruteforce' (exhaustive oracle, dim <= 12).
    """
    if method == "auto":
        method = "algebra" if M.dim <= RADICAL_ALGEBRA_DIM_GUARD else "homs"
    if method == "algebra":
        return _radical_algebra_method(M)
    if method == "homs":
        return _radical_homs_method(M)
    if method == "bruteforce":
        return _radical_bruteforce(M)
    raise ValueError(f"unknown radical method {method!r}")


# -- composition series and simple quotients ------------------------------------------------


class CompositionSeries:
    """Multiset of (dim, iso-class id) plus representative simples."""

    def __init__(self, factors, representatives, layers):
        self.factors = factors
        self.representatives = representatives
        self.layers = layers

    @property
    def multiset(self):
        return sorted(self.factors)

    def dims(self):
        return sorted(d for d, _ in self.factors)

    def __repr__(self):
        return f"CompositionSeries({self.multiset})"


def _isotypic_multiplicity(S: FdModule, layer: FdModule) -> int:
    if layer.dim == 0:
        return 0
    seed = np.zeros(S.dim, dtype=np.int64)
    seed[0] = 1
    homs = hom_space_cyclic(S.field, S.action, seed, layer.action)
    if not homs:
        return 0
    endos = hom_space_cyclic(S.field, S.action, seed, S.action)
    if len(homs) % len(endos):
        raise InvariantError("isotypic multiplicity is not integral")
    return len(homs) // len(endos)


def composition_factors(M: FdModule, seed=0) -> CompositionSeries:
    """Iterated radical series with semisimple layers split isotypically;
    iso-classes are identified by nonzero homomorphisms."""
    types = _simple_types(M, seed=seed)
    factors = []
    layers = []
    cur = M
    while cur.dim > 0:
        # the factor types of any submodule are among those of M, so the hom
        # method can reuse the discovered list at every layer
        R = _radical_homs_method(cur, types=types)
        layer = cur.quotient(R)
        layer_dims = []
        for tid, S in enumerate(types):
            mult = _isotypic_multiplicity(S, layer)
            factors.extend([(S.dim, tid)] * mult)
            layer_dims.extend([(S.dim, tid)] * mult)
        if sum(d for d, _ in layer_dims) != layer.dim:
            raise InvariantError("semisimple layer did not split into known types")
        layers.append(layer_dims)
        cur = cur.submodule(R)
    if sum(d for d, _ in factors) != M.dim:
        raise InvariantError("composition factor dimensions do not sum to dim M")
    return CompositionSeries(factors, types, layers)


def simple_quotients(M: FdModule, seed=0):
    """The simple summands of M / rad M, with multiplicity."""
    types = _simple_types(M, seed=seed)
    R = _radical_homs_method(M, types=types)
    head = M.quotient(R)
    out = []
    for S in types:
        mult = _isotypic_multiplicity(S, head)
        out.extend([S] * mult)
    if sum(s.dim for s in out) != head.dim:
        raise InvariantError("head did not decompose into known simple types")
    return out


# -- induced modules ------------------------------------------------------------


def character_module(b: SubalgebraDatum, lam: Weight) -> FdModule:
    """The one-dimensional u(b)-module attached to an integral weight; b must
    be spanned by Cartan and positive-root basis vectors (a standard Borel)."""
    sub = _sub_algebra(b)
    g = b.parent
    p = g.base.p
    acts = []
    idxs = b.coordinate_indices()
    if idxs is None:
        raise ValueError("character modules need a coordinate Borel")
    red = lam.reduced
    for idx in idxs:
        kind = g.basis_kinds[idx]
        if kind[0] == "cartan":
            acts.append(np.array([[red[kind[1]]]], dtype=np.int64))
        elif kind[0] == "pos":
            acts.append(np.zeros((1, 1), dtype=np.int64))
        else:
            raise ValueError("weight characters need a Borel without negative roots")
    parent = reduced_env(sub)
    return FdModule(parent, acts, label=f"K{lam.coords}", weight=lam,
                    cyclic_vector=np.array([1], dtype=np.int64))


def _sub_algebra(p_sub: SubalgebraDatum) -> RestrictedLieAlgebra:
    cached = getattr(p_sub, "_algebra", None)
    if cached is None:
        cached = p_sub._algebra = p_sub.as_algebra()
    return cached


def induce(g: RestrictedLieAlgebra, p_sub: SubalgebraDatum, chi: Functional,
           M: FdModule) -> FdModule:
    """Free induction from a coordinate subalgebra: the result has basis
    (PBW monomials in a complement) x (basis of M) and dimension
    p^codim * dim M.  Needs chi vanishing on the subalgebra."""
    idxs = p_sub.coordinate_indices()
    if idxs is None:
        raise ValueError("induction requires a subalgebra spanned by basis vectors")
    if not chi.restrict_is_zero(p_sub):
        raise ValueError("chi must vanish on the subalgebra")
    sub = _sub_algebra(p_sub)
    if M.algebra is not sub:
        raise ValueError("module is not over this subalgebra")
    rep = M.verify()
    if not rep.ok:
        raise InvariantError(f"input module fails its axioms:\n{rep}")
    p = g.base.p
    comp = [i for i in range(g.N) if i not in set(idxs)]
    order = tuple(comp) + tuple(sorted(idxs))
    env = reduced_env(g, chi, order=order)
    nc = len(comp)
    if p ** nc * M.dim > MODULE_DIM_GUARD:
        raise GuardExceeded(f"induced dimension {p**nc * M.dim} exceeds guard")
    cmonos = list(itertools.product(range(p), repeat=nc))
    cindex = {m: i for i, m in enumerate(cmonos)}
    dim = len(cmonos) * M.dim
    sorted_idxs = sorted(idxs)
    sub_pos = {idx: s for s, idx in enumerate(sorted_idxs)}

    rest_cache = {}

    def rest_operator(wrest):
        op = rest_cache.get(wrest)
        if op is not None:
            return op
        spec = M.field
        op = np.eye(M.dim, dtype=np.int64)
        for pos, a in enumerate(wrest):
            if a:
                gen_mat = M.action[sub_pos[sorted_idxs[pos]]]
                op = fmatmul(spec, op, fpow(spec, gen_mat, a))
        rest_cache[wrest] = op
        return op

    action = []
    for gi in range(g.N):
        A = np.zeros((dim, dim), dtype=np.int64)
        gen_elt = env.generator(gi)
        for cm in cmonos:
            src = cindex[cm]
            full = cm + (0,) * (g.N - nc)
            prod = env.multiply(gen_elt, env.monomial(full))
            for w, coeff in prod.terms.items():
                wc, wrest = w[:nc], w[nc:]
                tgt = cindex[wc]
                block = fscale(M.field, rest_operator(wrest), coeff)
                A[tgt * M.dim:(tgt + 1) * M.dim, src * M.dim:(src + 1) * M.dim] = fadd(
                    M.field, A[tgt * M.dim:(tgt + 1) * M.dim, src * M.dim:(src + 1) * M.dim],
                    block)
            # columns for the other M-basis vectors share the env expansion;
            # handled by the block structure above
        action.append(A)

    cyc = None
    if M.cyclic_vector is not None:
        cyc = np.zeros(dim, dtype=np.int64)
        cyc[:M.dim] = M.cyclic_vector
    parent = reduced_env(g, chi)
    return FdModule(parent, action, label=f"Ind({M.label})", cyclic_vector=cyc,
                    weight=M.weight)


def baby_verma(g: RestrictedLieAlgebra, b: SubalgebraDatum, chi: Functional,
               lam) -> FdModule:
    """Z_{chi,b}(lam) = induction of the weight character from a standard
    Borel; dimension p^(number of positive roots)."""
    lam = lam if isinstance(lam, Weight) else Weight(lam, g.base.p)
    if not chi.restrict_is_zero(b):
        raise ValueError("baby Verma modules need chi|_b = 0")
    K = character_module(b, lam)
    Z = induce(g, b, chi, K)
    Z.label = f"Z(chi,{lam.coords})" if not chi.is_zero() else f"Z(0,{lam.coords})"
    Z.weight = lam
    return Z


def _levi_simple_root(p_sub: SubalgebraDatum):
    g = p_sub.parent
    idxs = p_sub.coordinate_indices()
    if idxs is None:
        raise ValueError("parabolic must be spanned by basis vectors")
    negs = [g.basis_kinds[i] for i in idxs if g.basis_kinds[i][0] == "neg"]
    if len(negs) != 1:
        raise ValueError(f"Levi rank {len(negs)} != 1")
    r, c = negs[0][1]
    if r != c + 1:
        raise ValueError("Levi is not generated by a simple root")
    return c + 1  # 1-based simple root label


def levi_dual_weyl(p_sub: SubalgebraDatum, lam) -> FdModule:
    """The simple module of a rank-1 Levi with highest weight lam, nilradical
    acting by zero: the dual of the rank-1 induced module per the parabolic
    global-sections identity, normalised so the highest weight is lam itself.
    Valid for <lam, alpha^> in [0, p-1), where the module is simple of
    dimension <lam, alpha^> + 1."""
    g = p_sub.parent
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("levi modules require an sl_n parabolic")
    p = g.base.p
    lam = lam if isinstance(lam, Weight) else Weight(lam, p)
    s = _levi_simple_root(p_sub)
    m = lam.reduced[s - 1]
    if not (0 <= m < p - 1):
        raise ValueError(f"<lam, alpha^> = {m} outside [0, {p - 1})")
    dim = m + 1
    sub = _sub_algebra(p_sub)
    idxs = p_sub.coordinate_indices()
    acts = []
    for idx in idxs:
        kind = g.basis_kinds[idx]
        mat = np.zeros((dim, dim), dtype=np.int64)
        if kind[0] == "neg":
            for j in range(m):
                mat[j + 1, j] = 1
        elif kind[0] == "pos" and kind[1] == (s - 1, s):
            for j in range(1, m + 1):
                mat[j - 1, j] = (j * (m - j + 1)) % p
        elif kind[0] == "cartan":
            i = kind[1] + 1
            for j in range(dim):
                mat[j, j] = (lam.reduced[i - 1] - j * _cartan_entry(n, s, i)) % p
        acts.append(mat)
    parent = reduced_env(sub)
    cyc = np.zeros(dim, dtype=np.int64)
    cyc[0] = 1
    return FdModule(parent, acts, label=f"LeviV({lam.coords};a{s})", weight=lam,
                    cyclic_vector=cyc)


# -- paper-level audits ------------------------------------------------------------


class KwReport:
    def __init__(self, orbit_dim, divisor, factor_dims, ok):
        self.orbit_dim = orbit_dim
        self.divisor = divisor
        self.factor_dims = factor_dims
        self.ok = ok

    def __repr__(self):
        return (f"KwReport(orbit_dim={self.orbit_dim}, divisor={self.divisor}, "
                f"factors={self.factor_dims}, ok={self.ok})")


def kw_check(M: FdModule, chi: Functional, g: RestrictedLieAlgebra,
             series: CompositionSeries | None = None) -> KwReport:
    """Divisibility audit: p to the half coadjoint-orbit dimension must divide
    every composition-factor dimension."""
    if not is_nilpotent_functional(chi):
        raise ValueError("kw_check needs a nilpotent functional")
    orbit = g.N - centralizer(chi).dim
    if orbit % 2:
        raise InvariantError(f"coadjoint orbit dimension {orbit} is odd")
    divisor = g.base.p ** (orbit // 2)
    series = series or composition_factors(M)
    dims = series.dims()
    ok = all(d % divisor == 0 for d in dims)
    return KwReport(orbit, divisor, dims, ok)


class DeformationReport:
    def __init__(self, dim, chi_factors, zero_factors):
        self.dim = dim
        self.chi_factors = chi_factors
        self.zero_factors = zero_factors

    @property
    def totals_match(self):
        return sum(self.chi_factors) == sum(self.zero_factors) == self.dim

    def __repr__(self):
        return (f"DeformationReport(dim={self.dim}, chi={self.chi_factors}, "
                f"zero={self.zero_factors})")


def compare_deformation(g: RestrictedLieAlgebra, b: SubalgebraDatum, lam,
                        chi: Functional) -> DeformationReport:
    """Baby Verma for chi and for the restricted structure on the same
    underlying space; their composition-factor dimensions total identically."""
    Zc = baby_verma(g, b, chi, lam)
    Z0 = baby_verma(g, b, g.zero_functional(), lam)
    if Zc.dim != Z0.dim:
        raise InvariantError("deformation changed the underlying dimension")
    fc = composition_factors(Zc).dims()
    f0 = composition_factors(Z0).dims()
    return DeformationReport(Zc.dim, fc, f0)
