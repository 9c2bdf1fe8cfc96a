"""Reduced enveloping algebras with PBW straightening.

U_chi(l) has basis the ordered monomials x_1^{a_1} ... x_N^{a_N} with
exponents below p; multiplication rewrites out-of-order adjacent generator
pairs with the bracket and collapses saturated powers with
x^p = x^[p] + chi(x)^p.  Rewriting terminates because every step either
drops total degree or moves a factor towards its slot, and the results of
(monomial, generator) products are cached on the algebra.

The PBW order is the algebra's basis order (for the classical construction:
negative root vectors, Cartan, positive), so induced-module bases are
leading segments; a permuted order can be requested per instance.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .config import BLOCKS_FULL_GUARD, GuardExceeded, PRIMITIVES_DIM_GUARD
from .field import FieldElement
from .linalg import Subspace, fkernel, frref
from .liealg import Functional, LieElement, Report, ReportCheck, RestrictedLieAlgebra, p_power
from .extension import CentralExtensionAlgebra, nielsen, nielsen_system


def reduced_env(algebra: RestrictedLieAlgebra, chi: Functional | None = None,
                order=None) -> "ReducedEnvAlgebra":
    """Shared ReducedEnvAlgebra per (algebra, chi, order); sharing keeps
    straightening caches warm and makes element equality work across calls."""
    chi = chi if chi is not None else algebra.zero_functional()
    key = (chi.coords.tobytes(), tuple(order) if order is not None else None)
    cache = getattr(algebra, "_env_cache", None)
    if cache is None:
        cache = algebra._env_cache = {}
    inst = cache.get(key)
    if inst is None:
        inst = ReducedEnvAlgebra(algebra, chi, order)
        cache[key] = inst
    return inst


def _acc(target: dict, source: dict, factor: int, p: int):
    if factor % p == 0:
        return
    for m, c in source.items():
        v = (target.get(m, 0) + c * factor) % p
        if v:
            target[m] = v
        elif m in target:
            del target[m]


class ReducedEnvAlgebra:
    """U_chi of a restricted Lie algebra, for chi with values in GF(p)."""

    def __init__(self, algebra: RestrictedLieAlgebra, chi: Functional | None = None,
                 order=None):
        self.algebra = algebra
        self.base = algebra.base
        self.p = algebra.base.p
        self.N = algebra.N
        if chi is None:
            chi = algebra.zero_functional()
        if chi.parent is not algebra:
            raise ValueError("chi lives on a different algebra")
        if chi.spec.k != 1:
            raise ValueError("chi must take values in GF(p)")
        self.chi = chi
        self.order = tuple(order) if order is not None else tuple(range(self.N))
        if sorted(self.order) != list(range(self.N)):
            raise ValueError("order must be a permutation of the basis indices")
        self.pos_of = [0] * self.N
        for pos, idx in enumerate(self.order):
            self.pos_of[idx] = pos
        self._zero_mono = (0,) * self.N
        self._gen_cache: dict = {}

    # -- element factories ---------------------------------------------------------

    @property
    def dim(self):
        return self.p ** self.N

    def zero(self) -> "EnvElement":
        return EnvElement(self, {})

    def one(self) -> "EnvElement":
        return EnvElement(self, {self._zero_mono: 1})

    def monomial(self, mono) -> "EnvElement":
        mono = tuple(int(a) for a in mono)
        if len(mono) != self.N or any(a < 0 or a >= self.p for a in mono):
            raise ValueError("exponent vector out of range")
        return EnvElement(self, {mono: 1})

    def generator(self, index: int) -> "EnvElement":
        mono = [0] * self.N
        mono[self.pos_of[index]] = 1
        return EnvElement(self, {tuple(mono): 1})

    def gen(self, name: str) -> "EnvElement":
        return self.generator(self.algebra.index_of(name))

    def from_lie(self, x: LieElement) -> "EnvElement":
        if x.parent is not self.algebra:
            raise ValueError("element of a different algebra")
        if x.spec.k != 1:
            raise ValueError("enveloping elements need prime-field coefficients")
        terms = {}
        for i in x.support():
            mono = [0] * self.N
            mono[self.pos_of[i]] = 1
            terms[tuple(mono)] = int(x.coords[i])
        return EnvElement(self, terms)

    def monomials(self):
        """All p^N exponent vectors, last position fastest; deterministic."""
        if self.dim > max(PRIMITIVES_DIM_GUARD, BLOCKS_FULL_GUARD):
            raise GuardExceeded(f"basis of dimension {self.dim} exceeds guards")
        return list(itertools.product(range(self.p), repeat=self.N))

    # -- straightening core ---------------------------------------------------------

    def _mono_times_gen(self, m: tuple, t: int) -> dict:
        """Product (PBW monomial) * (generator at order position t)."""
        key = (m, t)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        p = self.p
        j = -1
        for pos in range(self.N - 1, t, -1):
            if m[pos]:
                j = pos
                break
        if j < 0:
            a = m[t]
            if a + 1 < p:
                res = {m[:t] + (a + 1,) + m[t + 1:]: 1}
            else:
                # saturated power: x^p = x^[p] + chi(x)^p (chi(x)^p = chi(x) in GF(p))
                m0 = m[:t] + (0,) + m[t + 1:]
                idx = self.order[t]
                res = {}
                chi_v = int(self.chi.coords[idx])
                if chi_v:
                    res[m0] = chi_v
                pr = self.algebra.pbasis[idx]
                base = {m0: 1}
                for s in np.nonzero(pr)[0]:
                    _acc(res, self._elt_times_gen(base, self.pos_of[int(s)]), int(pr[s]), p)
        else:
            m1 = m[:j] + (m[j] - 1,) + m[j + 1:]
            res = self._elt_times_gen(self._mono_times_gen(m1, t), j)
            br = self.algebra.C[self.order[j], self.order[t]]
            if np.any(br):
                base = {m1: 1}
                for s in np.nonzero(br)[0]:
                    _acc(res, self._elt_times_gen(base, self.pos_of[int(s)]), int(br[s]), p)
        self._gen_cache[key] = res
        return res

    def _elt_times_gen(self, terms: dict, t: int) -> dict:
        out: dict = {}
        for m, c in terms.items():
            _acc(out, self._mono_times_gen(m, t), c, self.p)
        return out

    def mono_mul(self, m1: tuple, m2: tuple) -> dict:
        cur = {m1: 1}
        for pos in range(self.N):
            for _ in range(m2[pos]):
                cur = self._elt_times_gen(cur, pos)
        return cur

    def multiply(self, u: "EnvElement", v: "EnvElement") -> "EnvElement":
        if u.parent is not self or v.parent is not self:
            raise ValueError("elements of different enveloping algebras")
        out: dict = {}
        for m2, c2 in v.terms.items():
            cur = u.terms
            for pos in range(self.N):
                for _ in range(m2[pos]):
                    cur = self._elt_times_gen(cur, pos)
            _acc(out, cur, c2, self.p)
        return EnvElement(self, out)

    def power(self, u: "EnvElement", e: int) -> "EnvElement":
        out = self.one()
        for _ in range(e):
            out = self.multiply(out, u)
        return out

    def __repr__(self):
        tag = "u" if self.chi.is_zero() else "U_chi"
        return f"{tag}({self.algebra.name}) dim {self.p}^{self.N}"


class EnvElement:
    """Sparse sum of PBW monomials with GF(p) coefficients."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: ReducedEnvAlgebra, terms: dict):
        self.parent = parent
        self.terms = {m: c % parent.p for m, c in terms.items() if c % parent.p}

    def _check(self, other):
        if self.parent is not other.parent:
            raise ValueError("elements of different enveloping algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        _acc(out, other.terms, 1, self.parent.p)
        return EnvElement(self.parent, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        _acc(out, other.terms, self.parent.p - 1, self.parent.p)
        return EnvElement(self.parent, out)

    def __neg__(self):
        return EnvElement(self.parent, {m: -c % self.parent.p for m, c in self.terms.items()})

    def scale(self, s: int):
        s = s.idx if isinstance(s, FieldElement) else int(s) % self.parent.p
        return EnvElement(self.parent, {m: (c * s) % self.parent.p for m, c in self.terms.items()})

    def __mul__(self, other):
        return self.parent.multiply(self, other)

    def pow(self, e: int):
        return self.parent.power(self, e)

    def is_zero(self):
        return not self.terms

    def commutator(self, other):
        return self * other - other * self

    def coefficient(self, mono) -> FieldElement:
        return FieldElement(self.parent.base, self.terms.get(tuple(mono), 0))

    def coefficients(self):
        return {m: FieldElement(self.parent.base, c) for m, c in self.terms.items()}

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def __eq__(self, other):
        return (isinstance(other, EnvElement) and self.parent is other.parent
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.parent), tuple(sorted(self.terms.items()))))

    def canonical_str(self) -> str:
        """Sorted-monomial text form used by golden tests."""
        if not self.terms:
            return "0"
        A = self.parent
        pieces = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            factors = []
            for pos, a in enumerate(mono):
                if not a:
                    continue
                nm = A.algebra.names[A.order[pos]]
                factors.append(nm if a == 1 else f"{nm}^{a}")
            body = "*".join(factors) if factors else "1"
            if c != 1 or not factors:
                body = f"{c}*{body}" if factors else str(c)
            pieces.append(body)
        return " + ".join(pieces)

    def __repr__(self):
        return self.canonical_str()


def straighten_multiply(u: EnvElement, v: EnvElement) -> EnvElement:
    return u * v


# -- Hopf structure on u(l) ------------------------------------------------------------


class TensorSquareElement:
    """Element of u(l) (x) u(l): sparse dict keyed by monomial pairs."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: ReducedEnvAlgebra, terms: dict):
        self.parent = parent
        self.terms = {k: c % parent.p for k, c in terms.items() if c % parent.p}

    def __add__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms, 1, self.parent.p)
        return TensorSquareElement(self.parent, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms, self.parent.p - 1, self.parent.p)
        return TensorSquareElement(self.parent, out)

    def __mul__(self, other):
        A = self.parent
        out: dict = {}
        for (a1, a2), c in self.terms.items():
            for (b1, b2), d in other.terms.items():
                left = A.mono_mul(a1, b1)
                right = A.mono_mul(a2, b2)
                cd = (c * d) % A.p
                for m1, c1 in left.items():
                    for m2, c2 in right.items():
                        v = (out.get((m1, m2), 0) + cd * c1 * c2) % A.p
                        if v:
                            out[(m1, m2)] = v
                        elif (m1, m2) in out:
                            del out[(m1, m2)]
        return TensorSquareElement(A, out)

    def apply_counit_left(self) -> EnvElement:
        """(eps (x) id): keep terms whose left factor is 1."""
        zero = self.parent._zero_mono
        return EnvElement(self.parent,
                          {m2: c for (m1, m2), c in self.terms.items() if m1 == zero})

    def apply_counit_right(self) -> EnvElement:
        zero = self.parent._zero_mono
        return EnvElement(self.parent,
                          {m1: c for (m1, m2), c in self.terms.items() if m2 == zero})

    def __eq__(self, other):
        return (isinstance(other, TensorSquareElement) and self.parent is other.parent
                and self.terms == other.terms)

    def __repr__(self):
        return f"TensorSquareElement({len(self.terms)} terms)"


def _coproduct_mono(A: ReducedEnvAlgebra, m: tuple, coeff: int) -> dict:
    """Coproduct of one PBW monomial: per-generator binomial expansion; both
    tensor legs stay in PBW order, so no straightening is needed."""
    p = A.p
    terms = {(A._zero_mono, A._zero_mono): coeff}
    for pos in range(A.N):
        a = m[pos]
        if not a:
            continue
        new: dict = {}
        for (m1, m2), c in terms.items():
            for i in range(a + 1):
                co = (c * comb(a, i)) % p
                if not co:
                    continue
                k1 = m1[:pos] + (i,) + m1[pos + 1:]
                k2 = m2[:pos] + (a - i,) + m2[pos + 1:]
                v = (new.get((k1, k2), 0) + co) % p
                if v:
                    new[(k1, k2)] = v
                elif (k1, k2) in new:
                    del new[(k1, k2)]
        terms = new
    return terms


def coproduct(u: EnvElement) -> TensorSquareElement:
    """Delta with all generators primitive; defined on u(l) only (chi = 0)."""
    A = u.parent
    if not A.chi.is_zero():
        raise ValueError("coproduct requires chi = 0 (restricted enveloping algebra)")
    out: dict = {}
    for m, c in u.terms.items():
        _acc(out, _coproduct_mono(A, m, c), 1, A.p)
    return TensorSquareElement(A, out)


def counit(u: EnvElement) -> FieldElement:
    return FieldElement(u.parent.base, u.terms.get(u.parent._zero_mono, 0))


class PrimitivesResult:
    """Primitive elements of u(l): kernel of u -> Delta(u) - u(x)1 - 1(x)u."""

    def __init__(self, algebra_env, subspace, monomials):
        self.env = algebra_env
        self.subspace = subspace
        self.monomials = monomials

    @property
    def dim(self):
        return self.subspace.dim

    def basis_elements(self):
        out = []
        for row in self.subspace.mat:
            terms = {self.monomials[i]: int(v) for i, v in enumerate(row) if v}
            out.append(EnvElement(self.env, terms))
        return out

    def spans_generators(self) -> bool:
        """True iff the primitives are exactly the span of the degree-one
        monomials (the embedded Lie algebra)."""
        if self.dim != self.env.N:
            return False
        for i in range(self.env.N):
            vec = np.zeros(len(self.monomials), dtype=np.int64)
            mono = [0] * self.env.N
            mono[self.env.pos_of[i]] = 1
            vec[self.monomials.index(tuple(mono))] = 1
            if not self.subspace.contains_vector(vec):
                return False
        return True


def primitives(A: ReducedEnvAlgebra) -> PrimitivesResult:
    if not A.chi.is_zero():
        raise ValueError("primitives are computed in u(l); chi must be 0")
    if A.dim > PRIMITIVES_DIM_GUARD:
        raise GuardExceeded(f"dim {A.dim} > primitives guard {PRIMITIVES_DIM_GUARD}")
    monos = A.monomials()
    zero = A._zero_mono
    rows: dict = {}
    entries = []
    for col, m in enumerate(monos):
        dm = _coproduct_mono(A, m, 1)
        v = (dm.get((m, zero), 0) - 1) % A.p
        if v:
            dm[(m, zero)] = v
        elif (m, zero) in dm:
            del dm[(m, zero)]
        v = (dm.get((zero, m), 0) - 1) % A.p
        if v:
            dm[(zero, m)] = v
        elif (zero, m) in dm:
            del dm[(zero, m)]
        for key, c in dm.items():
            row = rows.setdefault(key, len(rows))
            entries.append((row, col, c))
    M = np.zeros((len(rows), len(monos)), dtype=np.int64)
    for r, c, v in entries:
        M[r, c] = v
    K = fkernel(A.base, M)
    return PrimitivesResult(A, Subspace.from_rows(A.base, len(monos), K), monos)


# -- block decomposition of u(l_chi) ------------------------------------------------------------


class BlockReport:
    __slots__ = ("eta", "dim", "relations_ok", "embedding")

    def __init__(self, eta, dim, relations_ok, embedding):
        self.eta = eta
        self.dim = dim
        self.relations_ok = relations_ok
        self.embedding = embedding  # generator index -> EnvElement x * Ni_eta

    def __repr__(self):
        return f"BlockReport(eta={self.eta}, dim={self.dim}, relations_ok={self.relations_ok})"


class BlockDecomposition:
    def __init__(self, extension, env, blocks, checks, full_mode):
        self.extension = extension
        self.env = env
        self.blocks = blocks
        self.report = Report(checks)
        self.full_mode = full_mode

    @property
    def ok(self):
        return self.report.ok and all(b.relations_ok for b in self.blocks)

    def total_dim(self):
        return sum(b.dim for b in self.blocks if b.dim is not None)


def _nielsen_env(A: ReducedEnvAlgebra, c_index: int, eta: int) -> EnvElement:
    ni = nielsen(eta, A.p)
    pos = A.pos_of[c_index]
    terms = {}
    for e, coeff in enumerate(ni.coeffs):
        if coeff:
            mono = [0] * A.N
            mono[pos] = e
            terms[tuple(mono)] = coeff
    return EnvElement(A, terms)


def block_decompose(E: CentralExtensionAlgebra) -> BlockDecomposition:
    """Decompose u(l_chi) along the idempotents of the central subalgebra
    generated by c: one block per scalar eta, each a copy of U_{eta chi}(l)."""
    carrier = E.carrier
    A = reduced_env(carrier)
    p = A.p
    l = E.base_algebra
    checks = []
    nis = [_nielsen_env(A, E.c_index, eta) for eta in range(p)]

    total = A.zero()
    for ni in nis:
        total = total + ni
    checks.append(ReportCheck("sum of idempotents is 1", total == A.one()))
    ortho = True
    for i in range(p):
        for j in range(p):
            prod = nis[i] * nis[j]
            expect = nis[i] if i == j else A.zero()
            if prod != expect:
                ortho = False
    checks.append(ReportCheck("orthogonal idempotents in u(l_chi)", ortho))

    full_mode = A.dim <= BLOCKS_FULL_GUARD
    monos = A.monomials() if full_mode else None

    blocks = []
    for eta in range(p):
        ni = nis[eta]
        rel_ok = True
        embedding = {}
        for i in range(l.N):
            x = A.generator(i)
            xni = x * ni
            embedding[i] = xni
            # x^p Ni - x^[p]_l Ni - (eta chi(x))^p Ni  == 0  (values in GF(p))
            lhs = A.power(x, p) * ni
            lhs = lhs - A.from_lie(E.embed(l.pbasis_element(i))) * ni
            scal = (eta * int(E.chi.coords[i])) % p
            if scal:
                lhs = lhs - ni.scale(scal)
            if not lhs.is_zero():
                rel_ok = False
        bdim = None
        if full_mode:
            # rank of right multiplication by Ni_eta on the whole algebra
            index = {m: i for i, m in enumerate(monos)}
            M = np.zeros((len(monos), len(monos)), dtype=np.int64)
            for r, m in enumerate(monos):
                out = A.multiply(EnvElement(A, {m: 1}), ni)
                for mm, c in out.terms.items():
                    M[index[mm], r] = c
            R, piv = frref(A.base, M)
            bdim = len(piv)
        blocks.append(BlockReport(eta, bdim, rel_ok, embedding))

    if full_mode:
        tot = sum(b.dim for b in blocks)
        checks.append(ReportCheck("block dimensions sum to p^(N+1)", tot == A.dim,
                                  f"{tot} != {A.dim}" if tot != A.dim else None))
    return BlockDecomposition(E, A, blocks, checks, full_mode)


def central_c(E: CentralExtensionAlgebra, x: LieElement) -> EnvElement:
    """(x^p - x^[p]) / chi(x)^p inside u(l_chi); equals the basis element c
    for every valid x."""
    l = E.base_algebra
    if x.parent is not l:
        raise ValueError("x must lie in the base algebra")
    if x.spec.k != 1:
        raise ValueError("x must have prime-field coefficients")
    chi_x = E.chi(x)
    if chi_x.is_zero():
        raise ValueError("central element needs chi(x) != 0")
    A = reduced_env(E.carrier)
    u = A.from_lie(E.embed(x))
    up = A.power(u, A.p)
    diff = up - A.from_lie(E.embed(p_power(x)))
    denom = chi_x ** A.p
    return diff.scale(int(denom.inverse()))
