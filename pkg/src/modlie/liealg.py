"""Restricted Lie algebras over GF(p) by structure constants.

An algebra carries its bracket tensor C (with [e_i, e_j] = sum_m C[i,j,m] e_m)
and the p-th powers of its basis vectors; the p-operation on arbitrary
elements is recovered with Jacobson's sum formula, splitting off one basis
term at a time in fixed index order.  Elements may have coefficients in any
extension GF(p^k) even though the structure constants live over GF(p).

Classical gl_n / sl_n are built from elementary matrices, where the p-map is
literally the matrix p-th power; the matrices are kept on the algebra so
tests can compare against them.
"""

from __future__ import annotations

import json

import numpy as np

from .config import InvariantError
from .field import GF, FieldElement, FieldSpec
from .linalg import Matrix, Subspace, fadd, fkernel, fmatmul, fpow, frref, fscale, fsub
from .linalg import _red_tensor


def _join_spec(a: FieldSpec, b: FieldSpec) -> FieldSpec:
    if a == b:
        return a
    if a.p != b.p:
        raise ValueError("different characteristics")
    if a.k == 1:
        return b
    if b.k == 1:
        return a
    raise ValueError(f"no common field for {a} and {b}")


def _bilinear(C: np.ndarray, x: np.ndarray, y: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """sum_{i,j} C[i,j,:] * x_i * y_j with C over GF(p), x, y over spec."""
    if spec.k == 1:
        return np.einsum("i,j,ijm->m", x, y, C) % spec.p
    dx = spec.DIGITS[x]
    dy = spec.DIGITS[y]
    t = _red_tensor(spec)
    pairs = np.einsum("ia,jb,abm->ijm", dx, dy, t) % spec.p
    out = np.einsum("ijt,ijm->tm", C, pairs) % spec.p
    return out @ spec._powers


class ReportCheck:
    __slots__ = ("name", "ok", "witness")

    def __init__(self, name, ok, witness=None):
        self.name = name
        self.ok = bool(ok)
        self.witness = witness

    def __repr__(self):
        tail = "" if self.ok else f" ({self.witness})"
        return f"{self.name}: {'pass' if self.ok else 'FAIL'}{tail}"


class Report:
    """A list of named pass/fail checks with witnesses on failure."""

    def __init__(self, checks):
        self.checks = list(checks)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def to_json_dict(self):
        return [{"name": c.name, "ok": c.ok, "witness": c.witness} for c in self.checks]

    def __repr__(self):
        return "\n".join(repr(c) for c in self.checks)


class RestrictedLieAlgebra:
    def __init__(self, name, base: FieldSpec, structconst, pbasis, names=None,
                 matrix_basis=None, basis_kinds=None, verify=True):
        if base.k != 1:
            raise ValueError("structure constants must live over the prime field")
        self.name = name
        self.base = base
        self.C = np.asarray(structconst, dtype=np.int64) % base.p
        self.N = self.C.shape[0]
        if self.C.shape != (self.N, self.N, self.N):
            raise ValueError("structure constant tensor must be N x N x N")
        self.pbasis = np.asarray(pbasis, dtype=np.int64).reshape(self.N, self.N) % base.p
        self.names = list(names) if names else [f"x{i}" for i in range(self.N)]
        self.matrix_basis = matrix_basis  # list of n x n code arrays, or None
        self.basis_kinds = basis_kinds    # per-index ('neg',(i,j)) / ('cartan',i) / ('pos',(i,j)) / ('diag',i)
        if verify:
            rep = verify_restricted(self)
            if not rep.ok:
                raise InvariantError(f"{name}: not a restricted Lie algebra:\n{rep}")

    # -- elements -------------------------------------------------------------

    def element(self, coords, spec: FieldSpec | None = None) -> "LieElement":
        spec = spec or self.base
        arr = np.zeros(self.N, dtype=np.int64)
        for i, v in enumerate(coords):
            arr[i] = v.idx if isinstance(v, FieldElement) else int(v) % self.base.p
        return LieElement(self, spec, arr)

    def zero(self, spec=None):
        return LieElement(self, spec or self.base, np.zeros(self.N, dtype=np.int64))

    def basis_element(self, i, spec=None) -> "LieElement":
        arr = np.zeros(self.N, dtype=np.int64)
        arr[i] = 1
        return LieElement(self, spec or self.base, arr)

    def basis(self, spec=None):
        return [self.basis_element(i, spec) for i in range(self.N)]

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def gen(self, name: str, spec=None) -> "LieElement":
        return self.basis_element(self.index_of(name), spec)

    def random_element(self, rng, spec=None) -> "LieElement":
        spec = spec or self.base
        return LieElement(self, spec,
                          np.array([rng.randrange(spec.q) for _ in range(self.N)], dtype=np.int64))

    def functional(self, coords, spec=None) -> "Functional":
        spec = spec or self.base
        arr = np.zeros(self.N, dtype=np.int64)
        for i, v in enumerate(coords):
            arr[i] = v.idx if isinstance(v, FieldElement) else int(v) % self.base.p
        return Functional(self, spec, arr)

    def zero_functional(self) -> "Functional":
        return Functional(self, self.base, np.zeros(self.N, dtype=np.int64))

    # -- operations -------------------------------------------------------------

    def bracket_coords(self, x: np.ndarray, y: np.ndarray, spec: FieldSpec) -> np.ndarray:
        return _bilinear(self.C, x, y, spec)

    def ad_matrix_coords(self, x: np.ndarray, spec: FieldSpec) -> np.ndarray:
        """Matrix of ad(x): column j is [x, e_j]."""
        if spec.k == 1:
            return np.einsum("i,ijm->mj", x, self.C) % spec.p
        cols = [self.bracket_coords(x, np.eye(self.N, dtype=np.int64)[j], spec)
                for j in range(self.N)]
        return np.stack(cols, axis=1)

    def pbasis_element(self, i, spec=None) -> "LieElement":
        return LieElement(self, spec or self.base, self.pbasis[i].copy())

    # matrix realisation helpers (classical algebras only)

    def matrix_of(self, x: "LieElement") -> Matrix:
        if self.matrix_basis is None:
            raise ValueError(f"{self.name} has no matrix realisation")
        n = self.matrix_basis[0].shape[0]
        spec = x.spec
        out = np.zeros((n, n), dtype=np.int64)
        for i in range(self.N):
            if x.coords[i]:
                out = fadd(spec, out, fscale(spec, self.matrix_basis[i], int(x.coords[i])))
        return Matrix(spec, out)

    def element_from_matrix(self, mat, spec=None) -> "LieElement":
        if self.matrix_basis is None:
            raise ValueError(f"{self.name} has no matrix realisation")
        spec = spec or self.base
        if isinstance(mat, Matrix):
            spec = mat.spec
            mat = mat.a
        mat = np.asarray(mat, dtype=np.int64) % spec.p if spec.k == 1 else np.asarray(mat, dtype=np.int64)
        coords = self._matrix_coords(mat, spec)
        return LieElement(self, spec, coords)

    def _matrix_coords(self, mat: np.ndarray, spec: FieldSpec) -> np.ndarray:
        n = mat.shape[0]
        coords = np.zeros(self.N, dtype=np.int64)
        rebuilt = np.zeros((n, n), dtype=np.int64)
        if self.basis_kinds is None:
            raise ValueError("no coordinate chart for this algebra")
        # off-diagonal entries match a unique basis matrix; the diagonal is
        # handled per family
        for idx, kind in enumerate(self.basis_kinds):
            tag = kind[0]
            if tag in ("neg", "pos"):
                r, c = kind[1]
                coords[idx] = mat[r, c]
            elif tag == "diag":
                coords[idx] = mat[kind[1], kind[1]]
        if any(k[0] == "cartan" for k in self.basis_kinds):
            # sl_n: H_i = E_ii - E_(i+1)(i+1); coefficient t_i = sum of the
            # first i diagonal entries
            run = np.int64(0)
            for idx, kind in enumerate(self.basis_kinds):
                if kind[0] != "cartan":
                    continue
                i = kind[1]
                run = fadd(spec, run, mat[i, i])
                coords[idx] = run
            tr = np.int64(0)
            for i in range(n):
                tr = fadd(spec, tr, mat[i, i])
            if tr:
                raise ValueError("matrix is not traceless")
        for idx in range(self.N):
            if coords[idx]:
                rebuilt = fadd(spec, rebuilt, fscale(spec, self.matrix_basis[idx], int(coords[idx])))
        if np.any(fsub(spec, rebuilt, mat)):
            raise ValueError("matrix does not lie in this algebra")
        return coords

    def indices_of_kind(self, tag):
        return [i for i, k in enumerate(self.basis_kinds or []) if k[0] == tag]

    # -- serialization -------------------------------------------------------------

    def to_json_dict(self):
        trips = [[int(i), int(j), int(m), int(self.C[i, j, m])]
                 for i in range(self.N) for j in range(self.N) for m in range(self.N)
                 if self.C[i, j, m]]
        return {
            "name": self.name,
            "field": self.base.describe(),
            "dim": self.N,
            "names": self.names,
            "structure_constants": trips,
            "p_basis": [[int(v) for v in row] for row in self.pbasis],
        }

    @classmethod
    def from_json_dict(cls, d, verify=True):
        base = GF(d["field"]["p"], d["field"].get("k", 1))
        N = d["dim"]
        C = np.zeros((N, N, N), dtype=np.int64)
        for i, j, m, v in d["structure_constants"]:
            C[i, j, m] = v
        return cls(d["name"], base, C, np.array(d["p_basis"], dtype=np.int64),
                   names=d.get("names"), verify=verify)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __repr__(self):
        return f"RestrictedLieAlgebra({self.name}, dim {self.N} over GF({self.base.p}))"


class LieElement:
    __slots__ = ("parent", "spec", "coords")

    def __init__(self, parent, spec, coords):
        self.parent = parent
        self.spec = spec
        self.coords = np.asarray(coords, dtype=np.int64)

    def _pair(self, other):
        if self.parent is not other.parent:
            raise ValueError("elements of different algebras")
        spec = _join_spec(self.spec, other.spec)
        return spec

    def __add__(self, other):
        spec = self._pair(other)
        return LieElement(self.parent, spec, fadd(spec, self.coords, other.coords))

    def __sub__(self, other):
        spec = self._pair(other)
        return LieElement(self.parent, spec, fsub(spec, self.coords, other.coords))

    def __neg__(self):
        return LieElement(self.parent, self.spec,
                          (-self.coords) % self.spec.p if self.spec.k == 1 else self.spec.NEG[self.coords])

    def scale(self, s):
        s = self.spec.element(s) if not isinstance(s, FieldElement) else s
        spec = _join_spec(self.spec, s.spec)
        return LieElement(self.parent, spec, fscale(spec, self.coords, s.idx))

    def bracket(self, other) -> "LieElement":
        spec = self._pair(other)
        return LieElement(self.parent, spec,
                          self.parent.bracket_coords(self.coords, other.coords, spec))

    def ad_matrix(self) -> Matrix:
        return Matrix(self.spec, self.parent.ad_matrix_coords(self.coords, self.spec))

    def p_power(self) -> "LieElement":
        return p_power(self)

    def is_zero(self):
        return not np.any(self.coords)

    def support(self):
        return [int(i) for i in np.nonzero(self.coords)[0]]

    def coeff(self, i) -> FieldElement:
        return FieldElement(self.spec, int(self.coords[i]))

    def __eq__(self, other):
        if not isinstance(other, LieElement) or self.parent is not other.parent:
            return NotImplemented
        try:
            spec = self._pair(other)
        except ValueError:
            return False
        return not np.any(fsub(spec, self.coords, other.coords))

    def __hash__(self):
        return hash((id(self.parent), self.coords.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in self.support():
            c = self.coeff(i)
            nm = self.parent.names[i]
            parts.append(nm if c.idx == 1 else f"{c!r}*{nm}")
        return " + ".join(parts)


class Functional:
    """A linear functional on the algebra, given by values on the basis."""

    __slots__ = ("parent", "spec", "coords")

    def __init__(self, parent, spec, coords):
        self.parent = parent
        self.spec = spec
        self.coords = np.asarray(coords, dtype=np.int64)

    def __call__(self, x: LieElement) -> FieldElement:
        spec = _join_spec(self.spec, x.spec)
        if spec.k == 1:
            return FieldElement(spec, int(np.dot(self.coords, x.coords) % spec.p))
        prods = spec.MUL[self.coords, x.coords]
        acc = np.int64(0)
        for v in prods:
            acc = spec.ADD[acc, v]
        return FieldElement(spec, int(acc))

    def value_on_basis(self, i) -> FieldElement:
        return FieldElement(self.spec, int(self.coords[i]))

    def is_zero(self):
        return not np.any(self.coords)

    def scale(self, s: int) -> "Functional":
        return Functional(self.parent, self.spec, fscale(self.spec, self.coords, int(s)))

    def restrict_is_zero(self, sub: "SubalgebraDatum") -> bool:
        spec = _join_spec(self.spec, sub.spec)
        for row in sub.subspace.mat:
            if spec.k == 1:
                if np.dot(self.coords, row) % spec.p:
                    return False
            else:
                acc = np.int64(0)
                for v in spec.MUL[self.coords, row]:
                    acc = spec.ADD[acc, v]
                if acc:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Functional) or self.parent is not other.parent:
            return NotImplemented
        spec = _join_spec(self.spec, other.spec)
        return not np.any(fsub(spec, self.coords, other.coords))

    def __hash__(self):
        return hash((id(self.parent), self.coords.tobytes()))

    def __repr__(self):
        vals = ", ".join(f"{self.parent.names[i]}:{FieldElement(self.spec, int(v))!r}"
                         for i, v in enumerate(self.coords) if v)
        return f"Functional({vals or '0'})"


class SubalgebraDatum:
    """A subalgebra given by an echelon basis, closure-checked at construction."""

    def __init__(self, parent: RestrictedLieAlgebra, subspace: Subspace, check=True):
        self.parent = parent
        self.subspace = subspace
        self.spec = subspace.spec
        if subspace.ambient != parent.N:
            raise ValueError("ambient dimension mismatch")
        if check:
            self._verify_closed()

    def _verify_closed(self):
        rows = self.subspace.mat
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                br = self.parent.bracket_coords(rows[i], rows[j], self.spec)
                if not self.subspace.contains_vector(br):
                    raise InvariantError("subspace is not bracket-closed")
        for i in range(len(rows)):
            pp = p_power(LieElement(self.parent, self.spec, rows[i]))
            if not self.subspace.contains_vector(pp.coords):
                raise InvariantError("subspace is not [p]-closed")

    @property
    def dim(self):
        return self.subspace.dim

    def basis_elements(self):
        return [LieElement(self.parent, self.spec, row.copy()) for row in self.subspace.mat]

    def contains(self, x: LieElement) -> bool:
        return self.subspace.contains_vector(x.coords)

    def coordinate_indices(self):
        """If the basis consists of standard basis vectors, their indices."""
        idxs = []
        for row in self.subspace.mat:
            nz = np.nonzero(row)[0]
            if nz.size != 1 or row[nz[0]] != 1:
                return None
            idxs.append(int(nz[0]))
        return idxs

    def as_algebra(self, name=None, verify=True) -> RestrictedLieAlgebra:
        """The subalgebra as a restricted Lie algebra in its own basis."""
        if self.spec.k != 1:
            raise ValueError("as_algebra needs a prime-field basis")
        rows = self.subspace.mat
        d = len(rows)
        C = np.zeros((d, d, d), dtype=np.int64)
        pb = np.zeros((d, d), dtype=np.int64)
        piv = list(self.subspace.pivots)
        for i in range(d):
            for j in range(d):
                br = self.parent.bracket_coords(rows[i], rows[j], self.spec)
                red = self.subspace.reduce_vector(br)
                if np.any(red):
                    raise InvariantError("not bracket-closed")
                C[i, j] = br[piv]
            pp = p_power(LieElement(self.parent, self.spec, rows[i])).coords
            if np.any(self.subspace.reduce_vector(pp)):
                raise InvariantError("not [p]-closed")
            pb[i] = pp[piv]
        idxs = self.coordinate_indices()
        names = ([self.parent.names[i] for i in idxs] if idxs is not None
                 else [f"b{i}" for i in range(d)])
        return RestrictedLieAlgebra(name or f"{self.parent.name}-sub", self.parent.base,
                                    C, pb, names=names, verify=verify)

    def __repr__(self):
        return f"SubalgebraDatum(dim {self.dim} in {self.parent.name})"


# -- core operations ------------------------------------------------------------


def bracket(x: LieElement, y: LieElement) -> LieElement:
    return x.bracket(y)


def s_coefficients(a: LieElement, b: LieElement):
    """The Jacobson correction terms s_1..s_(p-1), from the expansion of
    (ad(aT + b))^(p-1)(a) as a polynomial in T: n * s_n is the coefficient
    of T^(n-1)."""
    spec = a._pair(b)
    p = spec.p
    alg = a.parent
    # coeffs[d] = coefficient of T^d, a coordinate vector
    coeffs = [a.coords.copy()]
    for _ in range(p - 1):
        new = [np.zeros(alg.N, dtype=np.int64) for _ in range(len(coeffs) + 1)]
        for d, v in enumerate(coeffs):
            if not np.any(v):
                continue
            new[d + 1] = fadd(spec, new[d + 1], alg.bracket_coords(a.coords, v, spec))
            new[d] = fadd(spec, new[d], alg.bracket_coords(b.coords, v, spec))
        coeffs = new
    out = []
    for n in range(1, p):
        inv_n = pow(n, p - 2, p)
        out.append(LieElement(alg, spec, fscale(spec, coeffs[n - 1], inv_n)))
    return out


def p_power(x: LieElement) -> LieElement:
    """Jacobson extension of the basis p-map: single terms scale by the p-th
    power of the coefficient; sums split off the lowest-index term."""
    alg = x.parent
    spec = x.spec
    support = x.support()
    if not support:
        return alg.zero(spec)
    i = support[0]
    ci = int(x.coords[i])
    cip = ci if spec.k == 1 else int(spec.FROB[ci])
    head_pp = LieElement(alg, spec, fscale(spec, alg.pbasis[i].copy(), cip))
    if len(support) == 1:
        return head_pp
    head = alg.zero(spec)
    head.coords[i] = ci
    tail = LieElement(alg, spec, x.coords.copy())
    tail.coords[i] = 0
    total = head_pp + p_power(tail)
    for s in s_coefficients(head, tail):
        total = total + s
    return total


def verify_restricted(alg: RestrictedLieAlgebra) -> Report:
    """Check the restricted-algebra axioms, reporting witnesses on failure."""
    p = alg.base.p
    C = alg.C
    checks = []

    anti = (C + np.einsum("ijm->jim", C)) % p
    bad = np.argwhere(anti)
    checks.append(ReportCheck("antisymmetry", bad.size == 0,
                              None if bad.size == 0 else f"pair {tuple(bad[0][:2])}"))
    diag = np.einsum("iim->im", C) % p
    bad = np.argwhere(diag)
    checks.append(ReportCheck("alternating", bad.size == 0,
                              None if bad.size == 0 else f"index {int(bad[0][0])}"))

    # Jacobi: [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0
    T = np.einsum("ijl,lkm->ijkm", C, C) % p
    jac = (T + np.einsum("ijkm->jkim", T) + np.einsum("ijkm->kijm", T)) % p
    bad = np.argwhere(jac)
    checks.append(ReportCheck("jacobi", bad.size == 0,
                              None if bad.size == 0 else f"triple {tuple(int(v) for v in bad[0][:3])}"))

    ok = True
    witness = None
    for i in range(alg.N):
        adi = alg.ad_matrix_coords(np.eye(alg.N, dtype=np.int64)[i], alg.base)
        adp = fpow(alg.base, adi, p)
        adpb = alg.ad_matrix_coords(alg.pbasis[i], alg.base)
        if np.any((adp - adpb) % p):
            ok = False
            witness = alg.names[i]
            break
    checks.append(ReportCheck("ad_compatibility", ok, witness))

    ok = True
    witness = None
    for i in range(alg.N):
        for j in range(i + 1, alg.N):
            ei, ej = alg.basis_element(i), alg.basis_element(j)
            lhs = p_power(ei + ej)
            rhs = alg.pbasis_element(i) + alg.pbasis_element(j)
            for s in s_coefficients(ei, ej):
                rhs = rhs + s
            if lhs != rhs:
                ok = False
                witness = f"pair ({alg.names[i]}, {alg.names[j]})"
                break
        if not ok:
            break
    checks.append(ReportCheck("jacobson_sum_on_basis", ok, witness))
    return Report(checks)


# -- classical constructions ------------------------------------------------------------


def construct_classical(family: str, n: int, p: int) -> RestrictedLieAlgebra:
    """gl_n or sl_n over GF(p) with the matrix p-th power as p-map.

    sl_n basis order: negative root vectors E_ji (i<j, lex), then the Cartan
    H_i = E_ii - E_(i+1)(i+1), then positive E_ij (i<j, lex); this is the PBW
    order used downstream.
    """
    base = GF(p)
    if family == "sl":
        kinds = ([("neg", (j, i)) for i in range(n) for j in range(n) if i < j]
                 + [("cartan", i) for i in range(n - 1)]
                 + [("pos", (i, j)) for i in range(n) for j in range(n) if i < j])
        names = []
        for kind in kinds:
            if kind[0] == "cartan":
                names.append(f"H{kind[1] + 1}")
            else:
                r, c = kind[1]
                names.append(f"E{r + 1}{c + 1}")
        mats = []
        for kind in kinds:
            m = np.zeros((n, n), dtype=np.int64)
            if kind[0] == "cartan":
                i = kind[1]
                m[i, i] = 1
                m[i + 1, i + 1] = p - 1
            else:
                r, c = kind[1]
                m[r, c] = 1
            mats.append(m)
    elif family == "gl":
        kinds = ([("neg", (j, i)) for i in range(n) for j in range(n) if i < j]
                 + [("diag", i) for i in range(n)]
                 + [("pos", (i, j)) for i in range(n) for j in range(n) if i < j])
        names = [f"E{k[1][0] + 1}{k[1][1] + 1}" if k[0] != "diag" else f"E{k[1] + 1}{k[1] + 1}"
                 for k in kinds]
        mats = []
        for kind in kinds:
            m = np.zeros((n, n), dtype=np.int64)
            if kind[0] == "diag":
                m[kind[1], kind[1]] = 1
            else:
                r, c = kind[1]
                m[r, c] = 1
            mats.append(m)
    else:
        raise ValueError(f"unsupported family {family!r} (gl or sl)")

    N = len(mats)
    alg = RestrictedLieAlgebra.__new__(RestrictedLieAlgebra)
    alg.name = f"{family}{n}(p={p})"
    alg.base = base
    alg.N = N
    alg.names = names
    alg.matrix_basis = mats
    alg.basis_kinds = kinds
    C = np.zeros((N, N, N), dtype=np.int64)
    pb = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        for j in range(N):
            comm = (mats[i] @ mats[j] - mats[j] @ mats[i]) % p
            C[i, j] = alg._matrix_coords(comm, base)
        pb[i] = alg._matrix_coords(fpow(base, mats[i], p), base)
    alg.C = C
    alg.pbasis = pb
    rep = verify_restricted(alg)
    if not rep.ok:
        raise InvariantError(f"classical construction failed:\n{rep}")
    alg._sl_n = n if family == "sl" else None
    return alg


def simple_rank(g: RestrictedLieAlgebra) -> int:
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("operation requires an sl_n algebra from construct_classical")
    return n - 1


def borel_and_parabolic(g: RestrictedLieAlgebra, subset=()) -> SubalgebraDatum:
    """Standard Borel (subset empty) or the standard parabolic generated by the
    simple roots in `subset` (1-based indices)."""
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("borel_and_parabolic requires an sl_n algebra")
    subset = set(subset)
    for s in subset:
        if not (1 <= s <= n - 1):
            raise ValueError(f"invalid simple root index {s}")
    idxs = []
    for idx, kind in enumerate(g.basis_kinds):
        if kind[0] in ("cartan", "pos"):
            idxs.append(idx)
        elif kind[0] == "neg":
            r, c = kind[1]  # E_rc with r > c; spans simple roots c+1 .. r
            if set(range(c + 1, r + 1)) <= subset:
                idxs.append(idx)
    rows = np.zeros((len(idxs), g.N), dtype=np.int64)
    for row, idx in enumerate(sorted(idxs)):
        rows[row, idx] = 1
    return SubalgebraDatum(g, Subspace.from_rows(g.base, g.N, rows))


def centralizer(chi: Functional) -> SubalgebraDatum:
    """C_g(chi) = {y : chi([y, -]) = 0}, as the kernel of y -> (chi([y, e_j]))_j."""
    g = chi.parent
    spec = chi.spec
    if spec.k == 1:
        vals = np.einsum("ijm,m->ij", g.C, chi.coords) % spec.p  # vals[i,j] = chi([e_i,e_j])
        A = vals.T  # row j, column i
    else:
        A = np.zeros((g.N, g.N), dtype=np.int64)
        for i in range(g.N):
            for j in range(g.N):
                br = g.C[i, j]
                acc = np.int64(0)
                for m in range(g.N):
                    if br[m]:
                        acc = spec.ADD[acc, spec.MUL[int(br[m]), int(chi.coords[m])]]
                A[j, i] = acc
    K = fkernel(spec, A)
    return SubalgebraDatum(g, Subspace.from_rows(spec, g.N, K))


def is_nilpotent_functional(chi: Functional) -> bool:
    """True iff the centralizer of chi lies inside ker(chi)."""
    cz = centralizer(chi)
    return chi.restrict_is_zero(cz)


def trace_dual(g: RestrictedLieAlgebra, e) -> Functional:
    """The functional y -> tr(e y) on sl_n; needs p coprime to n."""
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("trace_dual requires an sl_n algebra")
    if n % g.base.p == 0:
        raise ValueError(f"trace form is degenerate: p = {g.base.p} divides n = {n}")
    e = e.a if isinstance(e, Matrix) else np.asarray(e, dtype=np.int64) % g.base.p
    coords = np.zeros(g.N, dtype=np.int64)
    for i, m in enumerate(g.matrix_basis):
        coords[i] = np.trace((e @ m)) % g.base.p
    return Functional(g, g.base, coords)
