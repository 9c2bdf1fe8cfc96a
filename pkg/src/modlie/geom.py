"""Borel subalgebras of sl_n as flag stabilizers over GF(p^k), membership in
the vanishing locus of a nilpotent functional, and the pointwise tests that
certify a subvariety as compatible with the twisted splitting:

  * the parabolic criterion (the functional vanishes on the parabolic),
  * the tangency criterion (the preimage of a tangent subspace lies in the
    kernel of the functional),
  * the stabilizer-element criterion (some h in the Borel rescales the
    functional back to itself: chi([y, h]) = chi(y) for all y).

Fiber points are sampled from torus-fixed Borels (permutation flags) moved by
exponentials of nilpotent centralizer elements, which fix the functional, so
every sampled point stays in the fiber; this is hard-asserted.
"""

from __future__ import annotations

import itertools
import random
import warnings

import numpy as np

from .config import InvariantError
from .field import GF, FieldElement, FieldSpec
from .linalg import Matrix, Subspace, fadd, fkernel, fmatmul, fpow, frref, fscale, fsolve, fsub
from .liealg import (Functional, LieElement, RestrictedLieAlgebra, SubalgebraDatum,
                     _join_spec, is_nilpotent_functional, trace_dual)


class BorelDatum:
    """A Borel subalgebra presented as the stabilizer of a full flag."""

    def __init__(self, g: RestrictedLieAlgebra, flag: Matrix, subalgebra: SubalgebraDatum):
        self.g = g
        self.flag = flag
        self.subalgebra = subalgebra
        n = getattr(g, "_sl_n", None)
        expected = n * (n + 1) // 2 - 1
        if subalgebra.dim != expected:
            raise InvariantError(f"flag stabilizer has dim {subalgebra.dim}, expected {expected}")

    @property
    def spec(self):
        return self.flag.spec

    def key(self):
        return self.subalgebra.subspace.mat.tobytes()

    def quotient_coords(self, vector) -> np.ndarray:
        """Image of a Lie-algebra coordinate vector in g / b (free coords of
        the reduced representative)."""
        red = self.subalgebra.subspace.reduce_vector(np.asarray(vector, dtype=np.int64))
        free = [c for c in range(self.g.N) if c not in self.subalgebra.subspace.pivots]
        return red[free]

    def lift_from_quotient(self, qvector) -> np.ndarray:
        free = [c for c in range(self.g.N) if c not in self.subalgebra.subspace.pivots]
        out = np.zeros(self.g.N, dtype=np.int64)
        for pos, c in enumerate(free):
            out[c] = qvector[pos]
        return out

    def tangent_directions(self, p_sub: SubalgebraDatum) -> Subspace:
        """The image of a subalgebra in g / b: the tangent directions of its
        orbit through this point."""
        rows = [self.quotient_coords(r) for r in p_sub.subspace.mat]
        return Subspace.from_rows(self.spec, self.g.N - self.subalgebra.dim, np.array(rows))

    def __repr__(self):
        return f"BorelDatum(dim {self.subalgebra.dim} over {self.spec})"


def borel_from_flag(g: RestrictedLieAlgebra, flag) -> BorelDatum:
    """Stabilizer {y in sl_n : y V_i <= V_i} of the flag of leading column
    spans of an invertible matrix."""
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("flags describe Borels of sl_n only")
    if not isinstance(flag, Matrix):
        flag = Matrix(g.base, np.asarray(flag, dtype=np.int64) % g.base.p)
    spec = flag.spec
    if flag.rank() != n:
        raise ValueError("flag matrix is singular")
    rows = []
    for i in range(1, n):
        Q = flag.a[:, :i]                      # n x i, basis of V_i
        P = fkernel(spec, Q.T)                 # (n-i) x n, left annihilator of V_i
        for a in range(P.shape[0]):
            for b in range(i):
                row = np.zeros(n * n, dtype=np.int64)
                for r in range(n):
                    for c in range(n):
                        if spec.k == 1:
                            row[r * n + c] = (P[a, r] * Q[c, b]) % spec.p
                        else:
                            row[r * n + c] = spec.MUL[P[a, r], Q[c, b]]
                rows.append(row)
    tr = np.zeros(n * n, dtype=np.int64)
    for r in range(n):
        tr[r * n + r] = 1
    rows.append(tr)
    K = fkernel(spec, np.array(rows))
    coords = []
    for mat_flat in K:
        coords.append(g._matrix_coords(mat_flat.reshape(n, n), spec))
    sub = SubalgebraDatum(g, Subspace.from_rows(spec, g.N, np.array(coords)))
    return BorelDatum(g, flag, sub)


def in_springer_fiber(b: BorelDatum, chi: Functional) -> bool:
    """True iff chi vanishes on the Borel subalgebra."""
    if not is_nilpotent_functional(chi):
        warnings.warn("functional is not nilpotent; the vanishing locus is not a Springer fiber")
    return chi.restrict_is_zero(b.subalgebra)


def stabilizer_witness(g: RestrictedLieAlgebra, basis_rows, spec: FieldSpec,
                       chi: Functional):
    """Solve chi([y, h]) = chi(y) for h in the span of the given rows, y over
    the whole basis; returns the coordinate vector of a witness or None."""
    spec = _join_spec(spec, chi.spec)
    rows = np.asarray(basis_rows, dtype=np.int64)
    m = rows.shape[0]
    A = np.zeros((g.N, m), dtype=np.int64)
    rhs = np.zeros(g.N, dtype=np.int64)
    for j in range(g.N):
        ej = np.zeros(g.N, dtype=np.int64)
        ej[j] = 1
        rhs[j] = chi(LieElement(g, spec, ej)).idx
        for s in range(m):
            br = g.bracket_coords(ej, rows[s], spec)
            A[j, s] = chi(LieElement(g, spec, br)).idx
    t = fsolve(spec, A, rhs)
    if t is None:
        return None
    h = np.zeros(g.N, dtype=np.int64)
    for s in range(m):
        if t[s]:
            h = fadd(spec, h, fscale(spec, rows[s], int(t[s])))
    return h


def test3_at(b: BorelDatum, chi: Functional):
    """A witness h in the Borel with chi([y, h]) = chi(y) for every y, or
    None when the affine system is infeasible."""
    g = b.g
    spec = _join_spec(b.spec, chi.spec)
    h = stabilizer_witness(g, b.subalgebra.subspace.mat, spec, chi)
    if h is None:
        return None
    elt = LieElement(g, spec, h)
    # re-verify the defining identity before handing the witness out
    for j in range(g.N):
        ej = np.zeros(g.N, dtype=np.int64)
        ej[j] = 1
        lhs = chi(LieElement(g, spec, g.bracket_coords(ej, h, spec)))
        if lhs != chi(LieElement(g, spec, ej)):
            raise InvariantError("witness fails its defining identity")
    return elt


def tangency_splitting_check(b: BorelDatum, chi: Functional, S: Subspace) -> bool:
    """True iff the full preimage in g of the tangent directions S (a subspace
    of g / b) lies in ker chi; b must lie in the fiber."""
    if not in_springer_fiber(b, chi):
        raise ValueError("the base point is not in the fiber of chi")
    g = b.g
    spec = _join_spec(b.spec, chi.spec)
    if S.ambient != g.N - b.subalgebra.dim:
        raise ValueError("tangent data has the wrong ambient dimension")
    for row in S.mat:
        lift = b.lift_from_quotient(row)
        if not chi(LieElement(g, spec, lift)).is_zero():
            return False
    return True


def parabolic_nice(g: RestrictedLieAlgebra, p_sub: SubalgebraDatum,
                   chi: Functional) -> bool:
    """The parabolic-orbit criterion: chi vanishes on the parabolic, which
    certifies the whole orbit through any of its Borels."""
    return chi.restrict_is_zero(p_sub)


# -- fiber sampling ------------------------------------------------------------


class FiberSeedError(ValueError):
    """No torus-fixed Borel lies in the fiber; a seed point must be supplied."""


class FiberSample:
    def __init__(self, chi, points, provenance, seed, field):
        self.chi = chi
        self.points = points
        self.provenance = provenance
        self.seed = seed
        self.field = field

    def __len__(self):
        return len(self.points)

    def to_json_dict(self):
        return {
            "field": self.field.describe(),
            "seed": self.seed,
            "chi": [int(v) for v in self.chi.coords],
            "points": [[[int(v) for v in row] for row in b.flag.a] for b in self.points],
            "provenance": self.provenance,
        }


def functional_to_matrix(g: RestrictedLieAlgebra, chi: Functional) -> np.ndarray:
    """Invert the trace pairing: the matrix e with chi(y) = tr(e y)."""
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("requires an sl_n algebra")
    basis = {}
    for idx, kind in enumerate(g.basis_kinds):
        basis[kind] = int(chi.coords[idx])
    e = np.zeros((n, n), dtype=np.int64)
    for idx, kind in enumerate(g.basis_kinds):
        if kind[0] in ("neg", "pos"):
            r, c = kind[1]
            e[c, r] = int(chi.coords[idx])  # chi(E_rc) = e[c, r]
    # diagonal from the Cartan values chi(H_i) = e_ii - e_(i+1)(i+1)
    p = g.base.p
    hvals = [int(chi.coords[idx]) for idx, kind in enumerate(g.basis_kinds)
             if kind[0] == "cartan"]
    # solve d_i - d_(i+1) = h_i with sum d_i = 0
    inv_n = pow(n % p, p - 2, p)
    partial = [0]
    for h in hvals:
        partial.append((partial[-1] - h) % p)  # d_(i+1) = d_i - h_i, relative to d_1
    shift = (-sum(partial) * inv_n) % p
    for i in range(n):
        e[i, i] = (partial[i] + shift) % p
    return e


def weyl_seed_borels(g: RestrictedLieAlgebra, chi: Functional, spec: FieldSpec):
    """All permutation-flag Borels on which chi vanishes."""
    n = g._sl_n
    seeds = []
    for w in itertools.permutations(range(n)):
        flag = np.zeros((n, n), dtype=np.int64)
        for col, row in enumerate(w):
            flag[row, col] = 1
        b = borel_from_flag(g, Matrix(spec, flag))
        if chi.restrict_is_zero(b.subalgebra):
            seeds.append((w, b))
    return seeds


def _nilpotent_centralizer_basis(spec, e, n):
    """Basis of the centralizer of e inside sl_n over the given field."""
    rows = []
    for r in range(n):
        for c in range(n):
            row = np.zeros(n * n, dtype=np.int64)
            # (e z - z e)[r, c] as a linear form in z
            for s in range(n):
                if spec.k == 1:
                    row[s * n + c] = (row[s * n + c] + e[r, s]) % spec.p
                    row[r * n + s] = (row[r * n + s] - e[s, c]) % spec.p
                else:
                    row[s * n + c] = spec.ADD[row[s * n + c], e[r, s]]
                    row[r * n + s] = spec.SUB[row[r * n + s], e[s, c]]
            rows.append(row)
    tr = np.zeros(n * n, dtype=np.int64)
    for r in range(n):
        tr[r * n + r] = 1
    rows.append(tr)
    return [v.reshape(n, n) for v in fkernel(spec, np.array(rows))]


def _truncated_exp(spec, z, n):
    """exp(z) for z nilpotent of order <= n < p."""
    out = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for m in range(1, n):
        term = fmatmul(spec, term, z)
        if not np.any(term):
            break
        inv_fact = 1
        for q in range(1, m + 1):
            inv_fact = (inv_fact * q) % spec.p
        inv_fact = pow(inv_fact, spec.p - 2, spec.p)
        out = fadd(spec, out, fscale(spec, term, inv_fact))
    return out


def sample_fiber(g: RestrictedLieAlgebra, chi: Functional, count: int, k: int,
                 seed: int = 0) -> FiberSample:
    """Fiber points over GF(p^k): all torus-fixed seeds, then `count` random
    translates by exponentials of nilpotent centralizer elements (these fix
    chi, so membership is preserved and hard-asserted).  Deterministic under
    the seed; repeated points are collapsed."""
    n = getattr(g, "_sl_n", None)
    if n is None:
        raise ValueError("fiber sampling requires an sl_n algebra")
    if n >= g.base.p:
        raise ValueError("need n < p so unipotent exponentials truncate")
    spec = GF(g.base.p, k)
    e = functional_to_matrix(g, chi)
    if np.any(fpow(g.base, e, n)):
        raise ValueError("the functional is not the trace-dual of a nilpotent matrix")
    seeds = weyl_seed_borels(g, chi, spec)
    if not seeds:
        raise FiberSeedError("chi does not vanish on any torus-fixed Borel")
    points = []
    provenance = []
    index = {}
    for w, b in seeds:
        if b.key() not in index:
            index[b.key()] = len(points)
            points.append(b)
            provenance.append({"kind": "weyl", "perm": [int(v) for v in w]})
    rng = random.Random(seed)
    cz = _nilpotent_centralizer_basis(spec, e, n)
    attempts = 0
    while attempts < count:
        attempts += 1
        base_idx = rng.randrange(len(points))
        z = None
        coeffs = None
        for _ in range(8 * spec.q):  # rejection-sample a nonzero nilpotent
            cand = np.zeros((n, n), dtype=np.int64)
            cco = []
            for mat in cz:
                cval = rng.randrange(spec.q)
                cco.append(cval)
                if cval:
                    cand = fadd(spec, cand, fscale(spec, mat, cval))
            if np.any(cand) and not np.any(fpow(spec, cand, n)):
                z, coeffs = cand, cco
                break
        if z is None:
            continue
        t = rng.randrange(1, spec.q)
        G = _truncated_exp(spec, fscale(spec, z, t), n)
        flag = Matrix(spec, fmatmul(spec, G, points[base_idx].flag.a))
        b = borel_from_flag(g, flag)
        if not chi.restrict_is_zero(b.subalgebra):
            raise InvariantError("translate left the fiber; centralizer sampling is broken")
        if b.key() not in index:
            index[b.key()] = len(points)
            points.append(b)
            provenance.append({"kind": "exp", "base": base_idx, "t": int(t),
                               "z_coeffs": [int(c) for c in coeffs]})
    return FiberSample(chi, points, provenance, seed, spec)


# -- nilpotent orbit bookkeeping ------------------------------------------------------------


def partitions(n: int):
    """All partitions of n, decreasing parts, deterministic order."""
    if n == 0:
        yield ()
        return
    def rec(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, maxpart), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    yield from rec(n, n)


def jordan_nilpotent(partition, n: int) -> np.ndarray:
    """The upper-triangular Jordan nilpotent with the given block sizes."""
    if sum(partition) != n:
        raise ValueError("partition does not sum to n")
    e = np.zeros((n, n), dtype=np.int64)
    at = 0
    for part in partition:
        for i in range(part - 1):
            e[at + i, at + i + 1] = 1
        at += part
    return e
