"""Dense exact linear algebra over GF(p^k).

Matrices carry a FieldSpec and a 2-D int64 numpy array of element codes.
The prime-field case (k = 1, codes = residues) gets direct vectorised
arithmetic; extension fields go through the spec's lookup tables.  Row
reduction is deterministic: pivot = first nonzero column, first row.

The f* functions operate on raw code arrays and are the hot path used by the
representation-theory layer; Matrix and Subspace wrap them.
"""

from __future__ import annotations

import numpy as np

from .field import FieldElement, FieldSpec


def _red_tensor(spec: FieldSpec) -> np.ndarray:
    """REDT[i,j,m] = coefficient of x^m in x^(i+j) mod modulus."""
    t = getattr(spec, "_REDT", None)
    if t is not None:
        return t
    k, p = spec.k, spec.p
    rows = np.zeros((2 * k - 1, k), dtype=np.int64)
    for d in range(k):
        rows[d, d] = 1
    rep = np.array([(-c) % p for c in spec.modulus[:-1]], dtype=np.int64)
    cur = rep.copy()
    for d in range(k, 2 * k - 1):
        rows[d] = cur
        over = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        cur = (cur + over * rep) % p
    t = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            t[i, j] = rows[i + j]
    spec._REDT = t
    return t


def fmatmul(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if spec.k == 1:
        return (A @ B) % spec.p
    da = spec.DIGITS[A]          # (r, s, k)
    db = spec.DIGITS[B]          # (s, c, k)
    t = _red_tensor(spec)
    full = np.einsum("rsi,scj->rcij", da, db)
    coeffs = np.einsum("rcij,ijm->rcm", full, t) % spec.p
    return coeffs @ spec._powers


def fmatvec(spec: FieldSpec, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return fmatmul(spec, A, v[:, None])[:, 0]


def fneg(spec: FieldSpec, A: np.ndarray) -> np.ndarray:
    return (-A) % spec.p if spec.k == 1 else spec.NEG[A]


def fadd(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (A + B) % spec.p if spec.k == 1 else spec.ADD[A, B]


def fsub(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (A - B) % spec.p if spec.k == 1 else spec.SUB[A, B]


def fscale(spec: FieldSpec, A: np.ndarray, s: int) -> np.ndarray:
    return (A * s) % spec.p if spec.k == 1 else spec.MUL[A, s]


def frref(spec: FieldSpec, A: np.ndarray):
    """Reduced row echelon form; returns (R, pivot column tuple)."""
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a 2-D array")
    p = spec.p
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        if spec.k == 1:
            inv = pow(int(A[r, c]), p - 2, p)
            A[r] = (A[r] * inv) % p
            f = A[:, c].copy()
            f[r] = 0
            if np.any(f):
                A = (A - np.outer(f, A[r])) % p
        else:
            inv = int(spec.INV[A[r, c]])
            A[r] = spec.MUL[A[r], inv]
            f = A[:, c].copy()
            f[r] = 0
            if np.any(f):
                A = spec.SUB[A, spec.MUL[f[:, None], A[r][None, :]]]
        piv.append(c)
        r += 1
    return A, tuple(piv)


def frank(spec: FieldSpec, A: np.ndarray) -> int:
    return len(frref(spec, A)[1])


def fkernel(spec: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Rows spanning the right kernel {x : A x = 0}."""
    R, piv = frref(spec, A)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in piv]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for idx, fc in enumerate(free):
        K[idx, fc] = 1
        for i, pc in enumerate(piv):
            K[idx, pc] = (-R[i, fc]) % spec.p if spec.k == 1 else spec.NEG[R[i, fc]]
    return K


def fsolve(spec: FieldSpec, A: np.ndarray, b: np.ndarray):
    """One particular solution of A x = b, or None."""
    aug = np.concatenate([A, np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    R, piv = frref(spec, aug)
    if piv and piv[-1] == A.shape[1]:
        return None
    x = np.zeros(A.shape[1], dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, -1]
    return x


def fpow(spec: FieldSpec, A: np.ndarray, e: int) -> np.ndarray:
    n = A.shape[0]
    R = np.eye(n, dtype=np.int64)
    base = A % spec.p if spec.k == 1 else A.copy()
    while e:
        if e & 1:
            R = fmatmul(spec, R, base)
        base = fmatmul(spec, base, base)
        e >>= 1
    return R


def _reduce_rows_against(spec, rows, R, piv):
    """Reduce a batch of row vectors against an RREF basis (R, piv)."""
    if len(piv) == 0 or rows.size == 0:
        return rows % spec.p if spec.k == 1 else rows
    coeff = rows[:, list(piv)]
    if spec.k == 1:
        return (rows - coeff @ R[: len(piv)]) % spec.p
    prod = fmatmul(spec, coeff, R[: len(piv)])
    return spec.SUB[rows, prod]


class EchelonAccumulator:
    """Incrementally maintained RREF row basis; the workhorse for spinning."""

    def __init__(self, spec: FieldSpec, width: int):
        self.spec = spec
        self.width = width
        self.rows = np.zeros((0, width), dtype=np.int64)
        self.pivots = []

    @property
    def dim(self):
        return len(self.pivots)

    def insert(self, batch: np.ndarray) -> bool:
        """Insert row vectors; returns True if the span grew."""
        batch = np.atleast_2d(np.asarray(batch, dtype=np.int64))
        grew = False
        batch = _reduce_rows_against(self.spec, batch, self.rows, self.pivots)
        for row in batch:
            row = _reduce_rows_against(self.spec, row[None, :], self.rows, self.pivots)[0]
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            if self.spec.k == 1:
                row = (row * pow(int(row[c]), self.spec.p - 2, self.spec.p)) % self.spec.p
            else:
                row = self.spec.MUL[row, int(self.spec.INV[row[c]])]
            # clear column c in existing rows
            if self.dim:
                f = self.rows[:, c].copy()
                if np.any(f):
                    if self.spec.k == 1:
                        self.rows = (self.rows - np.outer(f, row)) % self.spec.p
                    else:
                        self.rows = self.spec.SUB[self.rows, self.spec.MUL[f[:, None], row[None, :]]]
            pos = int(np.searchsorted(np.array(self.pivots + [self.width]), c))
            self.rows = np.insert(self.rows, pos, row, axis=0)
            self.pivots.insert(pos, c)
            grew = True
        return grew

    def contains(self, row: np.ndarray) -> bool:
        red = _reduce_rows_against(self.spec, np.atleast_2d(row), self.rows, self.pivots)
        return not np.any(red)

    def basis(self) -> np.ndarray:
        return self.rows.copy()


class Matrix:
    """Dense matrix over a fixed FieldSpec."""

    __slots__ = ("spec", "a")

    def __init__(self, spec: FieldSpec, a: np.ndarray):
        self.spec = spec
        self.a = np.asarray(a, dtype=np.int64)
        if self.a.ndim != 2:
            raise ValueError("matrix data must be 2-D")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, spec, rows, cols):
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec, n):
        return cls(spec, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, spec, rows):
        data = np.zeros((len(rows), len(rows[0]) if rows else 0), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                data[i, j] = v.idx if isinstance(v, FieldElement) else int(v) % spec.p
        return cls(spec, data)

    @classmethod
    def random(cls, spec, rows, cols, rng):
        return cls(spec, np.array([[rng.randrange(spec.q) for _ in range(cols)]
                                   for _ in range(rows)], dtype=np.int64).reshape(rows, cols))

    # -- shape / access --------------------------------------------------------

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def entry(self, i, j) -> FieldElement:
        return FieldElement(self.spec, int(self.a[i, j]))

    def to_lists(self):
        return [[int(v) for v in row] for row in self.a]

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if self.spec != other.spec:
            raise ValueError("matrices over different fields")

    def __add__(self, other):
        self._check(other)
        return Matrix(self.spec, fadd(self.spec, self.a, other.a))

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.spec, fsub(self.spec, self.a, other.a))

    def __neg__(self):
        return Matrix(self.spec, fneg(self.spec, self.a))

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch {self.a.shape} @ {other.a.shape}")
        return Matrix(self.spec, fmatmul(self.spec, self.a, other.a))

    def scale(self, s) -> "Matrix":
        s = self.spec.element(s)
        return Matrix(self.spec, fscale(self.spec, self.a, s.idx))

    def transpose(self):
        return Matrix(self.spec, self.a.T.copy())

    def pow(self, e: int):
        if self.rows != self.cols:
            raise ValueError("pow needs a square matrix")
        return Matrix(self.spec, fpow(self.spec, self.a, e))

    def frobenius(self):
        """Entrywise x -> x^p."""
        if self.spec.k == 1:
            return Matrix(self.spec, self.a.copy())
        return Matrix(self.spec, self.spec.FROB[self.a])

    def trace(self) -> FieldElement:
        t = 0
        for i in range(min(self.rows, self.cols)):
            t = fadd(self.spec, np.int64(t), self.a[i, i])
        return FieldElement(self.spec, int(t))

    def is_zero(self):
        return not np.any(self.a)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.spec == other.spec
                and self.a.shape == other.a.shape and bool(np.all(self.a == other.a)))

    def __hash__(self):
        return hash((self.spec, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.spec}, {self.to_lists()})"

    # -- elimination -------------------------------------------------------------

    def rref(self):
        R, piv = frref(self.spec, self.a)
        return Matrix(self.spec, R), piv

    def rank(self) -> int:
        return frank(self.spec, self.a)

    def right_kernel(self) -> "Subspace":
        return Subspace.from_rows(self.spec, self.cols, fkernel(self.spec, self.a))

    def solve(self, b):
        """Solve A x = b: (particular solution vector or None, kernel Subspace)."""
        b = np.asarray([v.idx if isinstance(v, FieldElement) else int(v) % self.spec.p for v in b],
                       dtype=np.int64)
        if b.shape[0] != self.rows:
            raise ValueError("right-hand side has wrong length")
        x = fsolve(self.spec, self.a, b)
        ker = self.right_kernel()
        if x is None:
            return None, ker
        return [FieldElement(self.spec, int(v)) for v in x], ker

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self.a, np.eye(n, dtype=np.int64)], axis=1)
        R, piv = frref(self.spec, aug)
        if list(piv[:n]) != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(self.spec, R[:, n:])

    def charpoly(self):
        """Characteristic polynomial coefficients, ascending; monic of degree n."""
        return [FieldElement(self.spec, int(c)) for c in fcharpoly(self.spec, self.a)]


def fcharpoly(spec: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Charpoly of a square code matrix via Hessenberg reduction. Ascending coeffs."""
    n = A.shape[0]
    if n != A.shape[1]:
        raise ValueError("charpoly needs a square matrix")
    p = spec.p
    H = np.array(A, dtype=np.int64, copy=True)
    if n == 0:
        return np.array([1], dtype=np.int64)
    # similarity reduction to upper Hessenberg, valid over any field
    for c in range(n - 2):
        nz = np.nonzero(H[c + 1:, c])[0]
        if nz.size == 0:
            continue
        i = c + 1 + int(nz[0])
        if i != c + 1:
            H[[c + 1, i]] = H[[i, c + 1]]
            H[:, [c + 1, i]] = H[:, [i, c + 1]]
        if spec.k == 1:
            inv = pow(int(H[c + 1, c]), p - 2, p)
            f = (H[c + 2:, c] * inv) % p
            if np.any(f):
                H[c + 2:] = (H[c + 2:] - np.outer(f, H[c + 1])) % p
                H[:, c + 1] = (H[:, c + 1] + H[:, c + 2:] @ f) % p
        else:
            inv = int(spec.INV[H[c + 1, c]])
            f = spec.MUL[H[c + 2:, c], inv]
            if np.any(f):
                H[c + 2:] = spec.SUB[H[c + 2:], spec.MUL[f[:, None], H[c + 1][None, :]]]
                extra = fmatmul(spec, H[:, c + 2:], f[:, None])[:, 0]
                H[:, c + 1] = spec.ADD[H[:, c + 1], extra]
    # recurrence on leading principal minors of (lambda I - H)
    polys = [np.array([1], dtype=np.int64)]
    mulc = (lambda poly, s: (poly * s) % p) if spec.k == 1 else (lambda poly, s: spec.MUL[poly, s])
    addp = (lambda a, b: _padd(spec, a, b))
    for m in range(1, n + 1):
        prev = polys[m - 1]
        shifted = np.concatenate([np.zeros(1, dtype=np.int64), prev])  # lambda * prev
        term = addp(shifted, mulc(prev, int(fneg(spec, H[m - 1, m - 1]))))
        run = 1
        for i in range(m - 1, 0, -1):
            sub = int(H[i, i - 1])
            if spec.k == 1:
                run = (run * sub) % p
            else:
                run = int(spec.MUL[run, sub])
            if run == 0:
                break
            coef = int(H[i - 1, m - 1])
            if coef == 0:
                continue
            if spec.k == 1:
                s = (-coef * run) % p
            else:
                s = int(spec.NEG[spec.MUL[coef, run]])
            term = addp(term, mulc(polys[i - 1], s))
        polys.append(term)
    out = np.zeros(n + 1, dtype=np.int64)
    out[: len(polys[n])] = polys[n]
    return out


def _padd(spec, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    if spec.k == 1:
        out[: len(b)] = (out[: len(b)] + b) % spec.p
    else:
        out[: len(b)] = spec.ADD[out[: len(b)], b]
    return out


class Subspace:
    """A subspace of F^n in canonical reduced-row-echelon representation."""

    __slots__ = ("spec", "ambient", "mat", "pivots")

    def __init__(self, spec, ambient, mat, pivots):
        self.spec = spec
        self.ambient = ambient
        self.mat = mat          # (dim, ambient) RREF code array, no zero rows
        self.pivots = pivots

    @classmethod
    def from_rows(cls, spec, ambient, rows) -> "Subspace":
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient)
        R, piv = frref(spec, rows)
        return cls(spec, ambient, R[: len(piv)].copy(), piv)

    @classmethod
    def zero(cls, spec, ambient):
        return cls(spec, ambient, np.zeros((0, ambient), dtype=np.int64), ())

    @classmethod
    def full(cls, spec, ambient):
        return cls(spec, ambient, np.eye(ambient, dtype=np.int64), tuple(range(ambient)))

    @property
    def dim(self):
        return self.mat.shape[0]

    def basis_matrix(self) -> Matrix:
        return Matrix(self.spec, self.mat.copy())

    def contains_vector(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        red = _reduce_rows_against(self.spec, v, self.mat, self.pivots)
        return not np.any(red)

    def reduce_vector(self, v) -> np.ndarray:
        return _reduce_rows_against(self.spec, np.atleast_2d(np.asarray(v, dtype=np.int64)),
                                    self.mat, self.pivots)[0]

    def contains(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains_vector(r) for r in other.mat)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_rows(self.spec, self.ambient,
                                  np.concatenate([self.mat, other.mat], axis=0))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        n = self.ambient
        # Zassenhaus: rows [u | u] and [v | 0]; rows of the echelon form whose
        # left half vanishes have right halves spanning the intersection.
        top = np.concatenate([self.mat, self.mat], axis=1)
        bot = np.concatenate([other.mat, np.zeros_like(other.mat)], axis=1)
        R, piv = frref(self.spec, np.concatenate([top, bot], axis=0))
        rows = []
        for i in range(len(piv)):
            if not np.any(R[i, :n]):
                rows.append(R[i, n:])
        if not rows:
            return Subspace.zero(self.spec, n)
        return Subspace.from_rows(self.spec, n, np.array(rows))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.spec == other.spec
                and self.ambient == other.ambient and self.dim == other.dim
                and bool(np.all(self.mat == other.mat)))

    def __hash__(self):
        return hash((self.spec, self.ambient, self.mat.tobytes()))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F^{self.ambient})"


class SubspaceOps:
    """Result bundle for the pairwise subspace operations."""

    def __init__(self, sum_, intersection, containment):
        self.sum = sum_
        self.intersection = intersection
        self.containment = containment


def solve_linear(A: Matrix, b):
    """Particular solution of A x = b (or None) together with the kernel."""
    return A.solve(b)


def subspace_ops(U: Subspace, V: Subspace) -> SubspaceOps:
    """Sum, intersection and containment (U <= V) in canonical form."""
    return SubspaceOps(U.sum(V), U.intersect(V), V.contains(U))
