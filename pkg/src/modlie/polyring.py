"""Dense univariate polynomials over a FieldSpec, with enough factorization
(squarefree / distinct-degree / Cantor-Zassenhaus) to drive the module
chopper.  Coefficients are stored ascending as element codes."""

from __future__ import annotations

import numpy as np

from .field import FieldSpec
from .linalg import fmatmul


class Poly:
    __slots__ = ("spec", "c")

    def __init__(self, spec: FieldSpec, coeffs):
        self.spec = spec
        c = np.asarray(coeffs, dtype=np.int64)
        nz = np.nonzero(c)[0]
        self.c = c[: nz[-1] + 1].copy() if nz.size else np.zeros(0, dtype=np.int64)

    @classmethod
    def zero(cls, spec):
        return cls(spec, [])

    @classmethod
    def one(cls, spec):
        return cls(spec, [1])

    @classmethod
    def x(cls, spec):
        return cls(spec, [0, 1])

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return len(self.c) == 0

    def is_one(self):
        return len(self.c) == 1 and self.c[0] == 1

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.spec == other.spec
                and len(self.c) == len(other.c) and bool(np.all(self.c == other.c)))

    def __hash__(self):
        return hash((self.spec, self.c.tobytes()))

    def __repr__(self):
        return f"Poly({list(int(v) for v in self.c)})"

    def sort_key(self):
        return (self.degree, tuple(int(v) for v in self.c))

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.c)] = self.c
        b[: len(other.c)] = other.c
        if self.spec.k == 1:
            return Poly(self.spec, (a + b) % self.spec.p)
        return Poly(self.spec, self.spec.ADD[a, b])

    def __neg__(self):
        if self.spec.k == 1:
            return Poly(self.spec, (-self.c) % self.spec.p)
        return Poly(self.spec, self.spec.NEG[self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.spec)
        if self.spec.k == 1:
            return Poly(self.spec, np.convolve(self.c, other.c) % self.spec.p)
        out = np.zeros(len(self.c) + len(other.c) - 1, dtype=np.int64)
        for i, a in enumerate(self.c):
            if a:
                prod = self.spec.MUL[int(a), other.c]
                out[i: i + len(other.c)] = self.spec.ADD[out[i: i + len(other.c)], prod]
        return Poly(self.spec, out)

    def scale(self, s: int):
        if self.spec.k == 1:
            return Poly(self.spec, (self.c * s) % self.spec.p)
        return Poly(self.spec, self.spec.MUL[self.c, s])

    def monic(self):
        if self.is_zero():
            return self
        lead = int(self.c[-1])
        if lead == 1:
            return self
        inv = pow(lead, self.spec.p - 2, self.spec.p) if self.spec.k == 1 else int(self.spec.INV[lead])
        return self.scale(inv)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        spec = self.spec
        r = self.c.copy()
        d = other.degree
        lead = int(other.c[-1])
        inv = pow(lead, spec.p - 2, spec.p) if spec.k == 1 else int(spec.INV[lead])
        if self.degree < d:
            return Poly.zero(spec), Poly(spec, r)
        q = np.zeros(self.degree - d + 1, dtype=np.int64)
        for i in range(len(q) - 1, -1, -1):
            top = int(r[i + d])
            if top == 0:
                continue
            coef = (top * inv) % spec.p if spec.k == 1 else int(spec.MUL[top, inv])
            q[i] = coef
            if spec.k == 1:
                r[i: i + d + 1] = (r[i: i + d + 1] - coef * other.c) % spec.p
            else:
                r[i: i + d + 1] = spec.SUB[r[i: i + d + 1], spec.MUL[coef, other.c]]
        return Poly(spec, q), Poly(spec, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def pow_mod(self, e: int, mod: "Poly"):
        r = Poly.one(self.spec)
        base = self % mod
        while e:
            if e & 1:
                r = (r * base) % mod
            base = (base * base) % mod
            e >>= 1
        return r

    def derivative(self):
        if self.degree < 1:
            return Poly.zero(self.spec)
        if self.spec.k == 1:
            return Poly(self.spec, (self.c[1:] * np.arange(1, len(self.c))) % self.spec.p)
        out = self.c[1:].copy()
        for i in range(len(out)):
            out[i] = self.spec.MUL[int(out[i]), (i + 1) % self.spec.p]
        return Poly(self.spec, out)

    def eval_matrix(self, A: np.ndarray) -> np.ndarray:
        """Horner evaluation at a square code matrix."""
        n = A.shape[0]
        spec = self.spec
        out = np.zeros((n, n), dtype=np.int64)
        for coef in self.c[::-1]:
            out = fmatmul(spec, out, A)
            if coef:
                diag = np.arange(n)
                if spec.k == 1:
                    out[diag, diag] = (out[diag, diag] + int(coef)) % spec.p
                else:
                    out[diag, diag] = spec.ADD[out[diag, diag], int(coef)]
        return out

    # -- factorization ---------------------------------------------------------

    def squarefree_part(self):
        """Product of the distinct irreducible factors."""
        f = self.monic()
        if f.degree < 1:
            return f
        d = f.derivative()
        if d.is_zero():
            # f = g(x^p); take p-th roots of coefficients
            spec = f.spec
            idxs = np.arange(0, len(f.c), spec.p)
            root = f.c[idxs].copy()
            if spec.k > 1:
                root = spec.PROOT[root]
            return Poly(spec, root).squarefree_part()
        g = f.gcd(d)
        if g.degree == 0:
            return f
        return _sf_merge(f, g)

    def lcm_with(self, other):
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def distinct_degree(self):
        """For squarefree monic f: list of (product-of-degree-d-factors, d)."""
        spec = self.spec
        f = self.monic()
        out = []
        h = Poly.x(spec)
        d = 0
        while f.degree > 0:
            d += 1
            if 2 * d > f.degree:
                out.append((f, f.degree))
                break
            h = h.pow_mod(spec.q, f)
            g = (h - Poly.x(spec)).gcd(f)
            if g.degree > 0:
                out.append((g, d))
                f = (f // g).monic()
                h = h % f
        return out

    def equal_degree_split(self, d: int, rng):
        """Cantor-Zassenhaus split of a squarefree product of degree-d irreducibles."""
        spec = self.spec
        f = self.monic()
        if f.degree == d:
            return [f]
        e = (spec.q ** d - 1) // 2
        while True:
            a = Poly(spec, [rng.randrange(spec.q) for _ in range(f.degree)])
            if a.degree < 1:
                continue
            g = a.gcd(f)
            if 0 < g.degree < f.degree:
                pieces = [g, (f // g).monic()]
            else:
                b = a.pow_mod(e, f)
                g = (b - Poly.one(spec)).gcd(f)
                if not (0 < g.degree < f.degree):
                    continue
                pieces = [g, (f // g).monic()]
            out = []
            for piece in pieces:
                out.extend(piece.equal_degree_split(d, rng))
            return out

    def factor(self, rng):
        """Monic irreducible factors with multiplicities, deterministically sorted."""
        f = self.monic()
        if f.degree < 1:
            return []
        result = {}
        work = [f]
        while work:
            g = work.pop()
            sf = g.squarefree_part()
            for part, d in sf.distinct_degree():
                for irr in part.equal_degree_split(d, rng):
                    # multiplicity by repeated division
                    m = 0
                    h = f
                    q, r = h.divmod(irr)
                    while r.is_zero():
                        m += 1
                        h = q
                        q, r = h.divmod(irr)
                    result[irr] = m
            break
        return sorted(result.items(), key=lambda kv: kv[0].sort_key())


def _sf_merge(f: Poly, g: Poly) -> Poly:
    """Squarefree part of f given g = gcd(f, f')."""
    w = (f // g).monic()           # product of factors with multiplicity not divisible by p
    rest = g
    while True:
        h = rest.gcd(w)
        if h.degree == 0:
            break
        rest = rest // h
    # rest is now v(x)^p-ish part: factors whose multiplicity is divisible by p
    if rest.degree > 0:
        spec = f.spec
        idxs = np.arange(0, len(rest.c), spec.p)
        root = rest.c[idxs].copy()
        if spec.k > 1:
            root = spec.PROOT[root]
        w = w.lcm_with(Poly(spec, root).squarefree_part())
    return w.monic()
