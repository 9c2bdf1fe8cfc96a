"""Exact arithmetic in GF(p^k) for odd primes p.

Elements are stored as integer codes: the element with polynomial
coefficients (c_0, ..., c_{k-1}) over GF(p) has code sum(c_i * p^i).  Codes
below p therefore mean the same thing in every extension of GF(p), which is
what lets prime-field data (structure constants, p-characters) be used
verbatim inside extension-field computations.

Each FieldSpec precomputes full addition/multiplication/inverse tables, so
all arithmetic is table lookups; numpy fancy indexing gives vectorised
versions for the linear-algebra layer.
"""

from __future__ import annotations

import functools

import numpy as np

from .config import GuardExceeded

# Largest field materialised with full q x q tables.
FIELD_SIZE_GUARD = 2048


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- dense polynomials over GF(p), ascending int coefficient lists ---------

def _ptrim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and _ptrim(a):
        a = _ptrim(a)
        if len(a) - 1 < dm:
            break
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return _ptrim(a)


def _pmulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a, e, m, p):
    r = [1]
    a = _pmod(a, m, p)
    while e:
        if e & 1:
            r = _pmulmod(r, a, m, p)
        a = _pmulmod(a, a, m, p)
        e >>= 1
    return r


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = _ptrim(list(a))
        while len(r) >= len(b):
            c = (r[-1] * inv) % p
            shift = len(r) - len(b)
            for i, bi in enumerate(b):
                r[shift + i] = (r[shift + i] - c * bi) % p
            r = _ptrim(r)
        a, b = b, r
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Monic-polynomial irreducibility over GF(p).

    Checks that gcd(x^(p^j) - x, f) is constant for all j <= deg(f)/2, i.e.
    f has no irreducible factor of degree <= deg(f)/2.
    """
    m = list(modulus)
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        return False
    if k == 1:
        return True
    xq = [0, 1]
    for _ in range(1, k // 2 + 1):
        xq = _ppowmod(xq, p, m, p)
        d = list(xq)
        while len(d) < 2:
            d.append(0)
        d[1] = (d[1] - 1) % p  # x^(p^j) - x
        g = _pgcd(d, m, p)
        if len(g) > 1:
            return False
    return True


def canonical_modulus(p: int, k: int):
    """The fixed modulus for GF(p^k): the lexicographically smallest monic
    irreducible of degree k (ordered by the coefficient tuple (c_0..c_{k-1})).
    Recorded in every serialised report so results are reproducible."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        coeffs = [(code // p ** i) % p for i in range(k)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldSpec:
    """A concrete realisation of GF(p^k) with lookup-table arithmetic."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 is not supported (odd p required)")
        if p < 3:
            raise ValueError("p must be an odd prime >= 3")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** k
        if q > FIELD_SIZE_GUARD:
            raise GuardExceeded(f"GF({p}^{k}) exceeds the table guard ({q} > {FIELD_SIZE_GUARD})")
        if modulus is None:
            modulus = canonical_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus[:-1]) + (1,)
        if len(modulus) != k + 1:
            raise ValueError("modulus degree does not match k")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # The tables: DIGITS (q,k), ADD/SUB/MUL (q,q), NEG/INV/FROB/PROOT (q,).
    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        powers = p ** np.arange(k, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // powers[None, :]) % p
        self.DIGITS = digits
        self._powers = powers

        add_digits = (digits[:, None, :] + digits[None, :, :]) % p
        self.ADD = add_digits @ powers
        self.NEG = ((-digits) % p) @ powers
        self.SUB = self.ADD[:, self.NEG]

        # x^(k+i) mod modulus, rows i = 0..k-2, as digit vectors
        red = np.zeros((max(k - 1, 0), k), dtype=np.int64)
        rep = [(-c) % p for c in self.modulus[:-1]]  # x^k == rep
        cur = list(rep)
        for i in range(k - 1):
            red[i] = cur
            over = cur[-1]  # coefficient that lands on x^k after the shift
            cur = [0] + cur[:-1]
            cur = [(cur[j] + over * rep[j]) % p for j in range(k)]
        conv = np.einsum("ai,bj->abij", digits, digits)
        full = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                full[:, :, i + j] += conv[:, :, i, j]
        prod = full[:, :, :k].copy()
        for d in range(k, 2 * k - 1):
            prod += full[:, :, d][:, :, None] * red[d - k][None, None, :]
        self.MUL = (prod % p) @ powers

        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hit = np.nonzero(self.MUL[a] == 1)[0]
            if hit.size != 1:
                raise ValueError(f"modulus {self.modulus} does not define a field")
            inv[a] = hit[0]
        self.INV = inv

        frob = np.arange(q, dtype=np.int64)
        for a in range(q):
            frob[a] = self.pow_index(a, p)
        self.FROB = frob
        proot = np.zeros(q, dtype=np.int64)
        proot[frob] = np.arange(q)
        self.PROOT = proot

    # -- index-level arithmetic (used by the matrix layer) ------------------

    def pow_index(self, a: int, e: int) -> int:
        if e < 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            a, e = int(self.INV[a]), -e
        r, base = 1, a
        while e:
            if e & 1:
                r = int(self.MUL[r, base])
            base = int(self.MUL[base, base])
            e >>= 1
        return r

    def encode(self, coeffs) -> int:
        return int(sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs)))

    def decode(self, idx: int):
        return tuple(int(d) for d in self.DIGITS[idx])

    # -- element factories ---------------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec is self:
                return value
            if value.spec.p != self.p:
                raise ValueError("cannot mix fields of different characteristic")
            if value.spec.k == 1:
                return FieldElement(self, value.idx)
            if self.k == 1 and value.idx < self.p:
                return FieldElement(self, value.idx)
            raise ValueError("no canonical embedding between these fields")
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.p)
        return FieldElement(self, self.encode(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def random_element(self, rng) -> "FieldElement":
        return FieldElement(self, rng.randrange(self.q))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FieldSpec:
    """Shared FieldSpec with the canonical modulus for (p, k)."""
    return FieldSpec(p, k)


class FieldElement:
    """An element of a FieldSpec, identified by its integer code."""

    __slots__ = ("spec", "idx")

    def __init__(self, spec: FieldSpec, idx: int):
        self.spec = spec
        self.idx = int(idx)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec is self.spec or other.spec == self.spec:
                return self, other
            # allow prime field into extension
            if other.spec.k == 1 and other.spec.p == self.spec.p:
                return self, FieldElement(self.spec, other.idx)
            if self.spec.k == 1 and self.spec.p == other.spec.p:
                return FieldElement(other.spec, self.idx), other
            raise ValueError("elements of incompatible fields")
        if isinstance(other, (int, np.integer)):
            return self, FieldElement(self.spec, int(other) % self.spec.p)
        return NotImplemented, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.spec, a.spec.ADD[a.idx, b.idx])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.NEG[self.idx])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.spec, a.spec.SUB[a.idx, b.idx])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.spec, a.spec.MUL[a.idx, b.idx])

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if b.idx == 0:
            raise ZeroDivisionError("division by zero field element")
        return FieldElement(a.spec, a.spec.MUL[a.idx, a.spec.INV[b.idx]])

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow_index(self.idx, e))

    def inverse(self):
        if self.idx == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.spec, self.spec.INV[self.idx])

    def frobenius(self):
        """The field automorphism x -> x^p."""
        return FieldElement(self.spec, self.spec.FROB[self.idx])

    def pth_root(self):
        return FieldElement(self.spec, self.spec.PROOT[self.idx])

    def is_zero(self):
        return self.idx == 0

    def coeffs(self):
        return self.spec.decode(self.idx)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if self.spec.p != other.spec.p:
                return False
            if self.spec == other.spec:
                return self.idx == other.idx
            # across different extensions only prime-subfield constants compare equal
            return self.idx == other.idx and self.idx < self.spec.p
        if isinstance(other, (int, np.integer)):
            return self.idx < self.spec.p and self.idx == int(other) % self.spec.p
        return NotImplemented

    def __hash__(self):
        # prime-subfield elements hash the same in every extension
        if self.idx < self.spec.p:
            return hash((self.spec.p, self.idx))
        return hash((self.spec.p, self.spec.k, self.idx))

    def __int__(self):
        if self.spec.k > 1 and self.idx >= self.spec.p:
            raise ValueError("not a prime-field element")
        return self.idx

    def __repr__(self):
        if self.spec.k == 1:
            return str(self.idx)
        if self.idx == 0:
            return "[0]"
        parts = []
        for i, c in enumerate(self.coeffs()):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                g = "g" if i == 1 else f"g^{i}"
                parts.append(g if c == 1 else f"{c}{g}")
        return "[" + "+".join(parts) + "]"


def frobenius_pow(x: FieldElement) -> FieldElement:
    """x -> x^p, the Frobenius automorphism fixing GF(p)."""
    return x.frobenius()
