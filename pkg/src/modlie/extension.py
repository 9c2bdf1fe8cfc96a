"""The twisted central extension of a restricted Lie algebra by the
multiplicative line, its splitting solver, and the idempotent system of the
group algebra of the extra central generator.

The extension l_chi keeps the bracket of l (with c central) and twists only
the p-operation: (a + t c)^[p] = a^[p] + (chi(a)^p + t^p) c, with c^[p] = c.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .config import GuardExceeded, SPLITTING_ENUM_GUARD
from .field import GF, FieldElement, FieldSpec
from .linalg import Subspace, fkernel, frref
from .liealg import (Functional, LieElement, Report, ReportCheck, RestrictedLieAlgebra,
                     SubalgebraDatum, centralizer, is_nilpotent_functional, p_power,
                     verify_restricted)


class CentralExtensionAlgebra:
    """l + Kc with the p-map twisted by chi; carrier basis = l's basis then c."""

    def __init__(self, base_algebra: RestrictedLieAlgebra, chi: Functional,
                 carrier: RestrictedLieAlgebra):
        self.base_algebra = base_algebra
        self.chi = chi
        self.carrier = carrier

    @property
    def c_index(self):
        return self.carrier.N - 1

    def embed(self, x: LieElement, c_coeff=0) -> LieElement:
        """a + t c in the carrier."""
        if x.parent is not self.base_algebra:
            raise ValueError("element of the wrong algebra")
        coords = np.zeros(self.carrier.N, dtype=np.int64)
        coords[: self.base_algebra.N] = x.coords
        if isinstance(c_coeff, FieldElement):
            coords[-1] = x.spec.element(c_coeff).idx
        else:
            coords[-1] = int(c_coeff) % x.spec.p
        return LieElement(self.carrier, x.spec, coords)

    def project(self, y: LieElement) -> LieElement:
        return LieElement(self.base_algebra, y.spec, y.coords[: self.base_algebra.N].copy())

    def c_element(self, spec=None) -> LieElement:
        return self.carrier.basis_element(self.c_index, spec)

    def __repr__(self):
        return f"CentralExtensionAlgebra({self.base_algebra.name}, chi={self.chi!r})"


def central_extension(l: RestrictedLieAlgebra, chi: Functional) -> CentralExtensionAlgebra:
    """Build l_chi and check it is restricted."""
    if chi.parent is not l:
        raise ValueError("functional on the wrong algebra")
    if chi.spec.k != 1:
        raise ValueError("the twisting functional must take values in GF(p)")
    N = l.N
    p = l.base.p
    C = np.zeros((N + 1, N + 1, N + 1), dtype=np.int64)
    C[:N, :N, :N] = l.C
    pb = np.zeros((N + 1, N + 1), dtype=np.int64)
    pb[:N, :N] = l.pbasis
    # (e_i)^[p] picks up chi(e_i)^p c; over GF(p) the p-th power is the value itself
    pb[:N, N] = chi.coords % p
    pb[N, N] = 1  # c^[p] = c
    carrier = RestrictedLieAlgebra(f"{l.name}_chi", l.base, C, pb,
                                   names=l.names + ["c"], verify=True)
    return CentralExtensionAlgebra(l, chi, carrier)


def find_splittings(E: CentralExtensionAlgebra, k_max: int = 3, rng=None,
                    samples: int = 100):
    """All functionals beta with coefficients in GF(p^k), k <= k_max, that
    vanish on [l, l] and satisfy beta(y^[p]) = chi(y)^p + beta(y)^p on the
    basis; the section y -> y + beta(y)c of each solution is re-verified on
    random elements.

    The answer is exhaustive for the stated coefficient fields only; an empty
    list does not exclude solutions over larger fields.
    """
    l = E.base_algebra
    chi = E.chi
    p = l.base.p
    rng = rng or random.Random(20_24)

    # linear condition: beta vanishes on the span of all brackets
    brackets = l.C.reshape(l.N * l.N, l.N) % p
    R, piv = frref(l.base, brackets)
    bspan = R[: len(piv)]
    ker = fkernel(l.base, bspan) if len(piv) else np.eye(l.N, dtype=np.int64)
    d = ker.shape[0]

    found = []
    seen = set()
    for k in range(1, k_max + 1):
        spec = GF(p, k)
        if d > 0 and spec.q ** d > SPLITTING_ENUM_GUARD:
            raise GuardExceeded(
                f"splitting search needs {spec.q ** d} candidates (guard {SPLITTING_ENUM_GUARD})")
        for combo in itertools.product(range(spec.q), repeat=d):
            coords = np.zeros(l.N, dtype=np.int64)
            for t, row in zip(combo, ker):
                if t:
                    coords = spec.ADD[coords, spec.MUL[int(t), row]]
            beta = Functional(l, spec, coords)
            if not _beta_p_condition(l, chi, beta):
                continue
            # skip solutions already reported over a proper subfield
            sub = _minimal_field_degree(spec, coords)
            if sub < k and k % sub == 0:
                continue
            key = (k, tuple(int(v) for v in coords))
            if key in seen:
                continue
            seen.add(key)
            _verify_section(E, beta, rng, samples)
            found.append(beta)
    return found


def _minimal_field_degree(spec: FieldSpec, coords) -> int:
    for sub in range(1, spec.k + 1):
        if spec.k % sub:
            continue
        frob = coords.copy()
        for _ in range(sub):
            frob = spec.FROB[frob]
        if not np.any(frob != coords):
            return sub
    return spec.k


def _beta_p_condition(l, chi, beta) -> bool:
    spec = beta.spec
    for i in range(l.N):
        lhs = beta(l.pbasis_element(i, spec))
        ci = FieldElement(spec, int(chi.coords[i]))
        rhs = ci ** spec.p + beta.value_on_basis(i) ** spec.p
        if lhs != rhs:
            return False
    return True


def _verify_section(E, beta, rng, samples):
    """The map y -> y + beta(y)c must preserve brackets and p-powers."""
    l = E.base_algebra
    spec = beta.spec
    for _ in range(samples):
        x = l.random_element(rng, spec)
        y = l.random_element(rng, spec)
        sx, sy = E.embed(x, beta(x)), E.embed(y, beta(y))
        br = x.bracket(y)
        if sx.bracket(sy) != E.embed(br, beta(br)):
            raise AssertionError("splitting candidate fails bracket preservation")
        px = p_power(x)
        if p_power(sx) != E.embed(px, beta(px)):
            raise AssertionError("splitting candidate fails p-power preservation")


def is_perfect(l: RestrictedLieAlgebra) -> bool:
    brackets = l.C.reshape(l.N * l.N, l.N)
    return len(frref(l.base, brackets)[1]) == l.N


# -- the idempotent system of K[c]/(c^p - c) -----------------------------------------


def _gm_mul(a, b, p):
    """Multiply coefficient vectors in GF(p)[c]/(c^p - c)."""
    out = [0] * p
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            e = i + j
            while e >= p:
                e -= p - 1  # c^p = c
            out[e] = (out[e] + ai * bj) % p
    return out


class NielsenElement:
    """One idempotent of the p-dimensional algebra K[c]/(c^p - c); eta is the
    value of c on the corresponding character."""

    __slots__ = ("p", "eta", "coeffs")

    def __init__(self, p, eta, coeffs):
        self.p = p
        self.eta = eta % p
        self.coeffs = tuple(int(v) % p for v in coeffs)
        if _gm_mul(self.coeffs, self.coeffs, p) != list(self.coeffs):
            raise AssertionError("not idempotent")
        if self.evaluate(self.eta) != 1:
            raise AssertionError("character value at its own idempotent is not 1")

    def evaluate(self, c_value) -> int:
        """Apply the character c -> c_value."""
        acc, cp = 0, 1
        for coeff in self.coeffs:
            acc = (acc + coeff * cp) % self.p
            cp = (cp * c_value) % self.p
        return acc

    def multiply(self, other: "NielsenElement"):
        return _gm_mul(self.coeffs, other.coeffs, self.p)

    def __repr__(self):
        return f"NielsenElement(eta={self.eta}, {list(self.coeffs)})"


def nielsen(eta: int, p: int) -> NielsenElement:
    """The idempotent attached to the character c -> eta:
    1 - c^(p-1) for eta = 0, and -sum_{n=1..p-1} c^n / eta^n otherwise."""
    eta = eta % p
    coeffs = [0] * p
    if eta == 0:
        coeffs[0] = 1
        coeffs[p - 1] = p - 1
    else:
        inv_eta = pow(eta, p - 2, p)
        power = 1
        for n in range(1, p):
            power = (power * inv_eta) % p
            coeffs[n] = (-power) % p
    return NielsenElement(p, eta, coeffs)


def nielsen_system(p: int):
    """All p idempotents; complete and orthogonal by construction checks."""
    return [nielsen(eta, p) for eta in range(p)]


# -- Harish-Chandra style checks at the Lie level -----------------------------------------


def harish_chandra_check(g: RestrictedLieAlgebra, chi: Functional) -> Report:
    """Nilpotency of chi, and that a -> a + 0c embeds the centralizer of chi
    into the extension compatibly with the p-maps."""
    checks = []
    nil = is_nilpotent_functional(chi)
    checks.append(ReportCheck("chi_nilpotent (centralizer inside ker chi)", nil,
                              None if nil else "centralizer element with chi != 0"))
    E = central_extension(g, chi)
    ok = True
    witness = None
    cz = centralizer(chi)
    for a in cz.basis_elements():
        lhs = p_power(E.embed(a))
        rhs = E.embed(p_power(a))
        if lhs != rhs:
            ok = False
            witness = repr(a)
            break
    checks.append(ReportCheck("centralizer embedding preserves [p]", ok, witness))
    return Report(checks)
