"""Explicit size guards and global defaults.

All guards are hard constants here rather than scattered magic numbers;
computations that would exceed a guard raise GuardExceeded instead of
silently truncating.
"""


class GuardExceeded(Exception):
    """A computation was refused because it exceeds a configured size guard."""


class InvariantError(Exception):
    """An internal algebraic invariant failed; indicates a bug or bad input."""


# Largest reduced enveloping algebra (dimension p^N) materialised for
# primitive-element computation.
PRIMITIVES_DIM_GUARD = 3000

# Largest u(l_chi) (dimension p^(N+1)) for which block decomposition runs in
# full verification mode (regular-representation ranks); above this only the
# defining relations are checked.
BLOCKS_FULL_GUARD = 3000

# Module dimension above which radical() switches from the enveloping-algebra
# Jacobson-radical method to the homomorphism-based head computation.
RADICAL_ALGEBRA_DIM_GUARD = 24

# Brute-force submodule enumeration is only allowed up to this dimension.
RADICAL_BRUTE_DIM_GUARD = 12

# Hard cap on modules handled by the submodule machinery at all.
MODULE_DIM_GUARD = 512

# Candidate cap for the exhaustive p-semilinear search in find_splittings.
SPLITTING_ENUM_GUARD = 200_000

# Retry cap for randomised irreducibility certification.
MEATAXE_TRIES = 60
