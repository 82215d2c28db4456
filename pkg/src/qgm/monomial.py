"""Squarefree monomial ideal combinatorics.

An ideal is stored as the antichain of supports of its minimal
squarefree generators.  A monomial prime (generated by a set of
variables) contains the ideal exactly when its variable set meets every
generator support, so minimal primes are the minimal hitting sets of
the generator family.
"""

from __future__ import annotations

from .exactlin import DimensionMismatch


class SquarefreeIdeal:
    """Minimalized set of generator supports over a fixed variable count."""

    __slots__ = ("num_vars", "generators")

    def __init__(self, num_vars: int, generators):
        if num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        self.num_vars = num_vars
        supports = []
        for g in generators:
            s = frozenset(int(v) for v in g)
            if any(v < 0 or v >= num_vars for v in s):
                raise ValueError("generator variable out of range")
            supports.append(s)
        self.generators = _antichain(supports)

    def is_zero(self) -> bool:
        return not self.generators

    def __eq__(self, other):
        return (isinstance(other, SquarefreeIdeal)
                and self.num_vars == other.num_vars
                and self.generators == other.generators)

    def __repr__(self):
        return f"SquarefreeIdeal({self.num_vars} vars, {len(self.generators)} generators)"

    def to_json(self) -> dict:
        return {"numVars": self.num_vars,
                "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data) -> "SquarefreeIdeal":
        return cls(data["numVars"], data["generators"])


class MonomialPrime:
    """Prime generated by a set of variables."""

    __slots__ = ("num_vars", "variables")

    def __init__(self, num_vars: int, variables):
        self.num_vars = num_vars
        s = frozenset(int(v) for v in variables)
        if any(v < 0 or v >= num_vars for v in s):
            raise ValueError("variable out of range")
        self.variables = tuple(sorted(s))

    def __eq__(self, other):
        return (isinstance(other, MonomialPrime)
                and self.num_vars == other.num_vars
                and self.variables == other.variables)

    def __hash__(self):
        return hash((self.num_vars, self.variables))

    def __repr__(self):
        return f"MonomialPrime({list(self.variables)})"


def _antichain(supports):
    """Inclusion-minimal supports, canonically sorted."""
    keep = []
    for s in sorted(set(supports), key=lambda t: (len(t), sorted(t))):
        if not any(k <= s for k in keep):
            keep.append(s)
    return tuple(sorted((tuple(sorted(s)) for s in keep)))


def minimalize(num_vars: int, generators) -> SquarefreeIdeal:
    return SquarefreeIdeal(num_vars, generators)


def contains_ideal(p: MonomialPrime, ideal: SquarefreeIdeal) -> bool:
    """True when the prime contains the ideal, i.e. its variable set
    meets every generator support."""
    if p.num_vars != ideal.num_vars:
        raise DimensionMismatch("prime and ideal live over different variable counts")
    pv = set(p.variables)
    return all(pv.intersection(g) for g in ideal.generators)


def sum_prime(p: MonomialPrime, q: MonomialPrime) -> MonomialPrime:
    """Prime generated by the union of the two variable sets."""
    if p.num_vars != q.num_vars:
        raise DimensionMismatch("primes live over different variable counts")
    return MonomialPrime(p.num_vars, set(p.variables) | set(q.variables))


def minimal_primes(ideal: SquarefreeIdeal):
    """All minimal primes of a squarefree monomial ideal.

    These are the inclusion-minimal hitting sets of the generator
    supports, enumerated by branch and bound: branch on the lowest
    uncovered generator, ban already-branched variables to avoid
    duplicates, and prune any partial set in which some chosen variable
    no longer hits a generator privately (such a set dominates no
    minimal transversal).  Output is sorted lexicographically on the
    sorted variable lists.
    """
    gens = [frozenset(g) for g in ideal.generators]
    if not gens:
        # the zero ideal: its single minimal prime is the zero prime
        return [MonomialPrime(ideal.num_vars, ())]
    if any(not g for g in gens):
        # the unit ideal is contained in no prime
        return []
    masks = [0] * len(gens)
    for i, g in enumerate(gens):
        for v in g:
            masks[i] |= 1 << v
    results = []

    def has_private(chosen_mask, v_bit):
        # some generator is hit by v_bit alone among the chosen variables
        rest = chosen_mask & ~v_bit
        return any(m & v_bit and not (m & rest) for m in masks)

    def rec(chosen, chosen_mask, banned_mask):
        uncovered = next((m for m in masks if not (m & chosen_mask)), None)
        if uncovered is None:
            results.append(tuple(sorted(chosen)))
            return
        candidates = uncovered & ~banned_mask
        local_ban = banned_mask
        while candidates:
            low = candidates & -candidates
            candidates &= candidates - 1
            new_mask = chosen_mask | low
            # dominance prune: every chosen variable must keep a private generator
            if all(has_private(new_mask, 1 << u) for u in chosen):
                chosen.append(low.bit_length() - 1)
                rec(chosen, new_mask, local_ban)
                chosen.pop()
            local_ban |= low

    rec([], 0, 0)
    return [MonomialPrime(ideal.num_vars, t) for t in sorted(results)]
