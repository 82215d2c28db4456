"""The rank-seven hyperbolic lattice of a marked cubic surface, Euler
pairings of numerical K-classes, the nine-bundle collection attached to
the quiver, and mutation of collections at the class level.

A class is stored as (rank, first Chern class, holomorphic Euler
characteristic).  The Euler pairing below is normalized so that on line
bundle classes it agrees with chi(O(D2 - D1)) = 1 + D(D + delta)/2 for
D = D2 - D1, where delta is the anticanonical class; the three anchors
it is validated against are the line-bundle value above, the
one-dimensional hom spaces between consecutive columns of the
collection, and chi = 1 for the structure-sheaf-twist classes of the
six contracted lines.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations


class ChainMismatch(ValueError):
    """A mutated collection failed to match its expected classes."""


RANK = 7
DELTA = (3, -1, -1, -1, -1, -1, -1)


def dot(u, v) -> int:
    """The intersection form: e0^2 = 1, ei^2 = -1, mixed products 0."""
    if len(u) != RANK or len(v) != RANK:
        raise ValueError("lattice vectors have rank 7")
    return u[0] * v[0] - sum(u[i] * v[i] for i in range(1, RANK))


def basis_vector(i: int):
    return tuple(1 if j == i else 0 for j in range(RANK))


class KClass:
    """Numerical class (rank, c1, chi)."""

    __slots__ = ("rank", "c1", "chi")

    def __init__(self, rank: int, c1, chi: int):
        self.rank = int(rank)
        self.c1 = tuple(int(v) for v in c1)
        if len(self.c1) != RANK:
            raise ValueError("c1 must have rank 7")
        self.chi = int(chi)

    def key(self):
        return (self.rank, self.c1, self.chi)

    def __eq__(self, other):
        return isinstance(other, KClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __neg__(self):
        return KClass(-self.rank, tuple(-v for v in self.c1), -self.chi)

    def __add__(self, other):
        return KClass(self.rank + other.rank,
                      tuple(a + b for a, b in zip(self.c1, other.c1)),
                      self.chi + other.chi)

    def scale(self, n: int) -> "KClass":
        return KClass(n * self.rank, tuple(n * v for v in self.c1), n * self.chi)

    def __repr__(self):
        return f"KClass(rank={self.rank}, c1={self.c1}, chi={self.chi})"


def line_bundle(divisor) -> KClass:
    """Class of O(D): rank one with chi = 1 + D(D + delta)/2."""
    d = tuple(int(v) for v in divisor)
    val = Fraction(dot(d, d) + dot(d, DELTA), 2)
    if val.denominator != 1:
        raise ValueError("divisor has non-integral Euler characteristic")
    return KClass(1, d, 1 + int(val))


def line_on_surface_class(i: int) -> KClass:
    """Class of the degree -1 twist of the structure sheaf of the i-th
    contracted line: rank 0, c1 = e_i, chi = 0."""
    if not 1 <= i <= 6:
        raise ValueError("line index must be in 1..6")
    return KClass(0, basis_vector(i), 0)


def euler_pairing(e: KClass, f: KClass) -> int:
    """Bilinear Euler form on numerical classes.

    Derived from surface Riemann-Roch with chi substituted for the
    second Chern character; on rank-one classes it reduces to the
    line-bundle formula.
    """
    return (e.rank * f.chi + f.rank * e.chi - e.rank * f.rank
            - dot(e.c1, f.c1) - dot(e.c1, DELTA) * f.rank)


def _divisor(*terms):
    v = [0] * RANK
    for coeff, idx in terms:
        v[idx] += coeff
    return tuple(v)


SUM_LINES = _divisor(*[(1, i) for i in range(1, 7)])


def collection_classes():
    """The nine line-bundle classes of the collection, in the vertex
    order (0,0),(1,0),(2,0),(0,1),(1,1),(2,1),(0,2),(1,2),(2,2)."""
    return [
        line_bundle(_divisor()),
        line_bundle(_divisor((-2, 0), *[(1, i) for i in range(1, 7)])),
        line_bundle(_divisor((-1, 0), (1, 1), (1, 2), (1, 3))),
        line_bundle(_divisor((1, 1))),
        line_bundle(_divisor((1, 2))),
        line_bundle(_divisor((1, 3))),
        line_bundle(_divisor((1, 0), (-1, 4))),
        line_bundle(_divisor((1, 0), (-1, 5))),
        line_bundle(_divisor((1, 0), (-1, 6))),
    ]


def gram_matrix():
    classes = collection_classes()
    return [[euler_pairing(a, b) for b in classes] for a in classes]


def expected_gram():
    """Unitriangular block form: 1 on the diagonal, 1 between
    consecutive columns, 2 from the first column to the last, zero
    within columns and backwards."""
    g = [[0] * 9 for _ in range(9)]
    for a in range(9):
        for b in range(9):
            ca, cb = a // 3, b // 3
            if a == b:
                g[a][b] = 1
            elif cb - ca == 1:
                g[a][b] = 1
            elif ca == 0 and cb == 2:
                g[a][b] = 2
    return g


def verify_gram_matrix() -> bool:
    return gram_matrix() == expected_gram()


def tensor_canonical(e: KClass) -> KClass:
    """Class of the twist by the canonical bundle: rank is unchanged,
    c1 drops by rank * delta, chi drops by c1 . delta."""
    return KClass(e.rank,
                  tuple(a - e.rank * d for a, d in zip(e.c1, DELTA)),
                  e.chi - dot(e.c1, DELTA))


def left_mutate_class(e: KClass, f: KClass) -> KClass:
    """[L_E F] = [F] - chi(E, F) [E]."""
    return f + e.scale(-euler_pairing(e, f))


def right_mutate_class(e: KClass, f: KClass) -> KClass:
    """[R_F E] = chi(E, F) [F] - [E]."""
    return f.scale(euler_pairing(e, f)) + (-e)


def mutate_collection_left(classes, i: int):
    """Left mutation at position i (1-based): (E_i, E_{i+1}) becomes
    (L_{E_i} E_{i+1}, E_i)."""
    out = list(classes)
    out[i - 1], out[i] = left_mutate_class(classes[i - 1], classes[i]), classes[i - 1]
    return out


def mutate_collection_right(classes, i: int):
    """Right mutation at position i (1-based): (E_i, E_{i+1}) becomes
    (E_{i+1}, R_{E_{i+1}} E_i)."""
    out = list(classes)
    out[i - 1], out[i] = classes[i], right_mutate_class(classes[i - 1], classes[i])
    return out


# ---------------------------------------------------------------------------
# root count in the orthogonal complement of delta

def root_system_check(bound: int = 3) -> dict:
    """Count the (-2)-vectors orthogonal to delta inside the coefficient
    box |a_i| <= bound, and compare the Gram matrix of the standard
    simple-root basis of that complement with the negated E6 Cartan
    matrix."""
    roots = []

    def rec(idx, vec, pair_sum, sq):
        # pair_sum tracks delta . r so far; sq tracks -r.r contribution of e_1..
        if idx == RANK:
            if pair_sum == 0 and vec[0] * vec[0] - sq == -2:
                roots.append(tuple(vec))
            return
        for a in range(-bound, bound + 1):
            nsq = sq + a * a
            if nsq > vec[0] * vec[0] + 2:
                if a > 0:
                    break
                continue
            vec.append(a)
            rec(idx + 1, vec, pair_sum + a, nsq)
            vec.pop()

    for a0 in range(-bound, bound + 1):
        rec(1, [a0], 3 * a0, 0)

    simple = [
        _divisor((1, 1), (-1, 2)),
        _divisor((1, 2), (-1, 3)),
        _divisor((1, 3), (-1, 4)),
        _divisor((1, 4), (-1, 5)),
        _divisor((1, 5), (-1, 6)),
        _divisor((1, 0), (-1, 1), (-1, 2), (-1, 3)),
    ]
    gram = [[dot(u, v) for v in simple] for u in simple]
    cartan = _e6_cartan()
    neg_cartan = [[-v for v in row] for row in cartan]
    return {
        "root_count": len(roots),
        "roots": sorted(roots),
        "basis_gram": gram,
        "cartan_match": gram == neg_cartan,
        "all_orthogonal": all(dot(r, DELTA) == 0 for r in roots),
    }


def _e6_cartan():
    """Cartan matrix for the simple-root chain 1-2-3-4-5 with node 6
    attached to node 3."""
    edges = {(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)}
    c = [[0] * 6 for _ in range(6)]
    for i in range(6):
        c[i][i] = 2
    for a, b in edges:
        c[a - 1][b - 1] = c[b - 1][a - 1] = -1
    return c


# ---------------------------------------------------------------------------
# the mutation chain from the blow-up collection to the quiver collection

def _chain_stages():
    """Listed collections for stages 2..7 and the mutation recipe that
    produces each from its predecessor."""
    o = line_bundle(_divisor())
    o_m2h = line_bundle(_divisor((-2, 0)))
    o_mh = line_bundle(_divisor((-1, 0)))
    lines = [line_on_surface_class(i) for i in range(1, 7)]
    dP = line_bundle
    stage1 = lines + [o_m2h, o_mh, o]
    listed = {
        2: [dP(_divisor((-2, 0), *[(1, i) for i in range(1, 7)]))] + lines + [o_mh, o],
        3: [dP(_divisor((-2, 0), *[(1, i) for i in range(1, 7)])), lines[0], lines[1],
            lines[2], o_mh,
            dP(_divisor((1, 4), (-1, 0))), dP(_divisor((1, 5), (-1, 0))),
            dP(_divisor((1, 6), (-1, 0))), o],
        4: [dP(_divisor((-2, 0), *[(1, i) for i in range(1, 7)])), lines[0], lines[1],
            lines[2], o_mh, o,
            dP(_divisor((1, 0), (-1, 4))), dP(_divisor((1, 0), (-1, 5))),
            dP(_divisor((1, 0), (-1, 6)))],
        5: [dP(_divisor((-2, 0), *[(1, i) for i in range(1, 7)])),
            dP(_divisor((-1, 0), (1, 1), (1, 2), (1, 3))), lines[0], lines[1], lines[2],
            o, dP(_divisor((1, 0), (-1, 4))), dP(_divisor((1, 0), (-1, 5))),
            dP(_divisor((1, 0), (-1, 6)))],
        6: [dP(_divisor((-2, 0), *[(1, i) for i in range(1, 7)])),
            dP(_divisor((-1, 0), (1, 1), (1, 2), (1, 3))), o,
            dP(_divisor((1, 1))), dP(_divisor((1, 2))), dP(_divisor((1, 3))),
            dP(_divisor((1, 0), (-1, 4))), dP(_divisor((1, 0), (-1, 5))),
            dP(_divisor((1, 0), (-1, 6)))],
        7: collection_classes(),
    }
    recipe = {
        2: [("L", 6), ("L", 5), ("L", 4), ("L", 3), ("L", 2), ("L", 1)],
        3: [("R", 7), ("R", 6), ("R", 5)],
        4: [("R", 8), ("R", 7), ("R", 6)],
        5: [("L", 4), ("L", 3), ("L", 2)],
        6: [("R", 5), ("R", 4), ("R", 3)],
        7: [("L", 2), ("L", 1)],
    }
    return stage1, listed, recipe


def mutation_chain_transcript():
    """Run the six mutation stages and compare each computed collection
    with its listed classes up to sign per entry.

    Mutation through a one-dimensional odd hom space shifts the mutated
    object, which negates its class; the listed collections are the
    unshifted sheaves, so class-level agreement holds exactly up to one
    sign per position.  The transcript records those signs.
    """
    stage1, listed, recipe = _chain_stages()
    current = list(stage1)
    stages = []
    for stage in range(2, 8):
        for kind, pos in recipe[stage]:
            if kind == "L":
                current = mutate_collection_left(current, pos)
            else:
                current = mutate_collection_right(current, pos)
        signs = []
        for pos, (got, want) in enumerate(zip(current, listed[stage]), start=1):
            if got == want:
                signs.append(1)
            elif got == -want:
                signs.append(-1)
            else:
                raise ChainMismatch(
                    f"stage {stage}, position {pos}: computed {got}, expected ±{want}")
        stages.append({"stage": stage, "signs": signs})
    return {"stages": stages, "final_matches_collection": True}


def verify_mutation_chain() -> bool:
    mutation_chain_transcript()
    return True


def within_block_permutation_invariance() -> bool:
    """The Gram verification does not depend on the order chosen inside
    each column of three: every combination of within-block permutations
    produces the same block-level matrix."""
    from itertools import product

    classes = collection_classes()
    base = expected_gram()
    for p0, p1, p2 in product(permutations(range(3)), repeat=3):
        reordered = []
        for block, perm in zip(range(3), (p0, p1, p2)):
            reordered.extend(classes[3 * block + p] for p in perm)
        got = [[euler_pairing(a, b) for b in reordered] for a in reordered]
        if got != base:
            return False
    return True
