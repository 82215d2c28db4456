"""Torus actions on coordinate spaces: stability, genericity, the
irrelevant ideal, and character-lattice bookkeeping.

A WeightAction records one integer weight row per coordinate.  A point
is semistable for a character exactly when the character lies in the
cone spanned by the weights of its nonzero coordinates, and stable when
it lies in the interior of that cone taken inside the span of the full
weight matrix.  For the signed-incidence action coming from a quiver,
the same verdicts are reproduced module-free from submodule supports
(king_stable / king_semistable below).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import quiver as quiver_mod
from .exactlin import (
    DimensionMismatch,
    IntMatrix,
    _int_row_reduce,
    _reduce_against_pivots,
    _strip_content,
    conic_feasible,
    integer_kernel_basis,
    rank,
    smith_normal_form,
    solve_unique,
    strictly_conic_feasible,
)
from .monomial import SquarefreeIdeal


class NonGenericCharacter(ValueError):
    """The character fails the genericity needed by the requested routine."""


class WeightAction:
    """Integer weight matrix of a torus action, one row per coordinate.

    The rank of the row span is fixed at construction and defines the
    ambient dimension for all interior (stability) tests.
    """

    __slots__ = ("weights", "ambient_rank")

    def __init__(self, weights: IntMatrix):
        if not isinstance(weights, IntMatrix):
            weights = IntMatrix(weights)
        self.weights = weights
        self.ambient_rank = rank(weights)

    @property
    def coordinates(self) -> int:
        return self.weights.rows

    def rows_for(self, support):
        return [self.weights.row(i) for i in sorted(support)]

    @classmethod
    def from_quiver(cls, q: quiver_mod.QuiverPresentation) -> "WeightAction":
        return cls(quiver_mod.incidence_weight_rows(q))

    @classmethod
    def from_json(cls, data) -> "WeightAction":
        return cls(IntMatrix(data["weights"]))

    def to_json(self) -> dict:
        return {"weights": [list(r) for r in self.weights.entries]}


def _check_character_entry(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"character entries must be ints, got {v!r}")
    return v


class StabilityCharacter:
    """An integer character of the acting torus."""

    __slots__ = ("theta",)

    def __init__(self, theta):
        self.theta = tuple(_check_character_entry(v) for v in theta)

    def sums_to_zero(self) -> bool:
        return sum(self.theta) == 0

    def __eq__(self, other):
        return isinstance(other, StabilityCharacter) and self.theta == other.theta

    def __repr__(self):
        return f"StabilityCharacter{self.theta}"


SPECIAL_THETA = StabilityCharacter((-11, -11, -11, 3, 3, 6, 7, 7, 7))


def character_from_json(data) -> StabilityCharacter:
    """Reads the "theta" field of a {"weights": ..., "theta": ...} record."""
    return StabilityCharacter(data["theta"])


class CoordinatePoint:
    """A point of the coordinate space, known by its support and
    optionally by exact nonzero values on that support."""

    __slots__ = ("dim", "support", "values")

    def __init__(self, dim: int, support, values=None):
        self.dim = dim
        self.support = frozenset(int(i) for i in support)
        if any(i < 0 or i >= dim for i in self.support):
            raise ValueError("support index out of range")
        if values is not None:
            vals = {}
            for i, v in values.items():
                i = int(i)
                if isinstance(v, float):
                    raise TypeError("floating-point values are not allowed")
                v = Fraction(v)
                if v == 0 or i not in self.support:
                    raise ValueError("values must be nonzero exactly on the support")
                vals[i] = v
            if set(vals) != self.support:
                raise ValueError("values must cover the support")
            self.values = vals
        else:
            self.values = None

    @classmethod
    def from_values(cls, values) -> "CoordinatePoint":
        values = list(values)
        support = [i for i, v in enumerate(values) if Fraction(v) != 0]
        return cls(len(values), support, {i: values[i] for i in support})

    def __repr__(self):
        return f"CoordinatePoint(dim={self.dim}, support={sorted(self.support)})"


def _theta_of(chi):
    if isinstance(chi, StabilityCharacter):
        return chi.theta
    return tuple(_check_character_entry(v) for v in chi)


# ---------------------------------------------------------------------------
# Hilbert-Mumford style tests (cone membership on the supported weights)

def hm_semistable(w: WeightAction, chi, p: CoordinatePoint) -> bool:
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols or p.dim != w.coordinates:
        raise DimensionMismatch("weight action, character, and point disagree")
    return conic_feasible(w.rows_for(p.support), theta) is not None


def hm_stable(w: WeightAction, chi, p: CoordinatePoint) -> bool:
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols or p.dim != w.coordinates:
        raise DimensionMismatch("weight action, character, and point disagree")
    return strictly_conic_feasible(w.rows_for(p.support), theta,
                                   ambient_rank=w.ambient_rank)


# ---------------------------------------------------------------------------
# submodule-based tests for quiver points of dimension vector (1,...,1)

def _closed_subset_sums(q: quiver_mod.QuiverPresentation, theta, p: CoordinatePoint):
    """Yield theta-sums of all vertex subsets closed under the arrows
    that are nonzero at the point.

    A subset S is closed when every supported arrow with source in S has
    its target in S; these are exactly the supports of submodules of the
    associated representation with one-dimensional vertex spaces.
    """
    n = len(q.vertices)
    if n > 20:
        raise ValueError("subset enumeration is limited to small quivers")
    out_mask = [0] * n
    for idx in p.support:
        _label, s, t = q.arrows[idx]
        out_mask[s] |= 1 << t
    reach = [0] * (1 << n)  # union of out-neighborhoods over the subset
    sums = [0] * (1 << n)
    for s_mask in range(1, 1 << n):
        low = s_mask & -s_mask
        v = low.bit_length() - 1
        rest = s_mask & (s_mask - 1)
        reach[s_mask] = reach[rest] | out_mask[v]
        sums[s_mask] = sums[rest] + theta[v]
    full = (1 << n) - 1
    for s_mask in range(1, 1 << n):
        if reach[s_mask] & ~s_mask & full:
            continue  # not closed
        yield s_mask, sums[s_mask], s_mask == full


def king_stable(q: quiver_mod.QuiverPresentation, chi, p: CoordinatePoint) -> bool:
    """Positivity of the character on every nonzero proper submodule.

    The full representation is excluded since the character sums to
    zero on it.
    """
    theta = _theta_of(chi)
    if len(theta) != len(q.vertices) or p.dim != len(q.arrows):
        raise DimensionMismatch("quiver, character, and point disagree")
    if sum(theta) != 0:
        raise ValueError("the character must sum to zero over the vertices")
    for _mask, s, is_full in _closed_subset_sums(q, theta, p):
        if not is_full and s <= 0:
            return False
    return True


def king_semistable(q: quiver_mod.QuiverPresentation, chi, p: CoordinatePoint) -> bool:
    theta = _theta_of(chi)
    if len(theta) != len(q.vertices) or p.dim != len(q.arrows):
        raise DimensionMismatch("quiver, character, and point disagree")
    if sum(theta) != 0:
        raise ValueError("the character must sum to zero over the vertices")
    for _mask, s, _is_full in _closed_subset_sums(q, theta, p):
        if s < 0:
            return False
    return True


def theta_generic_quiver(q: quiver_mod.QuiverPresentation, chi) -> bool:
    """True when every nonempty proper vertex subset has nonzero sum."""
    theta = _theta_of(chi)
    if len(theta) != len(q.vertices):
        raise DimensionMismatch("character has wrong length")
    if sum(theta) != 0:
        return False
    n = len(theta)
    sums = [0] * (1 << n)
    for s_mask in range(1, (1 << n) - 1):
        low = s_mask & -s_mask
        sums[s_mask] = sums[s_mask & (s_mask - 1)] + theta[low.bit_length() - 1]
        if sums[s_mask] == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# genericity of the character relative to the weights

def caratheodory_genericity(w: WeightAction, chi) -> bool:
    """True when the character lies in the span of no (ambient_rank - 1)
    weight rows.

    This guarantees that every semistable support contains a full-rank
    subset of size ambient_rank whose cone already holds the character,
    so the irrelevant ideal can be generated in that size alone.  The
    subsets are scanned depth-first so that elimination work on shared
    prefixes is done once; each leaf is still an exact rank test.
    """
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols:
        raise DimensionMismatch("character has wrong length")
    size = w.ambient_rank - 1
    rows = [list(r) for r in w.weights.entries]
    n = len(rows)
    if size < 0:
        return True

    def spans_theta(piv_rows, piv_cols):
        return not any(_reduce_against_pivots(theta, piv_rows, piv_cols))

    if size == 0:
        return not spans_theta([], [])
    found = []

    def rec(start, depth, piv_rows, piv_cols):
        if found:
            return
        if depth == size:
            if spans_theta(piv_rows, piv_cols):
                found.append(True)
            return
        for idx in range(start, n - (size - depth - 1)):
            red = _reduce_against_pivots(rows[idx], piv_rows, piv_cols)
            if any(red):
                c = next(i for i, v in enumerate(red) if v)
                rec(idx + 1, depth + 1,
                    piv_rows + [_strip_content(red)], piv_cols + [c])
            else:
                rec(idx + 1, depth + 1, piv_rows, piv_cols)

    rec(0, 0, [], [])
    return not found


# ---------------------------------------------------------------------------
# irrelevant ideal

def _incidence_edges(weights: IntMatrix):
    """Interpret the rows as signed incidence vectors (one -1, one +1);
    returns the (source, target) list or None when the shape differs."""
    edges = []
    for row in weights.entries:
        src = tgt = None
        for j, v in enumerate(row):
            if v == -1 and src is None:
                src = j
            elif v == 1 and tgt is None:
                tgt = j
            elif v != 0:
                return None
        if src is None or tgt is None:
            return None
        edges.append((src, tgt))
    return edges


def _forest_flow(edges, subset, theta):
    """Solve sum of c_e * (e_t - e_s) = theta on an acyclic edge subset.

    Returns the coefficient list or None when theta is not reachable or
    some coefficient is negative.  Exact integer leaf peeling.
    """
    nverts = len(theta)
    inc = [[] for _ in range(nverts)]
    for e in subset:
        s, t = edges[e]
        inc[s].append(e)
        inc[t].append(e)
    need = list(theta)
    remaining = set(subset)
    degree = [len(inc[v]) for v in range(nverts)]
    leaves = [v for v in range(nverts) if degree[v] == 1]
    coeffs = {}
    while leaves:
        v = leaves.pop()
        e = next((e for e in inc[v] if e in remaining), None)
        if e is None:
            continue
        s, t = edges[e]
        c = need[v] if t == v else -need[v]
        if c < 0:
            return None
        coeffs[e] = c
        need[s] += c
        need[t] -= c
        remaining.discard(e)
        for u in (s, t):
            degree[u] -= 1
            if degree[u] == 1:
                leaves.append(u)
    if remaining or any(need):
        return None
    return coeffs


def _acyclic(edges, subset, nverts):
    parent = list(range(nverts))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in subset:
        s, t = edges[e]
        rs, rt = find(s), find(t)
        if rs == rt:
            return False
        parent[rs] = rt
    return True


def scan_full_rank_subsets(w: WeightAction, chi):
    """One pass over the size-ambient_rank coordinate subsets.

    Returns (full_rank_count, relevant) where relevant lists the subsets
    whose weight rows both have full ambient rank and span a cone
    containing the character.  For signed-incidence weights the rank
    test reduces to acyclicity of the edge subset and membership to an
    integer flow on a forest; otherwise exact elimination and a unique
    solve are used.
    """
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols:
        raise DimensionMismatch("character has wrong length")
    n = w.coordinates
    r = w.ambient_rank
    edges = _incidence_edges(w.weights)
    full_rank = 0
    relevant = []
    if edges is not None:
        nverts = w.weights.cols
        for subset in combinations(range(n), r):
            if not _acyclic(edges, subset, nverts):
                continue
            full_rank += 1
            if _forest_flow(edges, subset, theta) is not None:
                relevant.append(subset)
    else:
        rows = [list(row) for row in w.weights.entries]
        for subset in combinations(range(n), r):
            sub = [rows[i] for i in subset]
            if _int_row_reduce(sub)[0] != r:
                continue
            full_rank += 1
            cols = [[sub[j][i] for j in range(r)] for i in range(len(theta))]
            x = solve_unique(IntMatrix(cols).to_rational(), theta)
            if x is not None and all(v >= 0 for v in x):
                relevant.append(subset)
    return full_rank, relevant


def irrelevant_ideal_generators(w: WeightAction, chi, exhaustive=False) -> SquarefreeIdeal:
    """Generators of the ideal cutting out the unstable locus.

    Default mode: the coordinate subsets of size ambient_rank whose
    weight rows have full ambient rank and whose cone contains the
    character, valid whenever caratheodory_genericity holds (checked,
    NonGenericCharacter otherwise).  Exhaustive mode drops the
    genericity assumption and minimalizes cone membership over all
    supports (exponential; intended for small actions).
    """
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols:
        raise DimensionMismatch("character has wrong length")
    n = w.coordinates
    if exhaustive:
        hits = []
        for size in range(n + 1):
            for subset in combinations(range(n), size):
                if any(set(h) <= set(subset) for h in hits):
                    continue
                if conic_feasible(w.rows_for(subset), theta) is not None:
                    hits.append(subset)
        return SquarefreeIdeal(n, hits)
    if not caratheodory_genericity(w, chi):
        raise NonGenericCharacter(
            "character lies in the span of fewer than ambient_rank weights")
    _count, relevant = scan_full_rank_subsets(w, chi)
    return SquarefreeIdeal(n, relevant)


# ---------------------------------------------------------------------------
# lattice bookkeeping

def lattice_report(q: quiver_mod.QuiverPresentation) -> dict:
    """Ranks of the group and character lattices attached to a canonical
    quiver, plus (for the rolled-up quiver) a basis of the invariant
    characters.

    For either quiver the rescaling torus acts through the signed
    incidence matrix, giving rank_K = vertices - 1 and
    rank_T = arrows - vertices + 1.  The rolled-up quiver additionally
    acts on the 27 cycle coordinates; there rank_K is the rank of the
    cycle/arrow membership matrix and rank_M = rank_N = 27 - rank_K.
    """
    if q == quiver_mod.rolled_up_quiver():
        kind = "Qtilde"
    elif q == quiver_mod.canonical_quiver():
        kind = "Q"
    else:
        raise ValueError("lattice_report expects one of the two canonical quivers")
    n_arrows = len(q.arrows)
    inc = quiver_mod.incidence_weight_rows(q)
    inc_rank = rank(inc)
    report = {
        "quiver": kind,
        "arrows": n_arrows,
        "vertices": len(q.vertices),
    }
    if kind == "Qtilde":
        rho = quiver_mod.rho_weight_matrix()
        k = rank(rho)
        m_basis = integer_kernel_basis(rho.transpose())
        _u, d, _v = smith_normal_form(inc)  # vertex cocharacters into arrow cocharacters
        divisors = [d.entry(i, i) for i in range(min(d.rows, d.cols)) if d.entry(i, i)]
        report.update({
            "rank_K": k,
            "rank_T": n_arrows - k,
            "rank_L": k,
            "rank_N": n_arrows - k,
            "rank_M": len(m_basis),
            "m_basis": [list(v) for v in m_basis],
            "incidence_rank": inc_rank,
            "incidence_cokernel_free": all(x == 1 for x in divisors),
        })
    else:
        report.update({
            "rank_K": inc_rank,
            "rank_T": n_arrows - inc_rank,
            "rank_L": inc_rank,
            "rank_N": n_arrows - inc_rank,
            "rank_M": n_arrows - inc_rank,
            "incidence_rank": inc_rank,
        })
    return report


def strong_convexity_pairings(membership: IntMatrix | None = None):
    """Pairing of the pushed-forward all-ones cocharacter with each cycle
    coordinate class: the row sums of the cycle/arrow membership matrix."""
    if membership is None:
        membership = quiver_mod.rho_weight_matrix()
    return [sum(row) for row in membership.entries]


def strong_convexity_check() -> bool:
    """All 27 pairings equal 3, so the effective cone is strongly convex
    and the quotients it produces are projective."""
    return all(v == 3 for v in strong_convexity_pairings())


def effective_cone_interior_test(w: WeightAction, chi) -> bool:
    """Nonempty stable locus: the character lies in the interior of the
    cone spanned by all weight rows."""
    theta = _theta_of(chi)
    if len(theta) != w.weights.cols:
        raise DimensionMismatch("character has wrong length")
    return strictly_conic_feasible(list(w.weights.entries), theta,
                                   ambient_rank=w.ambient_rank)


def canonical_triviality_check(q: quiver_mod.QuiverPresentation) -> bool:
    """Evaluates -sum_a (e_t(a) - e_s(a)) + sum_{i,j} (e_(j,2) - e_(i,0))
    in Z^9 and reports whether it is exactly zero."""
    total = [0] * len(q.vertices)
    for _label, s, t in q.arrows:
        total[t] -= 1
        total[s] += 1
    for i in range(3):
        for j in range(3):
            total[q.vertex_index(f"{j},2")] += 1
            total[q.vertex_index(f"{i},0")] -= 1
    return not any(total)
