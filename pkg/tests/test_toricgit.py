import random
from fractions import Fraction
from itertools import combinations

import pytest

from qgm import quiver, toricgit
from qgm.exactlin import IntMatrix, _int_row_reduce, conic_feasible
from qgm.toricgit import (
    SPECIAL_THETA,
    CoordinatePoint,
    NonGenericCharacter,
    StabilityCharacter,
    WeightAction,
    canonical_triviality_check,
    caratheodory_genericity,
    effective_cone_interior_test,
    hm_semistable,
    hm_stable,
    irrelevant_ideal_generators,
    king_semistable,
    king_stable,
    lattice_report,
    scan_full_rank_subsets,
    strong_convexity_check,
    strong_convexity_pairings,
    theta_generic_quiver,
)

from helpers import random_point_values

Q = quiver.canonical_quiver()
QT = quiver.rolled_up_quiver()
ACTION = WeightAction.from_quiver(Q)


def full_support_point():
    return CoordinatePoint(18, range(18))


def test_weight_action_rank():
    assert ACTION.ambient_rank == 8
    assert ACTION.coordinates == 18


def test_hm_examples():
    theta = SPECIAL_THETA
    assert hm_semistable(ACTION, theta, full_support_point())
    assert hm_stable(ACTION, theta, full_support_point())
    empty = CoordinatePoint(18, ())
    assert not hm_semistable(ACTION, theta, empty)
    assert not hm_stable(ACTION, theta, empty)
    single = CoordinatePoint(18, (0,))
    assert not hm_semistable(ACTION, theta, single)
    assert not hm_stable(ACTION, theta, single)


def test_hm_stable_needs_full_dimensional_support():
    # the nine left-to-middle arrows span only rank 5
    support = range(9)
    sub = WeightAction(IntMatrix([ACTION.weights.row(i) for i in support]))
    assert sub.ambient_rank == 5
    p = CoordinatePoint(18, support)
    assert not hm_stable(ACTION, SPECIAL_THETA, p)
    assert not hm_semistable(ACTION, SPECIAL_THETA, p)
    # a seven-arrow forest spans rank 7 < 8: never stable
    forest = (0, 1, 2, 3, 6, 9, 12)
    sub7 = WeightAction(IntMatrix([ACTION.weights.row(i) for i in forest]))
    assert sub7.ambient_rank == 7
    assert not hm_stable(ACTION, SPECIAL_THETA, CoordinatePoint(18, forest))


def test_king_examples():
    theta = SPECIAL_THETA
    assert king_stable(Q, theta, full_support_point())
    zero = CoordinatePoint(18, ())
    assert not king_stable(Q, theta, zero)
    assert not king_semistable(Q, theta, zero)
    # left-column arrows only: the closed set of all left and middle
    # vertices carries character sum -21
    p = CoordinatePoint(18, range(9))
    assert not king_stable(Q, theta, p)
    assert not king_semistable(Q, theta, p)


def test_king_against_direct_subset_enumeration():
    # independent reimplementation with explicit vertex sets
    rng = random.Random(13)
    theta = SPECIAL_THETA.theta
    for _ in range(50):
        p = CoordinatePoint.from_values(random_point_values(rng))
        supported = [Q.arrows[i] for i in sorted(p.support)]
        closed_ok_strict = True
        closed_ok_weak = True
        for mask in range(1, 2 ** 9 - 1):
            s = {v for v in range(9) if mask >> v & 1}
            if any(a_src in s and a_tgt not in s for (_l, a_src, a_tgt) in supported):
                continue
            total = sum(theta[v] for v in s)
            if total <= 0:
                closed_ok_strict = False
            if total < 0:
                closed_ok_weak = False
        assert king_stable(Q, SPECIAL_THETA, p) == closed_ok_strict
        assert king_semistable(Q, SPECIAL_THETA, p) == closed_ok_weak


def test_cone_and_submodule_verdicts_agree():
    rng = random.Random(14)
    for _ in range(150):
        p = CoordinatePoint.from_values(random_point_values(rng))
        assert hm_semistable(ACTION, SPECIAL_THETA, p) == \
            king_semistable(Q, SPECIAL_THETA, p)
        assert hm_stable(ACTION, SPECIAL_THETA, p) == \
            king_stable(Q, SPECIAL_THETA, p)


def test_stable_implies_semistable():
    rng = random.Random(15)
    for _ in range(80):
        p = CoordinatePoint.from_values(random_point_values(rng))
        if hm_stable(ACTION, SPECIAL_THETA, p):
            assert hm_semistable(ACTION, SPECIAL_THETA, p)


def test_semistability_is_monotone_in_support():
    rng = random.Random(16)
    for _ in range(60):
        p = CoordinatePoint.from_values(random_point_values(rng))
        if not hm_semistable(ACTION, SPECIAL_THETA, p):
            continue
        extra = [i for i in range(18) if i not in p.support]
        if not extra:
            continue
        bigger = CoordinatePoint(18, set(p.support) | {rng.choice(extra)})
        assert hm_semistable(ACTION, SPECIAL_THETA, bigger)


def test_theta_generic_quiver():
    assert theta_generic_quiver(Q, SPECIAL_THETA)
    assert not theta_generic_quiver(Q, StabilityCharacter([0] * 9))
    assert not theta_generic_quiver(Q, StabilityCharacter([-1, 1, 0, 0, 0, 0, 0, 0, 0]))


def test_caratheodory_genericity():
    assert caratheodory_genericity(ACTION, SPECIAL_THETA)
    assert not caratheodory_genericity(ACTION, StabilityCharacter([0] * 9))
    toy = WeightAction(IntMatrix([[1, 0], [0, 1]]))
    assert not caratheodory_genericity(toy, (1, 0))
    assert caratheodory_genericity(toy, (1, 1))


def test_irrelevant_ideal_toy_cases():
    toy = WeightAction(IntMatrix([[1, 0], [0, 1]]))
    ideal = irrelevant_ideal_generators(toy, (1, 1))
    assert ideal.generators == ((0, 1),)
    # character outside the effective cone: empty ideal
    outside = irrelevant_ideal_generators(toy, (-1, 1))
    assert outside.is_zero()
    with pytest.raises(NonGenericCharacter):
        irrelevant_ideal_generators(toy, (1, 0))


def test_irrelevant_ideal_exhaustive_matches_default_on_toys():
    rng = random.Random(17)
    for _ in range(10):
        rows = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(5)]
        action = WeightAction(IntMatrix(rows))
        chi = tuple(sum(r[j] for r in rows) for j in range(3))
        if not caratheodory_genericity(action, chi):
            continue
        default = irrelevant_ideal_generators(action, chi)
        exhaustive = irrelevant_ideal_generators(action, chi, exhaustive=True)
        # the size-r generators refine the minimal supports: each
        # exhaustive generator is contained in some default one and
        # both cut out the same semistable supports
        for g in default.generators:
            assert any(set(e) <= set(g) for e in exhaustive.generators)
        for e in exhaustive.generators:
            assert conic_feasible(action.rows_for(e), chi) is not None


def test_canonical_octuple_scan():
    count, relevant = scan_full_rank_subsets(ACTION, SPECIAL_THETA)
    assert count == 8748
    assert len(relevant) == 1053
    ideal = irrelevant_ideal_generators(ACTION, SPECIAL_THETA)
    assert len(ideal.generators) == 1053
    assert all(len(g) == 8 for g in ideal.generators)


def test_octuple_scan_against_general_elimination_path():
    # an invertible change of torus basis destroys the incidence shape,
    # forcing the elimination-and-solve path; subsets and verdicts must
    # be identical to the fast scan
    u = [[1 if i == j else 0 for j in range(9)] for i in range(9)]
    for i in range(8):
        u[i][i + 1] = 1
    u[0][8] = 2
    rows = [list(r) for r in ACTION.weights.entries]
    wt = [[sum(rows[a][k] * u[k][j] for k in range(9)) for j in range(9)]
          for a in range(18)]
    theta_t = [sum(SPECIAL_THETA.theta[k] * u[k][j] for k in range(9))
               for j in range(9)]
    transformed = WeightAction(IntMatrix(wt))
    assert transformed.ambient_rank == 8
    count_t, relevant_t = scan_full_rank_subsets(transformed, theta_t)
    count, relevant = scan_full_rank_subsets(ACTION, SPECIAL_THETA)
    assert count_t == count
    assert sorted(relevant_t) == sorted(relevant)


def test_octuple_membership_against_simplex_recount():
    # independent recount of cone membership with the feasibility solver
    # over all octuples; by genericity no rank-deficient octuple may
    # contain the character, and on full-rank octuples the verdicts of
    # the two routes must agree exactly
    _count, relevant = scan_full_rank_subsets(ACTION, SPECIAL_THETA)
    relevant_set = set(map(tuple, relevant))
    rows = [list(r) for r in ACTION.weights.entries]
    theta = SPECIAL_THETA.theta
    for subset in combinations(range(18), 8):
        feasible = conic_feasible([rows[i] for i in subset], theta) is not None
        if feasible:
            assert _int_row_reduce([rows[i] for i in subset])[0] == 8
        assert feasible == (subset in relevant_set)


def test_lattice_report_rolled_up():
    rep = lattice_report(QT)
    assert rep["rank_K"] == 19
    assert rep["rank_M"] == rep["rank_N"] == 8
    assert rep["rank_L"] == 19
    assert 27 == rep["rank_K"] + rep["rank_M"]
    assert rep["incidence_cokernel_free"] is True
    rho_t = quiver.rho_weight_matrix().transpose()
    for v in rep["m_basis"]:
        prod = [sum(rho_t.entry(i, j) * v[j] for j in range(27)) for i in range(27)]
        assert not any(prod)


def test_invariant_character_basis_spans_the_rational_nullspace():
    # independent cross-check with plain rational elimination: the
    # character basis must span the full nullspace of the transposed
    # cycle/arrow matrix over Q
    from fractions import Fraction as F

    rep = lattice_report(QT)
    rho_t = quiver.rho_weight_matrix().transpose()
    m = [[F(rho_t.entry(i, j)) for j in range(27)] for i in range(27)]
    # eliminate to find the nullspace dimension
    rank_q = 0
    ncols = 27
    work = [row[:] for row in m]
    for c in range(ncols):
        piv = next((i for i in range(rank_q, 27) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[rank_q], work[piv] = work[piv], work[rank_q]
        pr = work[rank_q]
        for i in range(rank_q + 1, 27):
            if work[i][c]:
                f = work[i][c] / pr[c]
                work[i] = [a - f * b for a, b in zip(work[i], pr)]
        rank_q += 1
    assert 27 - rank_q == len(rep["m_basis"]) == 8
    # the basis vectors are independent: stack them and eliminate
    stack = [[F(v) for v in vec] for vec in rep["m_basis"]]
    r2 = 0
    for c in range(27):
        piv = next((i for i in range(r2, len(stack)) if stack[i][c] != 0), None)
        if piv is None:
            continue
        stack[r2], stack[piv] = stack[piv], stack[r2]
        pr = stack[r2]
        for i in range(r2 + 1, len(stack)):
            if stack[i][c]:
                f = stack[i][c] / pr[c]
                stack[i] = [a - f * b for a, b in zip(stack[i], pr)]
        r2 += 1
    assert r2 == 8


def test_lattice_report_base():
    rep = lattice_report(Q)
    assert rep["rank_T"] == 10
    assert rep["rank_K"] == 8
    assert len(Q.arrows) - len(Q.vertices) + 1 == rep["rank_T"]
    with pytest.raises(ValueError):
        lattice_report(quiver.QuiverPresentation(["u", "v"], [("a", 0, 1)]))


def test_character_entries_must_be_integers():
    with pytest.raises(TypeError):
        StabilityCharacter([1.0] * 9)
    from fractions import Fraction as F

    with pytest.raises(TypeError):
        StabilityCharacter([F(1, 2)] + [0] * 8)
    with pytest.raises(TypeError):
        theta_generic_quiver(Q, [True] * 9)


def test_strong_convexity():
    assert strong_convexity_pairings() == [3] * 27
    assert strong_convexity_check()
    zero = IntMatrix([[0] * 27 for _ in range(27)])
    assert strong_convexity_pairings(zero) == [0] * 27


def test_effective_cone_interior():
    rho = quiver.rho_weight_matrix()
    action = WeightAction(rho)
    assert action.ambient_rank == 19
    column_sums = tuple(sum(rho.entry(i, j) for i in range(27)) for j in range(27))
    assert column_sums == (3,) * 27
    assert effective_cone_interior_test(action, column_sums)
    assert not effective_cone_interior_test(action, (0,) * 27)
    assert not effective_cone_interior_test(action, rho.row(0))


def test_canonical_triviality():
    assert canonical_triviality_check(Q)
    smaller = quiver.QuiverPresentation(Q.vertices, Q.arrows[1:])
    assert not canonical_triviality_check(smaller)
    # net degree per vertex: -3 on the left column, 0 in the middle, +3 right
    flow = [0] * 9
    for _l, s, t in Q.arrows:
        flow[t] += 1
        flow[s] -= 1
    assert flow == [-3, -3, -3, 0, 0, 0, 3, 3, 3]


def test_irrelevant_ideal_invariant_under_coordinate_permutation():
    # relabeling the arrows (with the matching row permutation of the
    # weight matrix) permutes the generators accordingly
    rng = random.Random(18)
    perm = list(range(18))
    rng.shuffle(perm)
    rows = [ACTION.weights.row(perm[i]) for i in range(18)]
    permuted = WeightAction(IntMatrix(rows))
    ideal = irrelevant_ideal_generators(ACTION, SPECIAL_THETA)
    ideal_p = irrelevant_ideal_generators(permuted, SPECIAL_THETA)
    inverse = {perm[i]: i for i in range(18)}
    mapped = {tuple(sorted(inverse[v] for v in g)) for g in ideal.generators}
    assert mapped == set(ideal_p.generators)


def test_json_io():
    data = {"weights": [[1, 0], [0, 1]], "theta": [1, 1]}
    action = WeightAction.from_json(data)
    assert action.ambient_rank == 2
    assert action.to_json() == {"weights": [[1, 0], [0, 1]]}
    chi = toricgit.character_from_json(data)
    assert chi.theta == (1, 1)
    assert hm_semistable(action, chi, CoordinatePoint(2, (0, 1)))
