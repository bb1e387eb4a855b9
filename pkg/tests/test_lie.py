"""Root data, Weyl groups, torus points and stabilizers."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from howemoore.errors import ConfigurationError
from howemoore.lie import (
    Weight,
    all_roots,
    angle_point,
    build_root_system,
    center_points,
    coset_representatives,
    dominant_weights_in_ball,
    enumerate_weyl_group,
    identity_point,
    is_central,
    is_closed_subsystem,
    longest_element,
    reflection_subgroup,
    root_subsystems,
    span_complement_check,
    stabilizer_data,
    weyl_group,
)

from conftest import SMALL_SYSTEMS, system_id

KNOWN_ORDERS = {"A": lambda n: math.factorial(n + 1), "B": lambda n: 2**n * math.factorial(n),
                "C": lambda n: 2**n * math.factorial(n), "D": lambda n: 2 ** (n - 1) * math.factorial(n),
                "G": lambda n: 12}
KNOWN_POSITIVE = {"A": lambda n: n * (n + 1) // 2, "B": lambda n: n * n, "C": lambda n: n * n,
                  "D": lambda n: n * (n - 1), "G": lambda n: 6}


def ambient_closure(rs):
    """Independent oracle: close the simple roots under simple reflections in the ambient model."""
    simple = [tuple(a) for a in rs.simple_roots]

    def ip(u, v):
        return rs.inner_ambient(u, v)

    def reflect(v, a):
        c = 2 * ip(v, a) / ip(a, a)
        return tuple(x - c * y for x, y in zip(v, a))

    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                w = reflect(v, a)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# Root system data


def test_cartan_entries(small_rs):
    A = small_rs.cartan_matrix
    F = [[small_rs.inner_ambient(a, b) for b in small_rs.simple_roots] for a in small_rs.simple_roots]
    for i, j in itertools.product(range(small_rs.rank), repeat=2):
        assert A[i, j] == 2 * F[i][j] / F[i][i]
        if i == j:
            assert A[i, j] == 2
        else:
            assert A[i, j] <= 0


def test_rho_half_sum_equals_sum_of_fundamental_weights(small_rs):
    half = tuple(sum((r[c] for r in small_rs.positive_roots), Fraction(0)) / 2 for c in range(small_rs.ambient_dim))
    assert half == small_rs.rho
    assert small_rs.to_ambient(small_rs.rho_w) == small_rs.rho


def test_fundamental_weights_dual_to_coroots(small_rs):
    for i, w in enumerate(small_rs.fundamental_weights):
        for j, a in enumerate(small_rs.simple_roots):
            coroot = tuple(2 * x / small_rs.inner_ambient(a, a) for x in a)
            assert small_rs.inner_ambient(w, coroot) == (1 if i == j else 0)


def test_positive_roots_match_closure_and_count(small_rs):
    closure = ambient_closure(small_rs)
    positive = set(small_rs.positive_roots)
    negative = {tuple(-x for x in v) for v in positive}
    assert closure == positive | negative
    assert small_rs.n_positive == KNOWN_POSITIVE[small_rs.series](small_rs.rank)


def test_index_is_cartan_determinant(small_rs):
    assert small_rs.index == int(sp.Matrix(small_rs.cartan_matrix.tolist()).det())
    assert len(center_points(small_rs)) == small_rs.index


@pytest.mark.parametrize(
    "series,rank,n_pos,index",
    [("A", 1, 1, 2), ("A", 2, 3, 3), ("G", 2, 6, 1), ("B", 3, 9, 2), ("D", 4, 12, 4)],
)
def test_build_examples(series, rank, n_pos, index):
    rs = build_root_system(series, rank)
    assert rs.n_positive == n_pos
    assert rs.index == index
    assert np.array_equal(rs.rho_w, np.ones(rank))


def test_a1_rho_is_half_alpha():
    rs = build_root_system("A", 1)
    alpha = rs.positive_roots[0]
    assert rs.rho == tuple(x / 2 for x in alpha)


def test_g2_root_lengths():
    rs = build_root_system("G", 2)
    assert set(rs.d) == {1, 3}
    assert sorted(set(rs.root_len2.tolist())) == [2, 6]


@pytest.mark.parametrize("series,rank,form", [("E", 6, "simply_connected"), ("A", 0, "simply_connected"),
                                              ("A", 2, "spin"), ("B", 1, "simply_connected")])
def test_unsupported_configurations(series, rank, form):
    with pytest.raises(ConfigurationError):
        build_root_system(series, rank, form)


# ---------------------------------------------------------------------------
# Weyl group


def test_weyl_order_and_lengths(small_rs):
    W = weyl_group(small_rs)
    assert len(W) == KNOWN_ORDERS[small_rs.series](small_rs.rank)
    for k in range(len(W)):
        assert W.lengths[k] == W.inversion_count(k)


def test_weyl_elements_permute_roots(small_rs):
    W = weyl_group(small_rs)
    roots = {tuple(v) for v in all_roots(small_rs)}
    for M in W.mats:
        images = {tuple(int(x) for x in M @ v) for v in all_roots(small_rs)}
        assert images == roots


def test_weyl_orbit_of_rho_is_regular(small_rs):
    # the orbit of a regular weight has exactly |W| points
    W = weyl_group(small_rs)
    orbit = {tuple(M @ small_rs.rho_w) for M in W.mats}
    assert len(orbit) == len(W)


def test_weyl_group_inverse_and_compose(small_rs):
    W = weyl_group(small_rs)
    ident = W.index_of(np.eye(small_rs.rank, dtype=np.int64))
    assert ident == 0
    for k in range(0, len(W), max(1, len(W) // 17)):
        assert W.compose(k, int(W.inverse[k])) == 0
        assert W.lengths[W.inverse[k]] == W.lengths[k]


def test_longest_element(small_rs):
    w0 = longest_element(small_rs)
    assert w0.length == small_rs.n_positive
    images = {tuple(int(x) for x in w0.wmatrix @ v) for v in small_rs.roots_w}
    assert images == {tuple(-int(x) for x in v) for v in small_rs.roots_w}


@pytest.mark.parametrize("series,rank,order,longest", [("A", 1, 2, 1), ("A", 2, 6, 3), ("B", 2, 8, 4)])
def test_weyl_examples(series, rank, order, longest):
    rs = build_root_system(series, rank)
    elements = enumerate_weyl_group(rs)
    assert len(elements) == order
    lengths = sorted(e.length for e in elements)
    assert lengths[-1] == longest and lengths.count(longest) == 1
    assert lengths[0] == 0


# ---------------------------------------------------------------------------
# Weights


def test_dominant_enumeration_is_exhaustive(small_rs):
    radius = 4.5
    found = dominant_weights_in_ball(small_rs, radius)
    box = range(0, 10)
    brute = []
    for lam in itertools.product(box, repeat=small_rs.rank):
        n2 = small_rs.norm2_exact(np.array(lam) + 1)
        if n2 < Fraction(radius) ** 2:
            brute.append(lam)
    # the box is wide enough: no weight on its outer face lies in the ball
    assert all(max(l) < 9 for l in brute)
    assert sorted(tuple(int(x) for x in l) for l in found) == sorted(brute)


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2), ("B", 2), ("D", 4)])
def test_adjoint_form_keeps_root_lattice(series, rank):
    sc = dominant_weights_in_ball(build_root_system(series, rank), 6.0)
    ad = dominant_weights_in_ball(build_root_system(series, rank, "adjoint"), 6.0)
    rs = build_root_system(series, rank)
    assert sorted(map(tuple, ad)) == sorted(tuple(l) for l in sc if rs.in_root_lattice(l))


def test_weight_object():
    rs = build_root_system("A", 2)
    w = Weight((1, 1))
    assert w.dominant
    assert w.in_root_lattice(rs)
    assert not Weight((1, 0)).in_root_lattice(rs)
    assert not Weight((2, -1)).dominant


# ---------------------------------------------------------------------------
# Torus points and the center


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(SMALL_SYSTEMS),
    st.lists(st.fractions(min_value=0, max_value=1, max_denominator=50), min_size=4, max_size=4),
    st.lists(st.integers(-20, 20), min_size=4, max_size=4),
)
def test_angle_points_are_unitary(system, theta, lam):
    rs = build_root_system(*system)
    t = angle_point(rs, theta[: rs.rank])
    lam = np.array(lam[: rs.rank], dtype=np.int64)
    assert abs(abs(t.power(lam)) - 1) < 1e-12
    # exact and floating evaluations agree
    assert abs(t.power(lam) - np.exp(lam @ t.h)) < 1e-9


def test_center_points_are_central(small_rs):
    pts = center_points(small_rs)
    assert all(is_central(small_rs, z) for z in pts)
    assert pts[0].angles == tuple(Fraction(0) for _ in range(small_rs.rank))


def test_center_brute_force_over_grid():
    # solve t**alpha_i = 1 over angle vectors with denominator 12
    rs = build_root_system("A", 3)
    hits = [th for th in itertools.product(range(12), repeat=3)
            if is_central(rs, angle_point(rs, [Fraction(x, 12) for x in th]))]
    assert len(hits) == 4


def test_a1_center():
    rs = build_root_system("A", 1)
    z = center_points(rs)[1]
    for n in range(8):
        assert z.power(np.array([n])) == pytest.approx((-1) ** n)


def test_a2_center_cube_roots():
    rs = build_root_system("A", 2)
    values = sorted(np.angle(z.power(np.array([1, 0]))) for z in center_points(rs))
    assert np.allclose(values, sorted(np.angle(np.exp(2j * np.pi * k / 3)) for k in range(3)))
    for z in center_points(rs):
        # characters of P/Q: constant on root-lattice cosets
        assert z.power(np.array([1, 1])) == pytest.approx(1)
        assert z.power(np.array([0, 1])) == pytest.approx(z.power(np.array([1, 0])) ** 2)


def test_g2_center_trivial():
    assert len(center_points(build_root_system("G", 2))) == 1


def test_adjoint_center_trivial():
    assert len(center_points(build_root_system("A", 2, "adjoint"))) == 1


def test_weyl_action_on_points():
    rs = build_root_system("B", 2)
    t = angle_point(rs, ["1/7", "2/9"])
    W = weyl_group(rs)
    lam = np.array([3, 1])
    for k in range(len(W)):
        # (w t)^lam = t^(w^-1 lam)
        assert t.act(rs, k).power(lam) == pytest.approx(t.power(W.mats[W.inverse[k]] @ lam))


# ---------------------------------------------------------------------------
# Stabilizers and root subsystems


def test_stabilizer_of_identity(small_rs):
    stab = stabilizer_data(small_rs, identity_point(small_rs))
    assert stab.central
    assert len(stab.w0) == len(weyl_group(small_rs))


def test_stabilizer_regular_a1():
    rs = build_root_system("A", 1)
    stab = stabilizer_data(rs, angle_point(rs, ["1/4"]))
    assert stab.regular and stab.w0 == (0,)


def test_stabilizer_a2_example():
    rs = build_root_system("A", 2)
    # theta chosen so that t^alpha1 = 1 and t^alpha2 = exp(2 pi i / 5)
    a1, a2 = rs.roots_w[0], rs.roots_w[1]
    M = np.array([a1, a2], dtype=object)
    sol = sp.Matrix(M.tolist()).solve(sp.Matrix([0, sp.Rational(1, 5)]))
    t = angle_point(rs, [Fraction(str(x)) for x in sol])
    assert t.power(a1) == pytest.approx(1)
    assert t.power(a2) == pytest.approx(np.exp(2j * np.pi / 5))
    stab = stabilizer_data(rs, t)
    assert [tuple(rs.roots_w[k]) for k in stab.delta0_plus] == [tuple(a1)]
    assert len(stab.w0) == 2
    assert len(stab.coset_reps) == 3


def test_coset_representatives_partition(small_rs, rng):
    W = weyl_group(small_rs)
    k = int(rng.integers(0, small_rs.n_positive))
    sub = reflection_subgroup(small_rs, [k])
    reps = coset_representatives(small_rs, sub)
    assert len(reps) * len(sub) == len(W)
    cosets = {frozenset(W.compose(s, r) for s in sub) for r in reps}
    assert len(cosets) == len(reps)


def test_stabilizer_subsystem_closed(rng):
    rs = build_root_system("B", 3)
    for theta in (["1/2", "0", "0"], ["0", "1/2", "1/3"], ["1/2", "1/2", "0"]):
        stab = stabilizer_data(rs, angle_point(rs, theta))
        roots = {tuple(rs.roots_w[k]) for k in stab.delta0_plus}
        roots |= {tuple(-x for x in v) for v in roots}
        assert is_closed_subsystem(rs, roots)
        assert len(stab.coset_reps) * len(stab.w0) == len(weyl_group(rs))


def test_span_complement_full_system():
    rs = build_root_system("A", 2)
    report = span_complement_check(rs, [tuple(v) for v in rs.roots_w])
    assert report.ok and report.complement_rank == 0 and not report.full_rank_required


def test_span_complement_a2_single_root():
    rs = build_root_system("A", 2)
    report = span_complement_check(rs, [tuple(rs.roots_w[0])])
    assert report.complement_rank == 2 and report.ok


def test_span_complement_b2_long_roots():
    rs = build_root_system("B", 2)
    long_roots = [tuple(v) for v, l in zip(rs.roots_w, rs.root_len2) if l == rs.root_len2.max()]
    report = span_complement_check(rs, long_roots)
    assert report.full_rank_holds and report.ok


@pytest.mark.parametrize("system", [("A", 2), ("B", 2), ("G", 2), ("A", 3)], ids=system_id)
def test_span_complement_all_subsystems(system):
    rs = build_root_system(*system)
    for sub in root_subsystems(rs):
        assert span_complement_check(rs, sorted(sub)).implication_holds
