import random

import pytest
from hypothesis import given, strategies as st

from oracles import blend_corner_search, lattice
from panache.blend import (
    BlendedExtension,
    BlendedIso,
    BlendMismatch,
    ExtensionWitness,
    NotABlend,
    RigidityError,
    automorphism_space,
    build_MU,
    build_MU_prime,
    canonical_iso,
    expected_automorphisms,
    induced_m2_automorphism,
    is_isomorphic,
    lifts_to_m1,
    pullback_class,
    rigidity_report,
    solve_blend,
    torsor_act,
    torsor_difference,
)
from panache.ext import Cocycle, class_of, ext_space, pushforward
from panache.generators import F2, Z2, perturb, random_blend, random_class, random_cocycle, random_rigid_gradeds, z2_blend
from panache.linalg import Matrix, span_equal
from panache.reps import Morphism, hom_space, trivial

seeds = st.integers(0, 10**6)


def j_map(M):
    a, h, b = M.dims
    return Morphism(M.A, M.m1().total(), Matrix.block([[Matrix.identity(a)], [Matrix.zeros(h, a)]]))


def varpi_map(M):
    a, h, b = M.dims
    return Morphism(M.m2().total(), M.B, Matrix.block([[Matrix.zeros(b, h), Matrix.identity(b)]]))


def trivial_blend(x_vals, y_vals, pres=F2):
    T = trivial(pres)
    x = Cocycle(T, T, tuple(Matrix([[v]]) for v in x_vals))
    y = Cocycle(T, T, tuple(Matrix([[v]]) for v in y_vals))
    return solve_blend(x, y)


# solvability

@given(seeds)
def test_free_group_always_solvable(seed):
    rng = random.Random(seed)
    A, N, B = random_rigid_gradeds(rng)
    M = solve_blend(random_cocycle(rng, A, N), random_cocycle(rng, N, B))
    assert M is not None
    assert M.total().validate()


def test_split_pair_gives_split_blend():
    rng = random.Random(1)
    A, N, B = random_rigid_gradeds(rng)
    M = solve_blend(Cocycle.zero(A, N), Cocycle.zero(N, B))
    assert all(z.is_zero() for z in M.z)


def test_inconsistent_corner_on_presented_group():
    T = trivial(Z2)
    x = Cocycle(T, T, (Matrix([[1]]), Matrix([[0]])))
    y = Cocycle(T, T, (Matrix([[0]]), Matrix([[1]])))
    assert solve_blend(x, y) is None
    assert blend_corner_search(T, T, T, x.blocks, y.blocks, lattice(3)) == []
    # the proportional pair does have corners, and the search sees them
    y2 = Cocycle(T, T, (Matrix([[2]]), Matrix([[0]])))
    M = solve_blend(x, y2)
    assert M is not None
    assert blend_corner_search(T, T, T, x.blocks, y2.blocks, lattice(1))


def test_solve_accepts_witnesses_and_rejects_mismatch():
    rng = random.Random(3)
    A, N, B = random_rigid_gradeds(rng)
    x, y = random_cocycle(rng, A, N), random_cocycle(rng, N, B)
    w = ExtensionWitness.from_cocycle(x)
    assert w.to_cocycle() == x
    assert solve_blend(w, ExtensionWitness.from_cocycle(y)) == solve_blend(x, y)
    with pytest.raises(BlendMismatch):
        solve_blend(x, x)


def test_not_a_blend():
    T = trivial(Z2)
    one = (Matrix([[1]]), Matrix([[0]]))
    zero = (Matrix([[0]]), Matrix([[0]]))
    with pytest.raises(NotABlend):
        BlendedExtension(T, T, T, one, (Matrix([[0]]), Matrix([[1]])), zero)


# torsor structure

@given(seeds)
def test_action_by_zero_and_inverse(seed):
    rng = random.Random(seed)
    M = random_blend(rng)
    space = ext_space(M.B, M.A)
    U = random_class(rng, space)
    assert is_isomorphic(torsor_act(M, space.zero()), M) is not None
    assert is_isomorphic(torsor_act(torsor_act(M, U), U.scale(-1)), M) is not None


@given(seeds)
def test_action_shifts_class_over_m1(seed):
    rng = random.Random(seed)
    M = random_blend(rng)
    U = random_class(rng, ext_space(M.B, M.A))
    MU = torsor_act(M, U)
    assert class_of(MU.over_m1()) == class_of(M.over_m1()) + pushforward(j_map(M), U)


@given(seeds)
def test_difference_recovers_class(seed):
    rng = random.Random(seed)
    M = random_blend(rng)
    U = random_class(rng, ext_space(M.B, M.A))
    assert torsor_difference(M, M).is_zero()
    assert torsor_difference(M, torsor_act(M, U)) == U


@given(seeds)
def test_transitivity_between_solutions(seed):
    rng = random.Random(seed)
    M = random_blend(rng)
    Mp = perturb(rng, M)
    D = torsor_difference(M, Mp)
    assert is_isomorphic(torsor_act(M, D), Mp) is not None


def test_difference_requires_rigidity():
    M = trivial_blend((1, 0), (0, 1))
    with pytest.raises(RigidityError):
        torsor_difference(M, M)
    assert not rigidity_report(*M.gradeds)["rigid"]


@given(seeds)
def test_automorphisms_under_rigidity(seed):
    M = random_blend(random.Random(seed))
    got = [X.vec() for X in automorphism_space(M)]
    want = [X.vec() for X in expected_automorphisms(M)]
    assert span_equal(got, want)


# the two twisted constructions

@given(seeds)
def test_twists_agree(seed):
    rng = random.Random(seed)
    M = random_blend(rng)
    U = random_class(rng, ext_space(M.B, M.A))
    MU, MUp = build_MU(M, U), build_MU_prime(M, U)
    for reading in ("over_m1", "over_m2"):
        assert class_of(getattr(MU, reading)()) == class_of(getattr(MUp, reading)())
    assert is_isomorphic(MU, torsor_act(M, U)) is not None
    F = canonical_iso(M, U)
    assert isinstance(F, BlendedIso)
    n = sum(M.dims)
    T = F.matrix
    assert all(T[i, i] == 1 for i in range(n))
    assert all(T[i, j] == 0 for i in range(n) for j in range(i))


def test_twist_by_zero_is_identity():
    M = random_blend(random.Random(5))
    zero = ext_space(M.B, M.A).zero()
    assert is_isomorphic(build_MU(M, zero), M) is not None
    assert is_isomorphic(build_MU_prime(M, zero), M) is not None
    assert canonical_iso(M, zero).matrix == Matrix.identity(sum(M.dims))


@given(seeds)
def test_twists_on_presented_group(seed):
    rng = random.Random(seed)
    M = z2_blend(rng)
    U = random_class(rng, ext_space(M.B, M.A))
    assert class_of(build_MU(M, U).over_m1()) == class_of(build_MU_prime(M, U).over_m1())
    canonical_iso(M, U)


# pulling M1 back along f: B -> N

def test_zero_f_induces_identity():
    M = random_blend(random.Random(2))
    f = Morphism(M.B, M.N, Matrix.zeros(M.N.dim, M.B.dim))
    assert induced_m2_automorphism(M, f) == Matrix.identity(M.N.dim + M.B.dim)


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), st.sampled_from([-2, -1, 1, 2]))
def test_induced_automorphism_on_trivial_gradeds(x0, x1, y0, t):
    M = trivial_blend((x0, x1), (y0, 1))
    f = Morphism(M.B, M.N, Matrix([[t]]))
    induced = induced_m2_automorphism(M, f)
    assert induced == Matrix([[1, -t], [0, 1]])
    u = pullback_class(M, f)
    lifts = lifts_to_m1(M, f)
    assert lifts == (x0 == 0 and x1 == 0)
    assert class_of(u).is_zero() == lifts
    if lifts:
        assert is_isomorphic(torsor_act(M, u), M) is not None


def test_lift_on_rotation_fixture():
    from panache.fixtures import load_fixture
    M = load_fixture("free-blend").extensions
    blend = solve_blend(M["M1"], M["M2"])
    assert hom_space(blend.B, blend.N) == []
    assert rigidity_report(*blend.gradeds)["rigid"]
