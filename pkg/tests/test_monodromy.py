import random

import pytest
from hypothesis import given, strategies as st

from oracles import commutator_span_dim
from panache.autodual import EpsPairing, datum_for, isoaut_find
from panache.blend import solve_blend
from panache.ext import Cocycle
from panache.fixtures import load_fixture, rot4_parts
from panache.generators import F2, random_eps_form, random_flag_pairing, standard_eps_form
from panache.linalg import Matrix, nilpotent_exp
from panache.monodromy import (
    IN_P,
    NOT_IN_P,
    W1,
    W2,
    FrameError,
    LieSubalgebra,
    W1Element,
    derived_algebra,
    derived_and_eq4_check,
    filtration_level,
    frame_from_matrix,
    graded_trivial_words,
    graded_trivial_words_rep,
    heisenberg,
    lemma7_fullness,
    lie_closure,
    pairing_on_nu,
    reduced_words,
    standard_form,
    standard_frame,
    theorem2_verify,
    w1_commutator,
    w1_compose,
    w1_lie_algebra,
    z_dim,
    z_space,
)
from panache.reps import trivial

seeds = st.integers(0, 10**6)
SHAPES = [(a, h, e) for a in (1, 2) for h in range(4) for e in (1, -1) if not (e == -1 and h % 2)]

E3 = lambda i, j: Matrix.elementary(3, 3, i, j)


def std_frame(a, h, eps):
    return frame_from_matrix(standard_form(a, standard_eps_form(h, eps), eps), a, h, eps)


def random_w1(rng, frame):
    a, h = frame.a, frame.h
    z = Matrix.zeros(a, a)
    for b in z_space(a, frame.epsilon):
        z = z + b.scale(rng.randint(-3, 3))
    nu = Matrix([[rng.randint(-3, 3) for _ in range(a)] for _ in range(h)], cols=a)
    return W1Element(frame, z, nu)


# frames

def test_standard_pairing_has_identity_frame():
    for a, h, eps in SHAPES:
        assert std_frame(a, h, eps).change_of_basis == Matrix.identity(2 * a + h)


def test_hyperbolic_plane():
    f = frame_from_matrix(Matrix([[0, 1], [1, 0]]), 1, 0, 1)
    assert f.change_of_basis == Matrix.identity(2)
    assert f.form == Matrix([[0, 1], [1, 0]])


@given(seeds, st.sampled_from(SHAPES))
def test_random_frames_reach_standard_form(seed, shape):
    a, h, eps = shape
    Psi = random_flag_pairing(random.Random(seed), a, h, eps)
    f = frame_from_matrix(Psi, a, h, eps)
    S = f.change_of_basis
    assert S.T @ Psi @ S == f.form
    assert f.j_h.T == f.j_h.scale(eps)


def test_frame_errors():
    with pytest.raises(FrameError):
        frame_from_matrix(Matrix([[1, 0], [0, 1]]), 1, 0, 1)   # A not isotropic
    with pytest.raises(FrameError):
        frame_from_matrix(Matrix([[0, 1], [0, 0]]), 1, 0, 1)   # degenerate


def test_frame_from_fixture_pairing():
    T, N, x, y, phi, lam = rot4_parts(-1)
    M = solve_blend(x, y)
    p = isoaut_find(M, datum_for(M, phi, lam, -1))
    f = standard_frame(p)
    assert f.verify()
    assert (f.a, f.h, f.epsilon) == (1, 2, -1)


# the filtration

def test_filtration_levels():
    f = std_frame(1, 2, 1)
    assert filtration_level(f, Matrix.identity(4)) == W2
    nu = Matrix([[1], [0]])
    g = W1Element(f, Matrix.zeros(1, 1), nu).matrix()
    assert filtration_level(f, g) == W1
    bad = Matrix.identity(4) + Matrix.elementary(4, 4, 0, 1)
    assert filtration_level(f, bad) == NOT_IN_P
    levi = Matrix.block_diag(Matrix([[2]]), Matrix([[0, 1], [1, 0]]), Matrix([[Matrix([[2]]).inverse()[0, 0]]]))
    assert filtration_level(f, levi) == IN_P
    with pytest.raises(ValueError):
        filtration_level(f, Matrix.identity(3))


@given(seeds, st.sampled_from(SHAPES))
def test_w1_elements_preserve_the_form(seed, shape):
    rng = random.Random(seed)
    f = frame_from_matrix(random_flag_pairing(rng, *shape), *shape)
    u = random_w1(rng, f)
    g = u.matrix()
    assert g.T @ f.pairing @ g == f.pairing
    assert filtration_level(f, g) in (W1, W2)
    assert (filtration_level(f, g) == W2) == u.nu.is_zero()
    assert W1Element.from_frame_matrix(f, u.frame_matrix()) == u


# the composition law

@given(seeds, st.sampled_from(SHAPES))
def test_law_is_matrix_product(seed, shape):
    rng = random.Random(seed)
    f = std_frame(*shape)
    u, v, w = random_w1(rng, f), random_w1(rng, f), random_w1(rng, f)
    assert w1_compose(u, v).matrix() == u.matrix() @ v.matrix()
    assert w1_compose(w1_compose(u, v), w) == w1_compose(u, w1_compose(v, w))
    assert w1_compose(u, W1Element.identity(f)) == u
    assert w1_compose(u, u.inverse()) == W1Element.identity(f)


@given(seeds, st.sampled_from([s for s in SHAPES if s[1]]))
def test_commutator_of_pure_nu(seed, shape):
    rng = random.Random(seed)
    f = std_frame(*shape)
    a, h, _ = shape
    z0 = Matrix.zeros(a, a)
    n1 = random_w1(rng, f).nu
    n2 = random_w1(rng, f).nu
    c = w1_commutator(W1Element(f, z0, n1), W1Element(f, z0, n2))
    assert c.nu.is_zero()
    assert c.z == pairing_on_nu(f, n1, n2) - pairing_on_nu(f, n2, n1)


# derived group and abelianization

def test_derived_group_small_cases():
    r = derived_and_eq4_check(std_frame(1, 0, 1))
    assert (r["derived_dim"], r["w2_dim"]) == (0, 0)
    r = derived_and_eq4_check(std_frame(1, 0, -1))
    assert (r["derived_dim"], r["w2_dim"]) == (0, 1)
    assert derived_and_eq4_check(std_frame(1, 2, -1))["derived_dim"] == 1
    assert derived_and_eq4_check(std_frame(2, 2, 1))["derived_dim"] == 1


@pytest.mark.parametrize("shape", SHAPES)
def test_derived_group_against_commutator_oracle(shape):
    a, h, eps = shape
    rng = random.Random(hash(shape) % 1000)
    J = random_eps_form(rng, h, eps)
    f = frame_from_matrix(standard_form(a, J, eps), a, h, eps)
    r = derived_and_eq4_check(f)
    assert r["holds"]
    assert r["derived_dim"] == commutator_span_dim(a, h, eps, J)
    assert r["w2_dim"] == z_dim(a, eps)
    if h:
        assert r["derived_dim"] == z_dim(a, eps)
        assert r["ab_dim"] == h * a


# Lie algebras

def test_closure_examples():
    e = E3(0, 1)
    assert lie_closure([e]).dim == 1
    assert lie_closure([E3(0, 1), E3(1, 2)]) == heisenberg(3)
    with pytest.raises(ValueError):
        lie_closure([Matrix.identity(3)])


@given(seeds, st.sampled_from([s for s in SHAPES if s[1]]))
def test_closure_stays_in_w1(seed, shape):
    rng = random.Random(seed)
    f = std_frame(*shape)
    n = w1_lie_algebra(f)
    picks = []
    for _ in range(2):
        X = Matrix.zeros(f.dim, f.dim)
        for b in n.basis:
            X = X + b.scale(rng.randint(-2, 2))
        picks.append(X)
    g = lie_closure(picks, f.dim)
    assert g.is_closed()
    assert n.contains_all(g)
    for X in g.basis:
        assert filtration_level(f, nilpotent_exp(X), frame_coordinates=True) in (W1, W2)


def test_fullness_examples():
    H = heisenberg(3)
    r = lemma7_fullness(H, H)
    assert r["full"] and r["criterion"] and r["induction_holds"]
    r = lemma7_fullness(derived_algebra(H), H)
    assert not r["full"] and not r["criterion"] and r["agree"]
    gens = [E3(0, 1) + E3(0, 2), E3(1, 2)]
    with pytest.raises(ValueError):
        lemma7_fullness(LieSubalgebra(3, tuple(gens)), H)
    g = lie_closure(gens)
    r = lemma7_fullness(g, H)
    assert r["criterion"] and r["full"]
    assert g == H
    r = lemma7_fullness(lie_closure([E3(0, 1) + E3(0, 2)]), H)
    assert not r["criterion"] and not r["full"]
    with pytest.raises(ValueError):
        lemma7_fullness(H, derived_algebra(H))


def test_fullness_on_w1_algebra():
    f = std_frame(2, 2, 1)
    n = w1_lie_algebra(f)
    r = lemma7_fullness(n, n)
    assert r["full"] and all(r["induction"])


# words

def test_reduced_words_order():
    words = list(reduced_words(F2, 2))
    assert words[:4] == ["a", "A", "b", "B"]
    assert "aA" not in words
    assert len(words) == 4 + 12


def test_split_trivial_blend_has_no_new_words():
    T = trivial(F2)
    M = solve_blend(Cocycle.zero(T, T), Cocycle.zero(T, T))
    # every image is the identity, so every word qualifies and all collapse onto it
    assert graded_trivial_words(M, 3) == []


def test_nonsplit_trivial_gradeds_every_word_qualifies():
    T = trivial(F2)
    x = Cocycle(T, T, (Matrix([[1]]), Matrix([[0]])))
    y = Cocycle(T, T, (Matrix([[0]]), Matrix([[1]])))
    M = solve_blend(x, y)
    found = graded_trivial_words(M, 3)
    rep = M.total()
    distinct = {rep.evaluate_word(w) for w in reduced_words(F2, 3)} - {Matrix.identity(3)}
    assert len(found) == len(distinct)
    for w, X in found:
        assert all(X[i, j] == 0 for i in range(3) for j in range(i + 1))


def test_finite_gradeds_and_rotation_words():
    T, N, x, y, phi, lam = rot4_parts(-1)
    M = solve_blend(x, y)
    found = graded_trivial_words(M, 8)
    mats = {M.total().evaluate_word(w) for w, _ in found}
    rep = M.total()
    for w in ("aaaa", "abAB", "baaaaB"):
        g = rep.evaluate_word(w)
        assert g == Matrix.identity(4) or g in mats
    with pytest.raises(ValueError):
        graded_trivial_words_rep(rep, (1, 2, 1), 0)


# the full pipeline on the fixtures

@pytest.mark.parametrize("name, w2", [("rot4-antisym", 1), ("rot4-sym-autodual", 0), ("rot4-sym-nonautodual", 1)])
def test_pipeline_on_fixtures(name, w2):
    inst = load_fixture(name)
    M = inst.blends["M"]
    d = datum_for(M, inst.duality["phi"], inst.duality["lambda"], inst.duality["epsilon"])
    r = theorem2_verify(M, d, 8)
    assert r["hypothesis_certified"]
    assert r["conclusion"] == "confirmed"
    assert r["w2_dim"] == w2 == r["w2_expected"]
    assert r["decomposition"]["holds"]


def test_pipeline_inconclusive_at_tiny_depth():
    inst = load_fixture("rot4-antisym")
    M = inst.blends["M"]
    d = datum_for(M, inst.duality["phi"], inst.duality["lambda"], -1)
    r = theorem2_verify(M, d, 1)
    assert not r["hypothesis_certified"]
    assert r["conclusion"] == "inconclusive"


def test_eps_pairing_dataclass_checks():
    T, N, x, y, phi, lam = rot4_parts(-1)
    M = solve_blend(x, y)
    p = isoaut_find(M, datum_for(M, phi, lam, -1))
    broken = EpsPairing(M, p.matrix.scale(2) + Matrix.elementary(4, 4, 0, 0), -1)
    assert not broken.is_valid()
