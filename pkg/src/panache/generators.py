"""Random instances over the free group on a, b (and one presented group).

All randomness goes through an explicit ``random.Random`` so that runs are
reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blend import BlendedExtension, rigidity_report, solve_blend
from .ext import Cocycle, coboundary, dual_cocycle, ext_space
from .linalg import Matrix
from .reps import (
    GroupPresentation,
    Representation,
    conjugate,
    direct_sum,
    dual,
    free_group,
    hom_dim,
    trivial,
)

F2 = free_group("a", "b")
Z2 = GroupPresentation(("a", "b"), ("abAB",))

ROTATION = Matrix([[0, -1], [1, 0]])


def random_unimodular(rng: random.Random, n: int, steps: int = 3) -> Matrix:
    """Product of random elementary integer matrices and signs."""
    m = Matrix.identity(n)
    for _ in range(steps):
        if n >= 2:
            i, j = rng.sample(range(n), 2)
            e = Matrix.identity(n) + Matrix.elementary(n, n, i, j, rng.choice([-2, -1, 1, 2]))
        else:
            e = Matrix.identity(1)
        m = m @ e
    signs = Matrix([[rng.choice([-1, 1]) if i == j else 0 for j in range(n)] for i in range(n)]) if n else m
    return m @ signs


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 2) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_rep(rng: random.Random, dim: int, pres: GroupPresentation = F2) -> Representation:
    if pres.relators:
        raise ValueError("random images are only valid for a free group")
    return Representation(pres, dim, tuple(random_unimodular(rng, dim) for _ in pres.generators))


def rotation_rep(pres: GroupPresentation = F2) -> Representation:
    """a acts by the order-4 rotation, the other generators trivially."""
    imgs = [ROTATION] + [Matrix.identity(2)] * (len(pres.generators) - 1)
    return Representation(pres, 2, tuple(imgs))


def random_cocycle(rng: random.Random, sub: Representation, quot: Representation, bound: int = 2) -> Cocycle:
    space = ext_space(quot, sub)
    c = Cocycle.zero(sub, quot)
    for z in space.z1_basis:
        k = rng.randint(-bound, bound)
        if k:
            c = c + z.scale(k)
    return c


def random_class(rng: random.Random, space, bound: int = 2):
    return space.element([rng.randint(-bound, bound) for _ in range(space.dim)])


def perturb(rng: random.Random, M: BlendedExtension) -> BlendedExtension:
    u = random_cocycle(rng, M.A, M.B)
    return M.with_z(tuple(z + c for z, c in zip(M.z, u.blocks)))


def random_rigid_gradeds(rng: random.Random, pres: GroupPresentation = F2, max_dim: int = 2, tries: int = 50):
    for _ in range(tries):
        A, N, B = (random_rep(rng, rng.randint(1, max_dim), pres) for _ in range(3))
        if rigidity_report(A, N, B)["rigid"]:
            return A, N, B
    raise RuntimeError("could not draw rigid gradeds")


def random_blend(rng: random.Random, max_dim: int = 2) -> BlendedExtension:
    """A rigid blend over the free group with random M1, M2 and corner."""
    A, N, B = random_rigid_gradeds(rng, F2, max_dim)
    x = random_cocycle(rng, A, N)
    y = random_cocycle(rng, N, B)
    return perturb(rng, solve_blend(x, y))


def z2_blend(rng: random.Random) -> BlendedExtension:
    """A blend over Z^2 with trivial 1-dim gradeds; x and y are proportional so the pair is panachable."""
    T = trivial(Z2)
    t = rng.choice([-2, -1, 1, 2])
    u = rng.choice([-2, -1, 0, 1, 2])
    v = rng.choice([-2, -1, 0, 1, 2])
    x = Cocycle(T, T, (Matrix([[u]]), Matrix([[v]])))
    y = Cocycle(T, T, (Matrix([[t * u]]), Matrix([[t * v]])))
    M = solve_blend(x, y)
    if M is None:
        raise AssertionError("proportional pair should be panachable")
    return perturb(rng, M)


@dataclass(frozen=True)
class DualityInstance:
    blend: BlendedExtension
    phi: Matrix
    lam: Matrix
    epsilon: int


def _base_object(rng: random.Random) -> Representation:
    kind = rng.randrange(3)
    if kind == 0:
        return rotation_rep()
    return random_rep(rng, rng.randint(1, 2))


def random_duality_instance(rng: random.Random, epsilon: int, tries: int = 50) -> DualityInstance:
    """A blend with a compatible duality datum: A = dual(B), lam = I, N = X + dual(X)."""
    for _ in range(tries):
        B = _base_object(rng)
        A = dual(B)
        X = random_rep(rng, rng.randint(1, 2))
        xd = X.dim
        N = direct_sum(X, dual(X))
        J = Matrix.block([[Matrix.zeros(xd, xd), Matrix.identity(xd)],
                          [Matrix.identity(xd).scale(epsilon), Matrix.zeros(xd, xd)]])
        if rng.random() < 0.5:
            P = random_unimodular(rng, 2 * xd)
            N = conjugate(N, P)
            J = P.T @ J @ P
        if hom_dim(N, A) != 0:
            continue
        lam = Matrix.identity(B.dim)
        y = random_cocycle(rng, N, B)
        d = dual_cocycle(y)
        k0 = random_matrix(rng, B.dim, N.dim, 1)
        cob = coboundary(dual(B), N, k0)
        x = Cocycle(A, N, tuple(dd @ J + c for dd, c in zip(d.blocks, cob.blocks)))
        M = perturb(rng, solve_blend(x, y))
        return DualityInstance(M, J, lam, epsilon)
    raise RuntimeError("could not draw a rigid duality instance")


def standard_eps_form(h: int, eps: int) -> Matrix:
    """I_h for eps = +1; the block form [[0, I], [-I, 0]] for eps = -1 (h even)."""
    if eps == 1:
        return Matrix.identity(h)
    if h % 2:
        raise ValueError("an alternating form needs even dimension")
    k = h // 2
    return Matrix.block([[Matrix.zeros(k, k), Matrix.identity(k)],
                         [Matrix.identity(k).scale(-1), Matrix.zeros(k, k)]])


def random_eps_form(rng: random.Random, h: int, eps: int) -> Matrix:
    """A random nondegenerate h x h form J with J^T = eps J."""
    P = random_unimodular(rng, h) if h else Matrix.identity(0)
    return P.T @ standard_eps_form(h, eps) @ P


def random_flag_pairing(rng: random.Random, a: int, h: int, eps: int, bound: int = 2) -> Matrix:
    """A random eps-symmetric Psi on k^(2a+h) with span(e_1..e_a) isotropic and its orthogonal span(e_1..e_{a+h}).

    Built as S^-T G S^-1 for G in standard form and S block upper triangular.
    """
    from .monodromy import standard_form

    G = standard_form(a, random_eps_form(rng, h, eps), eps)
    n = 2 * a + h
    cuts = [0, a, a + h, n]
    S = Matrix.identity(n)
    for blk in range(3):
        r0, r1 = cuts[blk], cuts[blk + 1]
        if r1 > r0:
            D = random_unimodular(rng, r1 - r0)
            S = S @ Matrix.block_diag(*[D if i == blk else Matrix.identity(cuts[i + 1] - cuts[i])
                                        for i in range(3) if cuts[i + 1] > cuts[i]])
    U = Matrix.identity(n)
    for i in range(n):
        for j in range(n):
            if _block_of(i, cuts) < _block_of(j, cuts):
                U = U + Matrix.elementary(n, n, i, j, rng.randint(-bound, bound))
    S = S @ U
    Si = S.inverse()
    return Si.T @ G @ Si


def _block_of(i: int, cuts) -> int:
    return max(k for k in range(3) if cuts[k] <= i)
