"""Blended extensions: three-step block-triangular representations.

A blended extension of M2 (an extension of B by N) by M1 (an extension of N
by A) is presented by the images

    [[rho_A(g), x_g, z_g],
     [0,     rho_N(g), y_g],
     [0,        0, rho_B(g)]]

where x gives M1 and y gives M2.  Two blends of the same pair are compared
through isomorphisms that are the identity on M1 and on M2; in these
coordinates those are exactly the matrices I + E13(f).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .ext import Cocycle, ExtClass, class_of, ext_space
from .linalg import Matrix, nullspace, solve_affine
from .reps import (
    Morphism,
    Representation,
    _same_group,
    direct_sum,
    hom_dim,
    hom_space,
)
from .subquotient import Subquotient, materialize, row, stack


class NotABlend(ValueError):
    pass


class RigidityError(ValueError):
    pass


class BlendMismatch(ValueError):
    pass


I, Z = Matrix.identity, Matrix.zeros


@dataclass(frozen=True)
class ExtensionWitness:
    """An extension as a total object with its inclusion and projection."""

    total: Representation
    sub_inclusion: Morphism
    quot_projection: Morphism

    def __post_init__(self):
        i, p = self.sub_inclusion, self.quot_projection
        if i.target != self.total or p.source != self.total:
            raise ValueError("structure maps do not meet the total object")
        if not (p.matrix @ i.matrix).is_zero():
            raise ValueError("projection does not kill the sub")
        if i.matrix.rank() != i.source.dim or p.matrix.rank() != p.target.dim:
            raise ValueError("inclusion not injective or projection not surjective")
        if i.source.dim + p.target.dim != self.total.dim:
            raise ValueError("sequence is not exact")

    @property
    def sub(self) -> Representation:
        return self.sub_inclusion.source

    @property
    def quot(self) -> Representation:
        return self.quot_projection.target

    @classmethod
    def from_cocycle(cls, c: Cocycle) -> "ExtensionWitness":
        return cls(c.total(), c.inclusion(), c.projection())

    def to_cocycle(self) -> Cocycle:
        """Normalize to block form: sub basis first, then canonical lifts of the quotient basis."""
        p, q = self.sub.dim, self.quot.dim
        lifts = []
        for k in range(q):
            sol = solve_affine(self.quot_projection.matrix, [1 if i == k else 0 for i in range(q)])
            lifts.append(sol[0])
        T = Matrix.from_columns(self.sub_inclusion.matrix.columns() + lifts, self.total.dim)
        Ti = T.inverse()
        blocks = []
        for g in self.total.images:
            m = Ti @ g @ T
            blocks.append(m[0:p, p:p + q])
        out = Cocycle(self.sub, self.quot, tuple(blocks))
        if not out.is_cocycle():
            raise AssertionError("normalization broke the relators")
        return out


def _as_cocycle(w: Union[Cocycle, ExtensionWitness]) -> Cocycle:
    return w.to_cocycle() if isinstance(w, ExtensionWitness) else w


@dataclass(frozen=True)
class BlendedExtension:
    A: Representation
    N: Representation
    B: Representation
    x: tuple
    y: tuple
    z: tuple

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _same_group(self.A, self.N, self.B)
        a, h, b = self.dims
        n = len(self.A.presentation.generators)
        for name, shape in (("x", (a, h)), ("y", (h, b)), ("z", (a, b))):
            blocks = getattr(self, name)
            if len(blocks) != n:
                raise NotABlend(f"{name}: one block per generator is required")
            for m in blocks:
                if m.shape != shape:
                    raise NotABlend(f"{name}: block of shape {m.shape}, expected {shape}")
        report = self.total().validate()
        if not report:
            raise NotABlend(f"blocks violate the relators: {report.reason}")

    @property
    def dims(self) -> tuple:
        return self.A.dim, self.N.dim, self.B.dim

    @property
    def gradeds(self) -> tuple:
        return self.A, self.N, self.B

    def total(self) -> Representation:
        a, h, b = self.dims
        imgs = []
        for ra, rn, rb, x, y, z in zip(self.A.images, self.N.images, self.B.images, self.x, self.y, self.z):
            imgs.append(Matrix.block([
                [ra, x, z],
                [Z(h, a), rn, y],
                [Z(b, a), Z(b, h), rb],
            ]))
        return Representation(self.A.presentation, a + h + b, tuple(imgs))

    # the two one-step extensions and their witnesses
    def m1(self) -> Cocycle:
        return Cocycle(self.A, self.N, self.x)

    def m2(self) -> Cocycle:
        return Cocycle(self.N, self.B, self.y)

    def m1_witness(self) -> ExtensionWitness:
        return ExtensionWitness.from_cocycle(self.m1())

    def m2_witness(self) -> ExtensionWitness:
        return ExtensionWitness.from_cocycle(self.m2())

    # structure maps
    def iota_tilde(self) -> Morphism:
        """M1 -> M."""
        a, h, b = self.dims
        return Morphism(self.m1().total(), self.total(), stack(I(a + h), Z(b, a + h)))

    def pi_tilde(self) -> Morphism:
        """M -> M2."""
        a, h, b = self.dims
        return Morphism(self.total(), self.m2().total(), row(Z(h + b, a), I(h + b)))

    def j_tilde(self) -> Morphism:
        """A -> M."""
        a, h, b = self.dims
        return Morphism(self.A, self.total(), stack(I(a), Z(h + b, a)))

    def varpi_tilde(self) -> Morphism:
        """M -> B."""
        a, h, b = self.dims
        return Morphism(self.total(), self.B, row(Z(b, a + h), I(b)))

    # readings of M as a one-step extension
    def over_m1(self) -> Cocycle:
        """M as an extension of B by M1."""
        blocks = tuple(stack(z, y) for z, y in zip(self.z, self.y))
        return Cocycle(self.m1().total(), self.B, blocks)

    def over_m2(self) -> Cocycle:
        """M as an extension of M2 by A."""
        blocks = tuple(row(x, z) for x, z in zip(self.x, self.z))
        return Cocycle(self.A, self.m2().total(), blocks)

    def same_pair(self, other: "BlendedExtension") -> bool:
        return self.gradeds == other.gradeds and self.x == other.x and self.y == other.y

    def with_z(self, z: Sequence[Matrix]) -> "BlendedExtension":
        return BlendedExtension(self.A, self.N, self.B, self.x, self.y, tuple(z))


@dataclass(frozen=True)
class BlendedIso:
    source: BlendedExtension
    target: BlendedExtension
    matrix: Matrix

    def __post_init__(self):
        if not self.source.same_pair(self.target):
            raise BlendMismatch("isomorphism between blends of different pairs")
        Morphism(self.source.total(), self.target.total(), self.matrix)
        a, h, b = self.source.dims
        D = self.matrix - Matrix.identity(a + h + b)
        if not D[0:a + h, 0:a + h].is_zero() or not D[a:, a:].is_zero():
            raise BlendMismatch("isomorphism does not induce the identity on M1 and M2")

    @property
    def corner(self) -> Matrix:
        """The block f of I + E13(f)."""
        a, h, b = self.source.dims
        return self.matrix[0:a, a + h:]


def rigidity_report(A: Representation, N: Representation, B: Representation) -> dict:
    hna = hom_dim(N, A)
    hbn = hom_dim(B, N)
    return {"hom_N_A": hna, "hom_B_N": hbn, "rigid": hna == 0 and hbn == 0}


def blend_system(A, N, B, x, y):
    """Affine system L vec(z) = rhs whose solutions are the valid corners z."""
    pres = A.presentation
    a, h, b = A.dim, N.dim, B.dim
    n = len(pres.generators)
    k = a * b

    def corners(z):
        imgs = []
        for ra, rn, rb, xx, yy, zz in zip(A.images, N.images, B.images, x, y, z):
            imgs.append(Matrix.block([[ra, xx, zz], [Z(h, a), rn, yy], [Z(b, a), Z(b, h), rb]]))
        rep = Representation(pres, a + h + b, tuple(imgs))
        out = []
        for r in pres.relators:
            out.extend(rep.evaluate_word(r)[0:a, a + h:].vec())
        return out

    zero = [Z(a, b)] * n
    base = corners(zero)
    columns = []
    for gi in range(n):
        for e in range(k):
            z = list(zero)
            z[gi] = Matrix.elementary(a, b, e // b, e % b)
            columns.append([c - c0 for c, c0 in zip(corners(z), base)])
    L = Matrix.from_columns(columns, len(base)) if columns else Matrix.zeros(len(base), 0)
    return L, [-c for c in base]


def solve_blend(M1: Union[Cocycle, ExtensionWitness], M2: Union[Cocycle, ExtensionWitness]) -> Optional[BlendedExtension]:
    """A blend of M2 by M1, or None when the pair is not panachable."""
    c1, c2 = _as_cocycle(M1), _as_cocycle(M2)
    if c1.quot != c2.sub:
        raise BlendMismatch("the quotient of M1 must be the sub of M2")
    A, N, B = c1.sub, c1.quot, c2.quot
    a, b = A.dim, B.dim
    n = len(A.presentation.generators)
    if not A.presentation.relators:
        return BlendedExtension(A, N, B, c1.blocks, c2.blocks, (Z(a, b),) * n)
    L, rhs = blend_system(A, N, B, c1.blocks, c2.blocks)
    if L.cols == 0:
        if any(v != 0 for v in rhs):
            return None
        return BlendedExtension(A, N, B, c1.blocks, c2.blocks, (Z(a, b),) * n)
    sol = solve_affine(L, rhs)
    if sol is None:
        return None
    z = Cocycle.from_vector(A, B, sol[0]).blocks
    return BlendedExtension(A, N, B, c1.blocks, c2.blocks, z)


def _u_cocycle(M: BlendedExtension, U: Union[ExtClass, Cocycle]) -> Cocycle:
    c = U.representative() if isinstance(U, ExtClass) else U
    if c.sub != M.A or c.quot != M.B:
        raise BlendMismatch("the class must be an extension of B by A")
    return c


def torsor_act(M: BlendedExtension, U: Union[ExtClass, Cocycle]) -> BlendedExtension:
    u = _u_cocycle(M, U)
    return M.with_z(tuple(z + c for z, c in zip(M.z, u.blocks)))


def is_isomorphic(M: BlendedExtension, Mp: BlendedExtension) -> Optional[BlendedIso]:
    """An isomorphism M -> M' inducing the identity on M1 and M2, or None."""
    if not M.same_pair(Mp):
        raise BlendMismatch("blends of different pairs")
    a, h, b = M.dims
    diff = Cocycle(M.A, M.B, tuple(zp - z for zp, z in zip(Mp.z, M.z)))
    f = ext_space(M.B, M.A).coboundary_witness(diff)
    if f is None:
        return None
    # I - E13(f) carries M to M' when z' = z + rho_A f - f rho_B
    T = Matrix.identity(a + h + b) - Matrix.block([[Z(a, a + h), f], [Z(h + b, a + h), Z(h + b, b)]])
    return BlendedIso(M, Mp, T)


def torsor_difference(M: BlendedExtension, Mp: BlendedExtension, require_rigidity: bool = True) -> ExtClass:
    """The class U with torsor_act(M, U) isomorphic to M'."""
    if not M.same_pair(Mp):
        raise BlendMismatch("blends of different pairs")
    if require_rigidity:
        rep = rigidity_report(*M.gradeds)
        if not rep["rigid"]:
            raise RigidityError(f"rigidity fails: {rep}")
    return class_of(Cocycle(M.A, M.B, tuple(zp - z for zp, z in zip(Mp.z, M.z))))


def automorphism_space(M: BlendedExtension) -> list:
    """Basis of the strictly block-upper X with I + X an automorphism of M."""
    a, h, b = M.dims
    d = a + h + b
    rep = M.total()
    # unknowns: blocks (1,2) a*h, (1,3) a*b, (2,3) h*b
    slots = [(0, a, a, a + h), (0, a, a + h, d), (a, a + h, a + h, d)]
    basis_mats = []
    for r0, r1, c0, c1 in slots:
        for i in range(r0, r1):
            for j in range(c0, c1):
                basis_mats.append(Matrix.elementary(d, d, i, j))
    if not basis_mats:
        return []
    columns = []
    for E in basis_mats:
        col = []
        for g in rep.images:
            col.extend((E @ g - g @ E).vec())
        columns.append(col)
    K = nullspace(Matrix.from_columns(columns))
    out = []
    for v in K:
        X = Z(d, d)
        for c, E in zip(v, basis_mats):
            if c:
                X = X + E.scale(c)
        out.append(X)
    return out


def expected_automorphisms(M: BlendedExtension) -> list:
    """{E13(f) : f in Hom(B, A)}, the automorphism space predicted under rigidity."""
    a, h, b = M.dims
    return [
        Matrix.block([[Z(a, a + h), f.matrix], [Z(h + b, a + h), Z(h + b, b)]])
        for f in hom_space(M.B, M.A)
    ]


# twisting by a class, as subquotients of direct sums

def _mu_parts(M: BlendedExtension, u: Cocycle):
    a, h, b = M.dims
    dM, dU, d1, d2 = a + h + b, a + b, a + h, h + b
    iota_t = stack(I(d1), Z(b, d1))          # M1 -> M
    pi_t = row(Z(d2, a), I(d2))              # M -> M2
    iota_pi = stack(row(Z(h, a), I(h)), Z(b, d1))  # M1 -> N -> M2
    return a, h, b, dM, dU, d1, d2, iota_t, pi_t, iota_pi


def _blend_from_subquotient(M: BlendedExtension, sq: Subquotient) -> BlendedExtension:
    a, h, b = M.dims
    xs, ys, zs = [], [], []
    for m, ra, rn, rb in zip(sq.rep.images, M.A.images, M.N.images, M.B.images):
        if (m[0:a, 0:a] != ra or m[a:a + h, a:a + h] != rn or m[a + h:, a + h:] != rb
                or not m[a:, 0:a].is_zero() or not m[a + h:, a:a + h].is_zero()):
            raise AssertionError("subquotient did not normalize to block form")
        xs.append(m[0:a, a:a + h])
        ys.append(m[a:a + h, a + h:])
        zs.append(m[0:a, a + h:])
    out = BlendedExtension(M.A, M.N, M.B, xs, ys, zs)
    if not out.same_pair(M):
        raise AssertionError("subquotient changed M1 or M2")
    return out


def _mu_subquotient(M: BlendedExtension, u: Cocycle) -> Subquotient:
    """M + j_*U: the Baer sum over B of M and the pushforward of U to M1."""
    a, h, b, dM, dU, d1, d2, iota_t, pi_t, iota_pi = _mu_parts(M, u)
    V = direct_sum(M.total(), u.total(), M.m1().total())
    varpi_t = row(Z(b, d1), I(b))
    p_u = row(Z(b, a), I(b))
    equations = row(varpi_t, -p_u, Z(b, d1))
    rel = []
    for e in I(d1).columns():
        rel.append(tuple(iota_t.apply(e)) + (0,) * dU + tuple(-x for x in e))
    for e in I(a).columns():
        i_e = tuple(e) + (0,) * b
        j_e = tuple(e) + (0,) * h
        rel.append((0,) * dM + tuple(-x for x in i_e) + j_e)
    sub_map = stack(iota_t, Z(dU, d1), Z(d1, d1))
    quot_map = row(pi_t, Z(d2, dU), iota_pi)
    return materialize(V, equations, rel, sub_map, quot_map, range(h, h + b))


def _mu_prime_subquotient(M: BlendedExtension, u: Cocycle) -> Subquotient:
    """M + varpi^*U: the Baer sum over M2 of M and the pullback of U to M2."""
    a, h, b, dM, dU, d1, d2, iota_t, pi_t, iota_pi = _mu_parts(M, u)
    V = direct_sum(M.total(), u.total(), M.m2().total())
    p_u = row(Z(b, a), I(b))
    varpi = row(Z(b, h), I(b))
    equations = stack(
        row(pi_t, Z(d2, dU), -I(d2)),
        row(Z(b, dM), p_u, -varpi),
    )
    rel = []
    for e in I(a).columns():
        rel.append(tuple(e) + (0,) * (h + b) + tuple(-x for x in e) + (0,) * b + (0,) * d2)
    sub_map = stack(iota_t, Z(dU, d1), iota_pi)
    quot_map = row(Z(d2, dM), Z(d2, dU), I(d2))
    return materialize(V, equations, rel, sub_map, quot_map, range(h, h + b))


def build_MU(M: BlendedExtension, U: Union[ExtClass, Cocycle]) -> BlendedExtension:
    return _blend_from_subquotient(M, _mu_subquotient(M, _u_cocycle(M, U)))


def build_MU_prime(M: BlendedExtension, U: Union[ExtClass, Cocycle]) -> BlendedExtension:
    return _blend_from_subquotient(M, _mu_prime_subquotient(M, _u_cocycle(M, U)))


def canonical_iso(M: BlendedExtension, U: Union[ExtClass, Cocycle]) -> BlendedIso:
    """The map (m, u, m1) -> (m + iota~ m1, u, pi~ m + iota pi m1) between the two twists."""
    u = _u_cocycle(M, U)
    a, h, b, dM, dU, d1, d2, iota_t, pi_t, iota_pi = _mu_parts(M, u)
    sq = _mu_subquotient(M, u)
    sq_p = _mu_prime_subquotient(M, u)
    F = Matrix.block([
        [I(dM), Z(dM, dU), iota_t],
        [Z(dU, dM), I(dU), Z(dU, d1)],
        [pi_t, Z(d2, dU), iota_pi],
    ])
    matrix = sq_p.matrix_of(F @ sq.basis)
    return BlendedIso(_blend_from_subquotient(M, sq), _blend_from_subquotient(M, sq_p), matrix)


# pulling M1 back along f: B -> N

def pullback_class(M: BlendedExtension, f: Morphism) -> Cocycle:
    """f^*M1 as an extension of B by A."""
    if f.source != M.B or f.target != M.N:
        raise BlendMismatch("f must be a morphism B -> N")
    return Cocycle(M.A, M.B, tuple(x @ f.matrix for x in M.x))


def a2_isomorphism(M: BlendedExtension, f: Morphism):
    """The isomorphism M -> M_U for U = f^*M1, as (M_U, matrix in M_U's normalized basis).

    It sends m to the class of (m, (0, m_B), (0, -f m_B)); it is the identity
    on M1.
    """
    u = pullback_class(M, f)
    a, h, b = M.dims
    sq = _mu_subquotient(M, u)
    dM = a + h + b
    G = stack(
        I(dM),
        row(Z(a, a + h), Z(a, b)),
        row(Z(b, a + h), I(b)),
        row(Z(a, a + h), Z(a, b)),
        row(Z(h, a + h), -f.matrix),
    )
    matrix = sq.matrix_of(G)
    MU = _blend_from_subquotient(M, sq)
    Morphism(M.total(), MU.total(), matrix)
    if matrix[0:a + h, 0:a + h] != I(a + h) or not matrix[a + h:, 0:a + h].is_zero():
        raise AssertionError("A.2 isomorphism is not the identity on M1")
    return MU, matrix


def induced_m2_automorphism(M: BlendedExtension, f: Morphism) -> Matrix:
    """The map induced on M2 by M -> M_{f^*M1}; equals id - iota f varpi."""
    a, h, b = M.dims
    _, matrix = a2_isomorphism(M, f)
    induced = matrix[a:, a:]
    expected = I(h + b) - Matrix.block([[Z(h, h), f.matrix], [Z(b, h), Z(b, b)]])
    if induced != expected:
        raise AssertionError("induced automorphism differs from id - iota f varpi")
    return induced


def lifts_to_m1(M: BlendedExtension, f: Morphism) -> bool:
    """Whether f: B -> N factors as pi after some morphism B -> M1."""
    a, h, b = M.dims
    M1 = M.m1().total()
    homs = hom_space(M.B, M1)
    if not homs:
        return f.matrix.is_zero()
    cols = [g.matrix[a:, :].vec() for g in homs]
    return solve_affine(Matrix.from_columns(cols, h * b), f.matrix.vec()) is not None
