"""Self-duality of blended extensions.

A duality datum pairs an eps-symmetric isomorphism phi: N -> N^ with an
isomorphism lam: A -> B^ such that lam_*M1 and phi^*(dual M2) agree; it then
lifts uniquely to Phi: M1 -> dual(M2).  The obstruction class gamma_M in
Ext(B, B^) vanishes exactly when M carries an eps-symmetric invariant pairing
extending Phi.

Bilinear forms are stored as matrices Psi with psi(m)(m') = m'^T Psi m; an
invariant form satisfies rho(g)^T Psi rho(g) = Psi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .blend import BlendedExtension, RigidityError, torsor_act
from .ext import (
    Cocycle,
    ExtClass,
    class_of,
    dual_cocycle,
    ext_space,
    pullback,
    pushforward,
)
from .linalg import Matrix, nullspace, solve_affine, span_basis, span_equal
from .reps import Morphism, NotAMorphism, Representation, dual, hom_dim, hom_space, transpose

I, Z = Matrix.identity, Matrix.zeros


class IncompatibleDatum(ValueError):
    pass


class ObstructionNonzero(ValueError):
    pass


def _sign(eps) -> int:
    e = int(eps)
    if e not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    return e


@dataclass(frozen=True)
class DualityDatum:
    epsilon: int
    phi: Morphism      # N -> N^
    lam: Morphism      # A -> B^
    big_phi: Morphism  # M1 -> dual(M2), in the basis (B^*, N^*) of the target
    mu: Morphism       # B -> A^, equal to eps * transpose(lam)
    m1: Cocycle
    m2: Cocycle

    @property
    def A(self) -> Representation:
        return self.m1.sub

    @property
    def N(self) -> Representation:
        return self.m1.quot

    @property
    def B(self) -> Representation:
        return self.m2.quot

    @property
    def lift_corner(self) -> Matrix:
        """The block k of Phi = [[lam, k], [0, phi]]."""
        b = self.B.dim
        return self.big_phi.matrix[0:b, self.A.dim:]

    def matches(self, M: BlendedExtension) -> bool:
        return M.m1() == self.m1 and M.m2() == self.m2


def compatibility_classes(m1: Cocycle, m2: Cocycle, phi: Morphism, lam: Morphism) -> tuple:
    """The two classes lam_*M1 and phi^*(dual M2) in Ext(N, B^)."""
    return class_of(pushforward(lam, m1)), class_of(pullback(phi, dual_cocycle(m2)))


def build_datum(N, A, B, M1: Cocycle, M2: Cocycle, phi: Matrix, lam: Matrix, epsilon) -> DualityDatum:
    eps = _sign(epsilon)
    if M1.sub != A or M1.quot != N or M2.sub != N or M2.quot != B:
        raise IncompatibleDatum("M1 must extend N by A and M2 must extend B by N")
    h, a, b = N.dim, A.dim, B.dim
    if phi.shape != (h, h) or lam.shape != (b, a):
        raise IncompatibleDatum("phi must be h x h and lambda must be dim B x dim A")
    if phi.T != phi.scale(eps):
        raise IncompatibleDatum("phi is not eps-symmetric")
    if not phi.is_invertible() or not lam.is_invertible():
        raise IncompatibleDatum("phi and lambda must be invertible")
    try:
        phi_m = Morphism(N, dual(N), phi)
        lam_m = Morphism(A, dual(B), lam)
    except NotAMorphism as exc:
        raise IncompatibleDatum(f"not equivariant: {exc}") from None
    if hom_dim(N, A) != 0:
        raise RigidityError("Hom(N, A) is nonzero")

    left, right = compatibility_classes(M1, M2, phi_m, lam_m)
    if left != right:
        raise IncompatibleDatum("lam_*M1 and phi^*(dual M2) differ in Ext(N, B^)")
    if hom_dim(N, dual(B)) != 0:
        raise RigidityError("Hom(N, B^) is nonzero, the lift of phi is not unique")

    # Phi = [[lam, k], [0, phi]] is equivariant iff rho_B^ k - k rho_N = lam x - d phi
    D2 = dual_cocycle(M2)
    target = Cocycle(dual(B), N, tuple(lam @ x - d @ phi for x, d in zip(M1.blocks, D2.blocks)))
    k = ext_space(N, dual(B)).coboundary_witness(target)
    if k is None:
        raise AssertionError("compatible classes but no lift")
    big = Matrix.block([[lam, k], [Z(h, a), phi]])
    big_phi = Morphism(M1.total(), D2.total(), big)
    mu = Morphism(B, dual(A), lam.T.scale(eps))
    return DualityDatum(eps, phi_m, lam_m, big_phi, mu, M1, M2)


def datum_for(M: BlendedExtension, phi: Matrix, lam: Matrix, epsilon) -> DualityDatum:
    return build_datum(M.N, M.A, M.B, M.m1(), M.m2(), phi, lam, epsilon)


def _check_datum(M: BlendedExtension, d: DualityDatum):
    if not d.matches(M):
        raise IncompatibleDatum("duality datum was built for a different pair M1, M2")


def gamma_difference(M: BlendedExtension, d: DualityDatum) -> Cocycle:
    """lam_*M - eps (transpose Phi)^*(dual M), as an extension of M2 by B^."""
    _check_datum(M, d)
    a, h, b = M.dims
    M2tot = M.m2().total()
    D2tot = dual_cocycle(M.m2()).total()
    # M2 in the basis (N, B) against the dual of dual(M2) in the basis (B, N)
    swap = Matrix.block([[Z(b, h), I(b)], [I(h), Z(h, b)]])
    P = Morphism(M2tot, dual(D2tot), swap)
    t_big = transpose(d.big_phi)  # dual(D2tot) -> dual(M1tot)
    pulled = pullback(t_big @ P, dual_cocycle(M.over_m1()))
    pushed = pushforward(d.lam, M.over_m2())
    return pushed - pulled.scale(d.epsilon)


def gamma_obstruction(M: BlendedExtension, d: DualityDatum) -> ExtClass:
    """The unique gamma in Ext(B, B^) with varpi^* gamma equal to gamma_difference."""
    _check_datum(M, d)
    a, h, b = M.dims
    if hom_dim(M.N, dual(M.B)) != 0:
        raise RigidityError("Hom(N, B^) is nonzero, varpi^* is not injective")
    diff = gamma_difference(M, d)
    Bd = dual(M.B)
    M2tot = diff.quot
    w = h + b
    # unknown f (b x w): the N-columns of diff + rho_B^ f - f rho_M2 must vanish
    columns = []
    for e in range(b * w):
        f = Matrix.elementary(b, w, e // w, e % w)
        col = []
        for rb, rm in zip(Bd.images, M2tot.images):
            col.extend((rb @ f - f @ rm)[:, 0:h].vec())
        columns.append(col)
    rhs = []
    for c in diff.blocks:
        rhs.extend((-c[:, 0:h]).vec())
    if h == 0:
        f = Z(b, w)
    else:
        sol = solve_affine(Matrix.from_columns(columns, len(rhs)), rhs)
        if sol is None:
            raise AssertionError("difference is not pulled back from B")
        f = Matrix.from_vec(sol[0], b, w)
    shifted = diff.coboundary_shift(f)
    gamma = Cocycle(Bd, M.B, tuple(c[:, h:] for c in shifted.blocks))
    return class_of(gamma)


@dataclass(frozen=True)
class AutodualResult:
    blend: BlendedExtension
    delta: ExtClass   # in Ext(B, B^), equal to -gamma/2
    shift: ExtClass   # lam^-1 pushed, in Ext(B, A); the blend is torsor_act(M, shift)


def autodualize(M: BlendedExtension, d: DualityDatum) -> AutodualResult:
    gamma = gamma_obstruction(M, d)
    delta = gamma.scale(Fraction(-1, 2))
    lam_inv = Morphism(d.lam.target, d.lam.source, d.lam.matrix.inverse())
    shift = pushforward(lam_inv, delta)
    Mp = torsor_act(M, shift)
    if not gamma_obstruction(Mp, d).is_zero():
        raise AssertionError("autodualized blend still obstructed")
    return AutodualResult(Mp, delta, shift)


@dataclass(frozen=True)
class EpsPairing:
    blend: BlendedExtension
    matrix: Matrix
    epsilon: int

    def checks(self) -> dict:
        a, h, b = self.blend.dims
        P = self.matrix
        rep = self.blend.total()
        inv = all(g.T @ P @ g == P for g in rep.images)
        perp = nullspace(P[0:a, :]) if a else [tuple(1 if i == j else 0 for i in range(P.cols)) for j in range(P.cols)]
        m1 = [tuple(1 if i == j else 0 for i in range(a + h + b)) for j in range(a + h)]
        return {
            "invariant": inv,
            "nondegenerate": P.is_invertible(),
            "eps_symmetric": P.T == P.scale(self.epsilon),
            "a_isotropic": P[0:a, 0:a].is_zero(),
            "perp_is_m1": span_equal(perp, m1),
        }

    def is_valid(self) -> bool:
        return all(self.checks().values())


def _pairing_system(M: BlendedExtension, d: DualityDatum, symmetric: bool):
    """Linear system for (q, r) in Psi = [[0, 0, eps lam^T], [0, phi, q], [lam, k, r]]."""
    a, h, b = M.dims
    eps = d.epsilon
    lam, phi, k = d.lam.matrix, d.phi.matrix, d.lift_corner
    base = Matrix.block([
        [Z(a, a), Z(a, h), lam.T.scale(eps)],
        [Z(h, a), phi, Z(h, b)],
        [lam, k, Z(b, b)],
    ])
    n = a + h + b
    units = []
    for i in range(h):
        for j in range(b):
            units.append(Matrix.elementary(n, n, a + i, a + h + j))
    for i in range(b):
        for j in range(b):
            units.append(Matrix.elementary(n, n, a + h + i, a + h + j))
    rep = M.total()
    columns = []
    for E in units:
        col = []
        for g in rep.images:
            col.extend((g.T @ E @ g - E).vec())
        if symmetric:
            col.extend((E - E.T.scale(eps)).vec())
        columns.append(col)
    rhs = []
    for g in rep.images:
        rhs.extend((base - g.T @ base @ g).vec())
    if symmetric:
        rhs.extend((base.T.scale(eps) - base).vec())
    return base, units, columns, rhs


def _assemble(base, units, coeffs) -> Matrix:
    out = base
    for c, E in zip(coeffs, units):
        if c:
            out = out + E.scale(c)
    return out


def pairing_extensions(M: BlendedExtension, d: DualityDatum, symmetric: bool = False):
    """All invariant Psi extending Phi with quotient eps lam^T, as (particular, kernel matrices).

    Returns None when there are none.  With ``symmetric`` the solutions are
    also required to satisfy Psi^T = eps Psi.
    """
    _check_datum(M, d)
    base, units, columns, rhs = _pairing_system(M, d, symmetric)
    if not units:
        ok = all(v == 0 for v in rhs)
        return (base, []) if ok else None
    sol = solve_affine(Matrix.from_columns(columns, len(rhs)), rhs)
    if sol is None:
        return None
    part, kernel = sol
    zero = Z(base.rows, base.cols)
    return _assemble(base, units, part), [_assemble(zero, units, v) for v in kernel]


def isoaut_find(M: BlendedExtension, d: DualityDatum) -> EpsPairing:
    """An invariant eps-symmetric pairing extending Phi, by solving then symmetrizing."""
    a, h, b = M.dims
    found = pairing_extensions(M, d)
    if found is None:
        raise ObstructionNonzero("no invariant pairing extends Phi; the obstruction class is nonzero")
    Psi = found[0]
    D = Psi - Psi.T.scale(d.epsilon)
    v = D[a + h:, a + h:]
    rest = D - Matrix.block([[Z(a + h, a + h), Z(a + h, b)], [Z(b, a + h), v]])
    if not rest.is_zero():
        raise AssertionError("Psi - eps Psi^T does not factor through B")
    half = Matrix.block([[Z(a + h, a + h), Z(a + h, b)], [Z(b, a + h), v.scale(Fraction(1, 2))]])
    pairing = EpsPairing(M, Psi - half, d.epsilon)
    if not pairing.is_valid():
        raise AssertionError(f"symmetrized pairing fails: {pairing.checks()}")
    return pairing


def hom_eps_split(B: Representation) -> tuple:
    """Bases (plus, minus) of {w in Hom(B, B^) : w^T = +-w}, as matrices."""
    homs = [f.matrix for f in hom_space(B, dual(B))]
    plus = span_basis([(w + w.T).vec() for w in homs])
    minus = span_basis([(w - w.T).vec() for w in homs])
    n = B.dim
    return [Matrix.from_vec(v, n, n) for v in plus], [Matrix.from_vec(v, n, n) for v in minus]


def hom_eps(B: Representation, eps) -> list:
    plus, minus = hom_eps_split(B)
    return plus if _sign(eps) == 1 else minus
