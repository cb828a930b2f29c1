"""Parabolic subgroups of an eps-symmetric space and monodromy Lie algebras.

A frame for an eps-symmetric pairing Psi on M, with A isotropic and
A-perp = M1, is a basis change S with

    S^T Psi S = [[0, 0, eps I_a], [0, J, 0], [I_a, 0, 0]].

In frame coordinates, the unipotent radical of the stabilizer of the flag
A < M1 < M consists of the matrices

    [[I, xi^T, zeta], [0, I, nu], [0, 0, I]],  xi = -eps J nu,
    zeta = z - nu^T J nu / 2,  z^T = -eps z,

and its corner subgroup (nu = 0) is the derived group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .autodual import DualityDatum, EpsPairing, autodualize, hom_eps
from .blend import BlendedExtension
from .linalg import (
    Matrix,
    bracket,
    format_scalar,
    is_nilpotent,
    nilpotent_log,
    nullspace,
    span_basis,
    span_contains,
    span_equal,
    span_intersection,
)
from .reps import Representation

I, Z = Matrix.identity, Matrix.zeros

NOT_IN_P, IN_P, W1, W2 = "not_in_P", "P", "W-1", "W-2"


class FrameError(ValueError):
    pass


def standard_form(a: int, J: Matrix, eps: int) -> Matrix:
    h = J.rows
    return Matrix.block([
        [Z(a, a), Z(a, h), I(a).scale(eps)],
        [Z(h, a), J, Z(h, a)],
        [I(a), Z(a, h), Z(a, a)],
    ])


@dataclass(frozen=True)
class ParabolicFrame:
    a: int
    h: int
    change_of_basis: Matrix
    j_h: Matrix
    epsilon: int
    pairing: Matrix

    @property
    def dim(self) -> int:
        return 2 * self.a + self.h

    @property
    def form(self) -> Matrix:
        return standard_form(self.a, self.j_h, self.epsilon)

    def to_frame(self, g: Matrix) -> Matrix:
        return self.change_of_basis.inverse() @ g @ self.change_of_basis

    def from_frame(self, g: Matrix) -> Matrix:
        return self.change_of_basis @ g @ self.change_of_basis.inverse()

    def verify(self) -> bool:
        S = self.change_of_basis
        return S.is_invertible() and S.T @ self.pairing @ S == self.form


def frame_from_matrix(Psi: Matrix, a: int, h: int, eps: int) -> ParabolicFrame:
    """Hyperbolic completion of the flag spanned by the first a and a + h basis vectors."""
    n = Psi.rows
    if Psi.shape != (n, n) or n != 2 * a + h:
        raise FrameError("pairing has the wrong size for the flag")
    if not Psi.is_invertible():
        raise FrameError("degenerate pairing")
    if Psi.T != Psi.scale(eps):
        raise FrameError("pairing is not eps-symmetric")
    if not Psi[0:a, 0:a + h].is_zero():
        raise FrameError("A is not isotropic or not orthogonal to M1")
    cols = I(n).columns()
    E = Matrix.from_columns(cols[0:a], n) if a else Z(n, 0)
    Np = Matrix.from_columns(cols[a:a + h], n) if h else Z(n, 0)
    J = Np.T @ Psi @ Np
    if h and not J.is_invertible():
        raise FrameError("induced form on M1/A is degenerate")
    corner = Psi[0:a, a + h:]
    T = corner.inverse().scale(eps)
    F0 = Matrix.block([[Z(a + h, a)], [T]])
    if h:
        beta = -(J.inverse() @ Np.T @ Psi @ F0)
        F1 = F0 + Np @ beta
    else:
        F1 = F0
    C = F1.T @ Psi @ F1
    F = F1 + E @ C.scale(Fraction(-1, 2))
    S = Matrix.block([[E, Np, F]])
    frame = ParabolicFrame(a, h, S, J, eps, Psi)
    if not frame.verify():
        raise AssertionError("frame does not bring the pairing to standard form")
    return frame


def standard_frame(p: EpsPairing) -> ParabolicFrame:
    a, h, b = p.blend.dims
    if a != b:
        raise FrameError("A and B must have the same dimension")
    checks = p.checks()
    if not (checks["a_isotropic"] and checks["perp_is_m1"] and checks["nondegenerate"]):
        raise FrameError(f"pairing does not fit the flag: {checks}")
    return frame_from_matrix(p.matrix, a, h, p.epsilon)


def flag_blocks(frame: ParabolicFrame, g: Matrix) -> dict:
    a, h = frame.a, frame.h
    cuts = [(0, a), (a, a + h), (a + h, 2 * a + h)]
    return {(i, j): g[r0:r1, c0:c1] for i, (r0, r1) in enumerate(cuts) for j, (c0, c1) in enumerate(cuts)}


def filtration_level(frame: ParabolicFrame, g: Matrix, frame_coordinates: bool = False) -> str:
    """Deepest of not_in_P, P, W-1, W-2 containing g."""
    if g.shape != (frame.dim, frame.dim):
        raise ValueError("dimension mismatch")
    gf = g if frame_coordinates else frame.to_frame(g)
    if gf.T @ frame.form @ gf != frame.form:
        return NOT_IN_P
    bl = flag_blocks(frame, gf)
    if any(not bl[(i, j)].is_zero() for i in range(3) for j in range(i)):
        return NOT_IN_P
    if any(bl[(i, i)] != I(bl[(i, i)].rows) for i in range(3)):
        return IN_P
    if bl[(0, 1)].is_zero() and bl[(1, 2)].is_zero():
        return W2
    return W1


def z_space(a: int, eps: int) -> list:
    """Basis of {z : z^T = -eps z} in a x a matrices."""
    out = []
    for i in range(a):
        for j in range(i, a):
            if i == j:
                if eps == -1:
                    out.append(Matrix.elementary(a, a, i, i))
                continue
            out.append(Matrix.elementary(a, a, i, j) - Matrix.elementary(a, a, j, i).scale(eps))
    return out


def z_dim(a: int, eps: int) -> int:
    return a * (a - 1) // 2 if eps == 1 else a * (a + 1) // 2


@dataclass(frozen=True)
class W1Element:
    frame: ParabolicFrame
    z: Matrix
    nu: Matrix

    def __post_init__(self):
        a, h = self.frame.a, self.frame.h
        if self.z.shape != (a, a) or self.nu.shape != (h, a):
            raise ValueError("z must be a x a and nu must be h x a")
        if self.z.T != self.z.scale(-self.frame.epsilon):
            raise ValueError("z must satisfy z^T = -eps z")

    @property
    def xi(self) -> Matrix:
        return (self.frame.j_h @ self.nu).scale(-self.frame.epsilon)

    @property
    def zeta(self) -> Matrix:
        return self.z - (self.nu.T @ self.frame.j_h @ self.nu).scale(Fraction(1, 2))

    def frame_matrix(self) -> Matrix:
        a, h = self.frame.a, self.frame.h
        return Matrix.block([
            [I(a), self.xi.T, self.zeta],
            [Z(h, a), I(h), self.nu],
            [Z(a, a), Z(a, h), I(a)],
        ])

    def matrix(self) -> Matrix:
        return self.frame.from_frame(self.frame_matrix())

    @classmethod
    def identity(cls, frame: ParabolicFrame) -> "W1Element":
        return cls(frame, Z(frame.a, frame.a), Z(frame.h, frame.a))

    @classmethod
    def from_frame_matrix(cls, frame: ParabolicFrame, g: Matrix) -> "W1Element":
        if filtration_level(frame, g, frame_coordinates=True) not in (W1, W2):
            raise ValueError("matrix is not in the unipotent radical")
        bl = flag_blocks(frame, g)
        nu = bl[(1, 2)]
        z = bl[(0, 2)] + (nu.T @ frame.j_h @ nu).scale(Fraction(1, 2))
        return cls(frame, z, nu)

    def inverse(self) -> "W1Element":
        return W1Element(self.frame, -self.z, -self.nu)


def pairing_on_nu(frame: ParabolicFrame, nu: Matrix, nu2: Matrix) -> Matrix:
    """phi(nu, nu') = nu'^T J nu, an a x a matrix."""
    return nu2.T @ frame.j_h @ nu


def w1_compose(u: W1Element, v: W1Element) -> W1Element:
    if u.frame != v.frame:
        raise ValueError("elements of different frames")
    f = u.frame
    cross = pairing_on_nu(f, u.nu, v.nu) - pairing_on_nu(f, v.nu, u.nu)
    return W1Element(f, u.z + v.z + cross.scale(Fraction(1, 2)), u.nu + v.nu)


def w1_commutator(u: W1Element, v: W1Element) -> W1Element:
    return w1_compose(w1_compose(u, v), w1_compose(u.inverse(), v.inverse()))


def derived_and_eq4_check(frame: ParabolicFrame) -> dict:
    """Commutators of W-1 span the corner {z^T = -eps z}; the abelianization has dimension h a."""
    a, h, eps = frame.a, frame.h, frame.epsilon
    nus = [Matrix.elementary(h, a, i, j) for i in range(h) for j in range(a)]
    comms = []
    for n1 in nus:
        for n2 in nus:
            c = w1_commutator(W1Element(frame, Z(a, a), n1), W1Element(frame, Z(a, a), n2))
            if not c.nu.is_zero():
                raise AssertionError("commutator left the corner")
            comms.append(c.z.vec())
    derived = span_basis(comms)
    zs = [z.vec() for z in z_space(a, eps)]
    w2 = len(zs)
    derived_ok = span_equal(derived, zs) if h >= 1 else not derived
    w1_dim = w2 + h * a
    return {
        "a": a,
        "h": h,
        "epsilon": eps,
        "w1_dim": w1_dim,
        "w2_dim": w2,
        "derived_dim": len(derived),
        "derived_equals_w2": span_equal(derived, zs),
        "ab_dim": w1_dim - len(derived),
        "ab_expected": h * a,
        "holds": derived_ok and (h == 0 or w1_dim - len(derived) == h * a),
    }


# Lie algebras of nilpotent matrices

def _vecs(ms: Iterable[Matrix]) -> list:
    return [m.vec() for m in ms]


@dataclass(frozen=True)
class LieSubalgebra:
    ambient_dim: int
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list:
        return _vecs(self.basis)

    def contains(self, X: Matrix) -> bool:
        return span_contains(self.vectors(), [X.vec()])

    def contains_all(self, other: "LieSubalgebra") -> bool:
        return span_contains(self.vectors(), other.vectors())

    def __eq__(self, other):
        if not isinstance(other, LieSubalgebra):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and span_equal(self.vectors(), other.vectors())

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def is_closed(self) -> bool:
        return all(self.contains(bracket(x, y)) for x in self.basis for y in self.basis)


def _from_vecs(n: int, vecs) -> LieSubalgebra:
    return LieSubalgebra(n, tuple(Matrix.from_vec(v, n, n) for v in span_basis(vecs)))


def span_algebra(n: int, elements: Sequence[Matrix]) -> LieSubalgebra:
    """Linear span only, no closure."""
    return _from_vecs(n, _vecs(elements))


def lie_closure(elements: Sequence[Matrix], ambient_dim: Optional[int] = None) -> LieSubalgebra:
    els = list(elements)
    n = ambient_dim if ambient_dim is not None else (els[0].rows if els else 0)
    for X in els:
        if X.shape != (n, n):
            raise ValueError("elements of different sizes")
        if not is_nilpotent(X):
            raise ValueError("lie_closure needs nilpotent elements")
    basis = span_basis(_vecs(els))
    while True:
        mats = [Matrix.from_vec(v, n, n) for v in basis]
        new = [bracket(x, y).vec() for i, x in enumerate(mats) for y in mats[i + 1:]]
        grown = span_basis(basis + new)
        if len(grown) == len(basis):
            return LieSubalgebra(n, tuple(Matrix.from_vec(v, n, n) for v in grown))
        basis = grown


def bracket_span(g: LieSubalgebra, h: LieSubalgebra) -> LieSubalgebra:
    return _from_vecs(g.ambient_dim, [bracket(x, y).vec() for x in g.basis for y in h.basis])


def derived_algebra(n: LieSubalgebra) -> LieSubalgebra:
    return bracket_span(n, n)


def lower_central_series(g: LieSubalgebra) -> list:
    """[C^1 g, C^2 g, ...] down to and including the first zero term."""
    out = [g]
    while out[-1].dim:
        out.append(bracket_span(g, out[-1]))
    return out


def _sum(*algs: LieSubalgebra) -> list:
    return [v for alg in algs for v in alg.vectors()]


def lemma7_fullness(g: LieSubalgebra, n: LieSubalgebra) -> dict:
    """Compare the criterion g + Dn = n with the direct test g = n, and replay the induction."""
    if not n.contains_all(g):
        raise ValueError("g is not contained in n")
    if not g.is_closed() or not n.is_closed():
        raise ValueError("g and n must be closed under the bracket")
    Dn = derived_algebra(n)
    criterion = span_equal(_sum(g, Dn), n.vectors())
    full = g == n
    Cg = lower_central_series(g)
    Cn = lower_central_series(n)
    steps = []
    for i in range(max(len(Cg), len(Cn))):
        cg = Cg[i] if i < len(Cg) else LieSubalgebra(n.ambient_dim, ())
        cn = Cn[i] if i < len(Cn) else LieSubalgebra(n.ambient_dim, ())
        cn1 = Cn[i + 1] if i + 1 < len(Cn) else LieSubalgebra(n.ambient_dim, ())
        steps.append(span_equal(_sum(cg, cn1), cn.vectors()))
    if criterion and not full:
        raise AssertionError("criterion holds but g differs from n")
    return {
        "g_dim": g.dim,
        "n_dim": n.dim,
        "dn_dim": Dn.dim,
        "criterion": criterion,
        "full": full,
        "agree": criterion == full,
        "induction": steps,
        "induction_holds": all(steps) if criterion else None,
    }


def heisenberg(n: int = 3) -> LieSubalgebra:
    """Strictly upper triangular n x n matrices."""
    return LieSubalgebra(n, tuple(Matrix.elementary(n, n, i, j) for i in range(n) for j in range(i + 1, n)))


def w1_lie_algebra(frame: ParabolicFrame, frame_coordinates: bool = True) -> LieSubalgebra:
    """Lie algebra of W-1: strictly block-upper X with X^T G + G X = 0."""
    a, h = frame.a, frame.h
    d = frame.dim
    G = frame.form
    units = []
    for r0, r1, c0, c1 in [(0, a, a, a + h), (0, a, a + h, d), (a, a + h, a + h, d)]:
        for i in range(r0, r1):
            for j in range(c0, c1):
                units.append(Matrix.elementary(d, d, i, j))
    if not units:
        return LieSubalgebra(d, ())
    cols = [(E.T @ G + G @ E).vec() for E in units]
    K = nullspace(Matrix.from_columns(cols, d * d))
    out = []
    for v in K:
        X = Z(d, d)
        for c, E in zip(v, units):
            if c:
                X = X + E.scale(c)
        out.append(X if frame_coordinates else frame.from_frame(X))
    return span_algebra(d, out)


# words acting trivially on the graded pieces

def reduced_words(pres, max_length: int):
    """Reduced words in breadth-first order, lexicographic within a length (alphabet a, A, b, B, ...)."""
    letters = pres.letters
    layer = [""]
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for ch in letters:
                if w and w[-1] == pres.inverse_letter(ch):
                    continue
                nxt.append(w + ch)
        yield from nxt
        layer = nxt


def graded_trivial_words_rep(rep: Representation, sizes: Sequence[int], max_length: int) -> list:
    """Words whose image is unipotent block-upper with identity diagonal blocks, with their logs.

    Enumeration is breadth-first over reduced words; a word whose matrix was
    already seen is dropped together with its extensions.
    """
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    pres = rep.presentation
    letters = pres.letters
    cuts = []
    s = 0
    for k in sizes:
        cuts.append((s, s + k))
        s += k
    if s != rep.dim:
        raise ValueError("block sizes do not add up to the dimension")

    def trivial_on_gradeds(m: Matrix) -> bool:
        for r0, r1 in cuts:
            if m[r0:r1, r0:r1] != I(r1 - r0):
                return False
        for i, (r0, r1) in enumerate(cuts):
            for c0, c1 in cuts[:i]:
                if not m[r0:r1, c0:c1].is_zero():
                    return False
        return True

    ident = I(rep.dim)
    seen = {ident}
    out = []
    layer = [("", ident)]
    for _ in range(max_length):
        nxt = []
        for w, m in layer:
            for ch in letters:
                if w and w[-1] == pres.inverse_letter(ch):
                    continue
                m2 = m @ rep.letter_matrix(ch)
                if m2 in seen:
                    continue
                seen.add(m2)
                w2 = w + ch
                nxt.append((w2, m2))
                if trivial_on_gradeds(m2):
                    out.append((w2, nilpotent_log(m2)))
        layer = nxt
    return out


def graded_trivial_words(M: BlendedExtension, max_length: int) -> list:
    return graded_trivial_words_rep(M.total(), M.dims, max_length)


# monodromy pipeline

def corner_part(g: LieSubalgebra, sizes: Sequence[int]) -> list:
    """Corner blocks (first rows, last columns) of the elements of g supported on that corner."""
    n = g.ambient_dim
    p, q = sizes[0], sizes[-1]
    corner = [Matrix.elementary(n, n, i, n - q + j).vec() for i in range(p) for j in range(q)]
    inter = span_intersection(g.vectors(), corner) if g.dim and corner else []
    return [Matrix.from_vec(v, n, n)[0:p, n - q:] for v in inter]


def projection_dim(g: LieSubalgebra, rows: tuple, cols: tuple) -> int:
    vecs = [X[rows[0]:rows[1], cols[0]:cols[1]].vec() for X in g.basis]
    return len(span_basis(vecs)) if vecs else 0


def _closure_by_length(words: list, n: int, max_length: int, test=None) -> tuple:
    """Lie closure of all logs, and the first length at which ``test`` holds on the partial closure."""
    certified_at = None
    g = LieSubalgebra(n, ())
    by_len = {}
    for w, X in words:
        by_len.setdefault(len(w), []).append(X)
    for L in range(1, max_length + 1):
        new = by_len.get(L, [])
        if new:
            g = lie_closure(list(g.basis) + new, n)
        if test is not None and certified_at is None and test(g):
            certified_at = L
    return g, certified_at


def xi_block(M: BlendedExtension, word: str) -> Matrix:
    """Corner block of rho_M(word)."""
    a, h, b = M.dims
    return M.total().evaluate_word(word)[0:a, a + h:]


def theorem2_verify(M: BlendedExtension, d: DualityDatum, max_length: int) -> dict:
    eps = d.epsilon
    a, h, b = M.dims
    lam = d.lam.matrix
    res = autodualize(M, d)
    Mp, delta = res.blend, res.delta
    n = a + h + b

    def hyp(g):
        return projection_dim(g, (a, a + h), (a + h, n)) == h * b

    words_M = graded_trivial_words(M, max_length)
    words_Mp = graded_trivial_words(Mp, max_length)
    g_M, cert_M = _closure_by_length(words_M, n, max_length, hyp)
    g_Mp, cert_Mp = _closure_by_length(words_Mp, n, max_length, hyp)

    dcoc = delta.representative()
    drep = dcoc.total()
    words_d = graded_trivial_words_rep(drep, (b, b), max_length)
    g_d, _ = _closure_by_length(words_d, 2 * b, max_length)

    V_M = span_basis([(lam @ c).vec() for c in corner_part(g_M, (a, h, b))])
    V_Mp = span_basis([(lam @ c).vec() for c in corner_part(g_Mp, (a, h, b))])
    V_d = span_basis([c.vec() for c in corner_part(g_d, (b, b))])

    hom_target = [w.vec() for w in hom_eps(M.B, -eps)]
    w2_aut_expected = len(hom_target)
    certified = cert_Mp is not None

    # additivity of corner blocks on words trivial on M1 and M2
    words_checked = 0
    additive = True
    for w, X in words_M:
        if not X[0:a, a:a + h].is_zero() or not X[a:a + h, a + h:].is_zero():
            continue
        words_checked += 1
        lhs = lam @ xi_block(M, w)
        rhs = lam @ xi_block(Mp, w) - drep.evaluate_word(w)[0:b, b:]
        if lhs != rhs:
            additive = False

    def proj(vs, sign):
        out = []
        for v in vs:
            m = Matrix.from_vec(v, b, b)
            out.append((m + m.T.scale(sign * eps)).scale(Fraction(1, 2)).vec())
        return span_basis(out) if out else []

    sum_space = span_basis(V_Mp + V_d) if (V_Mp or V_d) else []
    direct = len(sum_space) == len(V_Mp) + len(V_d)
    proj_aut = span_equal(proj(V_M, -1), V_Mp)
    proj_d = span_equal(proj(V_M, 1), V_d)
    holds = direct and span_equal(V_M, sum_space) and proj_aut and proj_d and additive

    autodual_w2_ok = certified and span_equal(V_Mp, hom_target)
    if not certified:
        conclusion = "inconclusive"
    elif autodual_w2_ok and holds:
        conclusion = "confirmed"
    else:
        conclusion = "contradicted"

    return {
        "hypothesis_certified": certified,
        "certified_at_length": cert_Mp,
        "hypothesis_certified_for_input": cert_M is not None,
        "depth": max_length,
        "epsilon": eps,
        "autodual": delta.is_zero(),
        "delta": [format_scalar(c) for c in delta.coordinates],
        "w1_dim": g_M.dim,
        "w2_dim": len(V_M),
        "w2_expected": w2_aut_expected + len(V_d),
        "w2_autodual_dim": len(V_Mp),
        "w2_autodual_expected": w2_aut_expected,
        "w2_delta_dim": len(V_d),
        "decomposition": {
            "holds": holds,
            "projection_onto_autodual": proj_aut,
            "projection_onto_delta": proj_d,
            "xi_additive": additive,
            "words_checked": words_checked,
        },
        "conclusion": conclusion,
    }
