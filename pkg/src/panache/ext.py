"""Ext^1 between representations, computed with cocycles.

An extension of Q by P is presented in block form
``[[rho_P(g), c_g], [0, rho_Q(g)]]`` with the sub in the top-left corner.
Cocycles are the block tuples satisfying every relator; coboundaries are
``rho_P(g) f - f rho_Q(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

from .linalg import Matrix, as_scalar, in_span, nullspace, rank, rref, solve_affine, span_basis
from .reps import (
    Morphism,
    Representation,
    coevaluation,
    dual,
    swap_morphism,
    tensor,
    _same_group,
)


class NotACocycle(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Cocycle:
    sub: Representation
    quot: Representation
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        _same_group(self.sub, self.quot)
        if len(self.blocks) != len(self.sub.presentation.generators):
            raise ValueError("one block per generator is required")
        for b in self.blocks:
            if b.shape != (self.sub.dim, self.quot.dim):
                raise ValueError(f"block of shape {b.shape}, expected {(self.sub.dim, self.quot.dim)}")

    @classmethod
    def zero(cls, sub: Representation, quot: Representation) -> "Cocycle":
        n = len(sub.presentation.generators)
        return cls(sub, quot, (Matrix.zeros(sub.dim, quot.dim),) * n)

    @classmethod
    def from_vector(cls, sub: Representation, quot: Representation, v: Sequence) -> "Cocycle":
        p, q = sub.dim, quot.dim
        k = p * q
        n = len(sub.presentation.generators)
        if len(v) != n * k:
            raise ValueError("cocycle vector has the wrong length")
        return cls(sub, quot, tuple(Matrix.from_vec(v[i * k:(i + 1) * k], p, q) for i in range(n)))

    def vector(self) -> tuple:
        return tuple(x for b in self.blocks for x in b.vec())

    def total(self) -> Representation:
        imgs = tuple(
            Matrix.block([[a, c], [Matrix.zeros(self.quot.dim, self.sub.dim), b]])
            for a, c, b in zip(self.sub.images, self.blocks, self.quot.images)
        )
        return Representation(self.sub.presentation, self.sub.dim + self.quot.dim, imgs)

    def is_cocycle(self) -> bool:
        return bool(self.total().validate())

    def inclusion(self) -> Morphism:
        p, q = self.sub.dim, self.quot.dim
        return Morphism(self.sub, self.total(), Matrix.block([[Matrix.identity(p)], [Matrix.zeros(q, p)]]))

    def projection(self) -> Morphism:
        p, q = self.sub.dim, self.quot.dim
        return Morphism(self.total(), self.quot, Matrix.block([[Matrix.zeros(q, p), Matrix.identity(q)]]))

    def _check_same(self, other: "Cocycle"):
        if self.sub != other.sub or self.quot != other.quot:
            raise SpaceMismatch("cocycles of different extension spaces")

    def __add__(self, other: "Cocycle") -> "Cocycle":
        self._check_same(other)
        return Cocycle(self.sub, self.quot, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        self._check_same(other)
        return Cocycle(self.sub, self.quot, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "Cocycle":
        return self.scale(-1)

    def scale(self, c) -> "Cocycle":
        return Cocycle(self.sub, self.quot, tuple(b.scale(c) for b in self.blocks))

    def coboundary_shift(self, f: Matrix) -> "Cocycle":
        """Blocks after the change of basis by [[I, f], [0, I]]."""
        return Cocycle(self.sub, self.quot, tuple(
            c + a @ f - f @ b for a, c, b in zip(self.sub.images, self.blocks, self.quot.images)
        ))


def coboundary(sub: Representation, quot: Representation, f: Matrix) -> Cocycle:
    return Cocycle(sub, quot, tuple(a @ f - f @ b for a, b in zip(sub.images, quot.images)))


def relator_corner(sub: Representation, quot: Representation, blocks: Sequence[Matrix], word: str) -> Matrix:
    """Top-right block of the relator word evaluated on the block-triangular images."""
    return Cocycle(sub, quot, blocks).total().evaluate_word(word)[0:sub.dim, sub.dim:sub.dim + quot.dim]


def relator_linearization(sub: Representation, quot: Representation) -> Matrix:
    """Matrix of the linear map blocks -> (relator corners), built by substituting elementary blocks."""
    pres = sub.presentation
    p, q = sub.dim, quot.dim
    n = len(pres.generators)
    k = p * q
    columns = []
    zero = Matrix.zeros(p, q)
    for gi in range(n):
        for e in range(k):
            blocks = [zero] * n
            blocks[gi] = Matrix.elementary(p, q, e // q, e % q)
            col = []
            for r in pres.relators:
                col.extend(relator_corner(sub, quot, blocks, r).vec())
            columns.append(col)
    if not columns:
        return Matrix.zeros(len(pres.relators) * k, 0)
    return Matrix.from_columns(columns)


class ExtSpace:
    """Ext^1(quot, sub) with exact bases of Z^1, B^1 and a lift of a basis of Z^1/B^1."""

    def __init__(self, quot: Representation, sub: Representation):
        _same_group(quot, sub)
        self.quot = quot
        self.sub = sub
        pres = sub.presentation
        p, q = sub.dim, quot.dim
        n = len(pres.generators)
        size = n * p * q
        self.size = size

        if pres.relators and size:
            z1 = nullspace(relator_linearization(sub, quot))
        else:
            z1 = [tuple(1 if i == j else 0 for i in range(size)) for j in range(size)]
        cob = []
        for e in range(p * q):
            f = Matrix.elementary(p, q, e // q, e % q)
            cob.append(coboundary(sub, quot, f).vector())
        b1 = span_basis(cob)
        quotient = []
        current = list(b1)
        r = len(current)
        for v in z1:
            trial = current + [v]
            if rank(trial) > r:
                current = trial
                r += 1
                quotient.append(v)
        self.z1_basis = [Cocycle.from_vector(sub, quot, v) for v in z1]
        self.b1_basis = [Cocycle.from_vector(sub, quot, v) for v in b1]
        self.quotient_basis = [Cocycle.from_vector(sub, quot, v) for v in quotient]
        self.dim = len(quotient)
        if len(z1) - len(b1) != self.dim:
            raise AssertionError("coboundaries are not contained in the cocycles")

        # left inverse of [B1 | Q] on a set of independent rows
        cols = list(b1) + quotient
        self._ncols = len(cols)
        if cols:
            S = Matrix.from_columns(cols)
            _, rows = rref(S.T)
            self._rows = rows
            self._S = S
            self._left_inverse = S[rows, :].inverse()
        else:
            self._rows = []
            self._S = None
            self._left_inverse = None

    def __repr__(self):
        return f"ExtSpace(quot dim {self.quot.dim}, sub dim {self.sub.dim}, dim {self.dim})"

    def __eq__(self, other):
        if not isinstance(other, ExtSpace):
            return NotImplemented
        return self is other or (self.quot == other.quot and self.sub == other.sub)

    def __hash__(self):
        return hash((self.quot, self.sub))

    @property
    def z1_dim(self) -> int:
        return len(self.z1_basis)

    @property
    def b1_dim(self) -> int:
        return len(self.b1_basis)

    def zero(self) -> "ExtClass":
        return ExtClass(self, (0,) * self.dim)

    def element(self, coordinates: Sequence) -> "ExtClass":
        return ExtClass(self, tuple(as_scalar(c) for c in coordinates))

    def basis(self) -> list:
        return [ExtClass(self, tuple(1 if i == j else 0 for i in range(self.dim))) for j in range(self.dim)]

    def full_coordinates(self, c: Cocycle) -> tuple:
        """Coefficients of c on the basis B^1 followed by the quotient basis."""
        if c.sub != self.sub or c.quot != self.quot:
            raise SpaceMismatch("cocycle does not belong to this extension space")
        v = c.vector()
        if self._S is None:
            if any(x != 0 for x in v):
                raise NotACocycle("blocks do not satisfy the relators")
            return ()
        coef = self._left_inverse.apply([v[i] for i in self._rows])
        if self._S.apply(coef) != tuple(as_scalar(x) for x in v):
            raise NotACocycle("blocks do not satisfy the relators")
        return coef

    def class_of(self, c: Cocycle) -> "ExtClass":
        coef = self.full_coordinates(c)
        return ExtClass(self, coef[self.b1_dim:])

    def is_coboundary(self, c: Cocycle) -> bool:
        return self.class_of(c).is_zero()

    def coboundary_witness(self, c: Cocycle):
        """A matrix f with c equal to the coboundary of f, or None."""
        p, q = self.sub.dim, self.quot.dim
        cols = []
        for e in range(p * q):
            f = Matrix.elementary(p, q, e // q, e % q)
            cols.append(coboundary(self.sub, self.quot, f).vector())
        if not cols:
            return Matrix.zeros(p, q) if all(x == 0 for x in c.vector()) else None
        sol = solve_affine(Matrix.from_columns(cols), c.vector())
        if sol is None:
            return None
        return Matrix.from_vec(sol[0], p, q)


@lru_cache(maxsize=512)
def ext_space(quot: Representation, sub: Representation) -> ExtSpace:
    """Ext^1(quot, sub): extensions 0 -> sub -> E -> quot -> 0."""
    return ExtSpace(quot, sub)


@dataclass(frozen=True)
class ExtClass:
    space: ExtSpace
    coordinates: tuple

    def __post_init__(self):
        if len(self.coordinates) != self.space.dim:
            raise ValueError("coordinate vector has the wrong length")

    @property
    def sub(self) -> Representation:
        return self.space.sub

    @property
    def quot(self) -> Representation:
        return self.space.quot

    def representative(self) -> Cocycle:
        c = Cocycle.zero(self.space.sub, self.space.quot)
        for a, b in zip(self.coordinates, self.space.quotient_basis):
            if a:
                c = c + b.scale(a)
        return c

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coordinates)

    def _check(self, other: "ExtClass"):
        if self.space != other.space:
            raise SpaceMismatch("classes of different extension spaces")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return baer_sum(self, other)

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return baer_sum(self, other.scale(-1))

    def __neg__(self) -> "ExtClass":
        return self.scale(-1)

    def scale(self, c) -> "ExtClass":
        return ExtClass(self.space, tuple(as_scalar(c * x) for x in self.coordinates))

    def __eq__(self, other):
        if not isinstance(other, ExtClass):
            return NotImplemented
        return self.space == other.space and self.coordinates == other.coordinates

    def __hash__(self):
        return hash((self.space, self.coordinates))


Extension = Union[Cocycle, ExtClass]


def class_of(c: Cocycle) -> ExtClass:
    return ext_space(c.quot, c.sub).class_of(c)


def baer_sum(c: ExtClass, d: ExtClass) -> ExtClass:
    c._check(d)
    return ExtClass(c.space, tuple(as_scalar(a + b) for a, b in zip(c.coordinates, d.coordinates)))


def baer_sum_cocycles(c: Cocycle, d: Cocycle) -> Cocycle:
    return c + d


def _as_cocycle(c: Extension) -> Cocycle:
    return c.representative() if isinstance(c, ExtClass) else c


def pushforward(h: Morphism, c: Extension) -> Extension:
    """Change the sub along h: P -> P'."""
    coc = _as_cocycle(c)
    if h.source != coc.sub:
        raise SpaceMismatch("pushforward along a morphism whose source is not the sub")
    out = Cocycle(h.target, coc.quot, tuple(h.matrix @ b for b in coc.blocks))
    return class_of(out) if isinstance(c, ExtClass) else out


def pullback(h: Morphism, c: Extension) -> Extension:
    """Change the quotient along h: Q' -> Q."""
    coc = _as_cocycle(c)
    if h.target != coc.quot:
        raise SpaceMismatch("pullback along a morphism whose target is not the quotient")
    out = Cocycle(coc.sub, h.source, tuple(b @ h.matrix for b in coc.blocks))
    return class_of(out) if isinstance(c, ExtClass) else out


def dual_cocycle(c: Cocycle) -> Cocycle:
    """The dual extension 0 -> Q^ -> E^ -> P^ -> 0, in the basis (Q^*, P^*)."""
    blocks = tuple(
        -(qi.T @ b.T @ pi.T)
        for qi, b, pi in zip(c.quot.inverses, c.blocks, c.sub.inverses)
    )
    return Cocycle(dual(c.quot), dual(c.sub), blocks)


def dual_class(c: Extension) -> Extension:
    if isinstance(c, ExtClass):
        return class_of(dual_cocycle(c.representative()))
    return dual_cocycle(c)


def dual_reorder(c: Cocycle) -> Morphism:
    """The block swap identifying dual(total(c)) with total(dual_cocycle(c))."""
    p, q = c.sub.dim, c.quot.dim
    P = Matrix.block([[Matrix.zeros(q, p), Matrix.identity(q)], [Matrix.identity(p), Matrix.zeros(p, q)]])
    return Morphism(dual(c.total()), dual_cocycle(c).total(), P)


def tensor_extension(X: Representation, c: Cocycle) -> Cocycle:
    """X (x) E as an extension of X (x) Q by X (x) P."""
    blocks = tuple(a.kron(b) for a, b in zip(X.images, c.blocks))
    return Cocycle(tensor(X, c.sub), tensor(X, c.quot), blocks)


def tensor_extension_reorder(X: Representation, c: Cocycle) -> Morphism:
    """Permutation identifying tensor(X, total(c)) with total(tensor_extension(X, c))."""
    n, p, q = X.dim, c.sub.dim, c.quot.dim
    d = p + q
    size = n * d
    data = [[0] * size for _ in range(size)]
    for i in range(n):
        for s in range(d):
            src = i * d + s
            if s < p:
                dst = i * p + s
            else:
                dst = n * p + i * q + (s - p)
            data[dst][src] = 1
    return Morphism(tensor(X, c.total()), tensor_extension(X, c).total(), Matrix(data))


def f_transport(c: Extension) -> Extension:
    """Ext(B, A) -> Ext(1, B^ (x) A): pull back B^ (x) C along 1 -> B^ (x) B."""
    coc = _as_cocycle(c)
    B = coc.quot
    out = pullback(coevaluation(B), tensor_extension(dual(B), coc))
    return class_of(out) if isinstance(c, ExtClass) else out


def linear_map_matrix(func: Callable[[ExtClass], ExtClass], src: ExtSpace, dst: ExtSpace) -> Matrix:
    cols = []
    for b in src.basis():
        img = func(b)
        if img.space != dst:
            raise SpaceMismatch("linear map lands outside the stated target space")
        cols.append(img.coordinates)
    if not cols:
        return Matrix.zeros(dst.dim, 0)
    return Matrix.from_columns(cols)


def f_transport_inv(c: ExtClass, B: Representation, A: Representation) -> ExtClass:
    src = ext_space(B, A)
    dst = ext_space(c.quot, c.sub)
    F = linear_map_matrix(f_transport, src, dst)
    if F.rows != F.cols:
        raise AssertionError("F is not an isomorphism")
    return src.element(F.inverse().apply(c.coordinates))


def t_involution(c: Extension, X: Representation) -> Extension:
    """Push an extension of 1 by X (x) X forward along the swap of the factors."""
    return pushforward(swap_morphism(X, X), c)


def t_pushforward(c: Extension, X: Representation, Y: Representation) -> Extension:
    """Push an extension of 1 by X (x) Y forward to Y (x) X."""
    return pushforward(swap_morphism(X, Y), c)


def dual_matrix(space: ExtSpace) -> Matrix:
    """Coordinate matrix of c -> dual_class(c) on Ext(B, B^)."""
    if dual(space.quot) != space.sub:
        raise SpaceMismatch("dual_class maps Ext(Q, P) to itself only when P = Q^")
    return linear_map_matrix(dual_class, space, space)


def eps_split(space: ExtSpace) -> tuple:
    """Bases (plus, minus) of the eigenspaces of dual_class on Ext(B, B^)."""
    D = dual_matrix(space)
    n = space.dim
    I = Matrix.identity(n)
    plus = [space.element(v) for v in nullspace(D - I)] if n else []
    minus = [space.element(v) for v in nullspace(D + I)] if n else []
    return plus, minus


def eps_part(space: ExtSpace, eps: int) -> list:
    plus, minus = eps_split(space)
    return plus if eps == 1 else minus


def eps_projection(c: ExtClass, eps: int) -> ExtClass:
    """Component of c in Ext_eps: (c + eps * dual(c)) / 2."""
    return (c + dual_class(c).scale(eps)).scale(Fraction(1, 2))


def in_class_span(c: ExtClass, basis: Sequence[ExtClass]) -> bool:
    return in_span(c.coordinates, [b.coordinates for b in basis])
