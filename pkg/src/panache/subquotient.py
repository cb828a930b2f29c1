"""Materializing subquotients S/R of a representation in block-triangular form.

Objects built as fibre products and pushouts (Baer sums, blends twisted by a
class) live in a direct sum V as a stable subspace S modulo a stable
subspace R.  The helpers here pick coset representatives: first the image
of a given sub map, then canonical lifts (free variables set to zero) of
chosen quotient basis vectors, and express the action in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import Matrix, nullspace, rank, solve_affine, span_basis, span_contains
from .reps import Representation, direct_sum


class SubquotientError(ValueError):
    pass


def stack(*mats: Matrix) -> Matrix:
    """Vertical concatenation."""
    return Matrix.block([[m] for m in mats])


def row(*mats: Matrix) -> Matrix:
    """Horizontal concatenation."""
    return Matrix.block([list(mats)])


@dataclass(frozen=True)
class Subquotient:
    ambient: Representation
    basis: Matrix  # coset representatives, one column per basis vector
    relations: tuple  # basis of R
    rep: Representation

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of v in S modulo R, in the chosen basis."""
        d = self.basis.cols
        cols = self.basis.columns() + list(self.relations)
        sol = solve_affine(Matrix.from_columns(cols, self.ambient.dim), v)
        if sol is None:
            raise SubquotientError("vector does not lie in the subobject")
        return sol[0][:d]

    def matrix_of(self, images: Matrix) -> Matrix:
        """Coordinates of each column of ``images``, as the columns of a matrix."""
        return Matrix.from_columns([self.coordinates(c) for c in images.columns()], self.basis.cols)


def materialize(
    ambient: Representation,
    equations: Optional[Matrix],
    relations: Sequence[Sequence],
    sub_map: Matrix,
    quot_map: Matrix,
    lift_targets: Sequence[int],
) -> Subquotient:
    """Build S/R with S = ker(equations) and R = span(relations).

    The basis is the columns of ``sub_map`` followed by, for each index k in
    ``lift_targets``, the canonical solution s in S of quot_map s = e_k.
    """
    n = ambient.dim
    if equations is None or equations.rows == 0:
        equations = Matrix.zeros(0, n)
    S = nullspace(equations) if equations.rows else [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    R = span_basis(relations)

    for g in ambient.images:
        if not span_contains(S, [g.apply(v) for v in S]):
            raise SubquotientError("the subspace cut out by the equations is not stable")
        if R and not span_contains(R, [g.apply(v) for v in R]):
            raise SubquotientError("the relation subspace is not stable")
    if R and not span_contains(S, R):
        raise SubquotientError("relations do not satisfy the equations")

    system = stack(equations, quot_map)
    lifts = []
    for k in lift_targets:
        rhs = [0] * equations.rows + [1 if i == k else 0 for i in range(quot_map.rows)]
        sol = solve_affine(system, rhs)
        if sol is None:
            raise SubquotientError(f"quotient basis vector {k} has no lift")
        lifts.append(sol[0])

    cols = sub_map.columns() + lifts
    basis = Matrix.from_columns(cols, n)
    d = len(cols)
    if len(S) - len(R) != d or rank(list(R) + cols) != len(R) + d:
        raise SubquotientError("chosen representatives do not form a basis of the subquotient")

    sq = Subquotient(ambient, basis, tuple(R), None)
    images = tuple(sq.matrix_of(g @ basis) for g in ambient.images)
    rep = Representation(ambient.presentation, d, images)
    return Subquotient(ambient, basis, tuple(R), rep)


def baer_sum_object(c, d):
    """Baer sum of two extensions of Q by P, built as a subquotient of E1 (+) E2.

    Returns the normalized Cocycle; its class is the sum of the two classes.
    """
    from .ext import Cocycle

    if c.sub != d.sub or c.quot != d.quot:
        raise SubquotientError("Baer sum of extensions with different ends")
    p, q = c.sub.dim, c.quot.dim
    V = direct_sum(c.total(), d.total())
    I, Z = Matrix.identity, Matrix.zeros
    proj = row(Z(q, p), I(q))
    # fibre product over Q
    equations = row(proj, -proj)
    # antidiagonal copy of P
    rel = [tuple(list(e) + [0] * q + [-x for x in e] + [0] * q) for e in I(p).columns()]
    sub_map = stack(I(p), Z(q, p), Z(p, p), Z(q, p))
    quot_map = row(proj, Z(q, p + q))
    sq = materialize(V, equations, rel, sub_map, quot_map, range(q))
    blocks = tuple(m[0:p, p:p + q] for m in sq.rep.images)
    out = Cocycle(c.sub, c.quot, blocks)
    for m, a, b in zip(sq.rep.images, c.sub.images, c.quot.images):
        if m[0:p, 0:p] != a or m[p:, p:] != b or not m[p:, 0:p].is_zero():
            raise SubquotientError("Baer sum did not normalize to block form")
    return out
