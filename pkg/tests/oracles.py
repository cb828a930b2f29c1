"""Independent reference computations used to cross-check the package.

Nothing here calls the package's own linear algebra: ranks go through sympy,
relator corners through the Fox-derivative expansion, and small searches
enumerate candidates directly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from panache.linalg import Matrix


def to_sympy(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                                          else sympy.Integer(x) for x in m.vec()])


def sympy_rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return to_sympy(m).rank()


def sympy_nullity(m: Matrix) -> int:
    return m.cols - sympy_rank(m)


def plain_product(mats, n):
    out = Matrix.identity(n)
    for m in mats:
        out = out @ m
    return out


def fox_corner(sub, quot, blocks, word: str) -> Matrix:
    """Corner of a word on [[rho_P, c], [0, rho_Q]] by the Fox expansion.

    corner(g1...gn) = sum_k rho_P(g1...g_{k-1}) c(g_k) rho_Q(g_{k+1}...gn),
    with c(g^-1) = -rho_P(g)^-1 c(g) rho_Q(g)^-1.
    """
    gens = sub.presentation.generators
    p, q = sub.dim, quot.dim

    def letter(rep, ch):
        m = rep.images[gens.index(ch.lower())]
        return m.inverse() if ch.isupper() else m

    def cval(ch):
        i = gens.index(ch.lower())
        if ch.islower():
            return blocks[i]
        return -(letter(sub, ch) @ blocks[i] @ letter(quot, ch))

    total = Matrix.zeros(p, q)
    for k, ch in enumerate(word):
        left = plain_product([letter(sub, c) for c in word[:k]], p)
        right = plain_product([letter(quot, c) for c in word[k + 1:]], q)
        total = total + left @ cval(ch) @ right
    return total


def fox_system(sub, quot) -> Matrix:
    """Linear map from the concatenated blocks to the stacked relator corners, via fox_corner."""
    gens = sub.presentation.generators
    p, q = sub.dim, quot.dim
    cols = []
    for gi in range(len(gens)):
        for e in range(p * q):
            blocks = [Matrix.zeros(p, q)] * len(gens)
            blocks[gi] = Matrix.elementary(p, q, e // q, e % q)
            col = []
            for r in sub.presentation.relators:
                col.extend(fox_corner(sub, quot, blocks, r).vec())
            cols.append(col)
    rows = len(sub.presentation.relators) * p * q
    if not cols:
        return Matrix.zeros(rows, 0)
    return Matrix.from_columns(cols, rows)


def coboundary_rank(sub, quot) -> int:
    """Rank of f -> (rho_P(g) f - f rho_Q(g))_g, assembled entrywise."""
    p, q = sub.dim, quot.dim
    cols = []
    for e in range(p * q):
        f = Matrix.elementary(p, q, e // q, e % q)
        col = []
        for a, b in zip(sub.images, quot.images):
            col.extend((a @ f - f @ b).vec())
        cols.append(col)
    if not cols:
        return 0
    return sympy_rank(Matrix.from_columns(cols))


def ext_dim(sub, quot) -> int:
    """dim Z^1 - dim B^1 from the Fox system and the coboundary map."""
    n = len(sub.presentation.generators) * sub.dim * quot.dim
    fs = fox_system(sub, quot)
    z1 = n - (sympy_rank(fs) if fs.cols and fs.rows else 0)
    return z1 - coboundary_rank(sub, quot)


def intertwiner_dim(X, Y) -> int:
    """dim Hom(X, Y) as the nullity of the stacked system, built with sympy."""
    n, m = Y.dim, X.dim
    syms = sympy.symbols(f"t0:{n * m}") if n * m else ()
    T = sympy.Matrix(n, m, syms)
    eqs = []
    for a, b in zip(X.images, Y.images):
        eqs.extend(list(T * to_sympy(a) - to_sympy(b) * T))
    if not syms:
        return 0
    if not eqs:
        return n * m
    A, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return n * m - A.rank()


def lattice(bound: int, denominators=(1, 2)):
    vals = {Fraction(k, d) for d in denominators for k in range(-bound * d, bound * d + 1)}
    return sorted(vals)


def blend_corner_search(A, N, B, x, y, values) -> list:
    """All corners z (each entry drawn from ``values``) making the 3x3 block images satisfy the relators."""
    pres = A.presentation
    a, h, b = A.dim, N.dim, B.dim
    ngen = len(pres.generators)
    found = []
    for entries in itertools.product(values, repeat=ngen * a * b):
        z = [Matrix.from_vec(entries[i * a * b:(i + 1) * a * b], a, b) for i in range(ngen)]
        imgs = [Matrix.block([[ra, xg, zg],
                              [Matrix.zeros(h, a), rn, yg],
                              [Matrix.zeros(b, a), Matrix.zeros(b, h), rb]])
                for ra, rn, rb, xg, yg, zg in zip(A.images, N.images, B.images, x, y, z)]
        if all(_eval(imgs, pres.generators, r) == Matrix.identity(a + h + b) for r in pres.relators):
            found.append(z)
    return found


def _eval(imgs, gens, word):
    n = imgs[0].rows
    out = Matrix.identity(n)
    for ch in word:
        m = imgs[gens.index(ch.lower())]
        out = out @ (m.inverse() if ch.isupper() else m)
    return out


def commutator_span_dim(a: int, h: int, eps: int, J: Matrix) -> int:
    """dim span{nu^T J nu' - nu'^T J nu} over elementary h x a matrices nu, nu'."""
    vecs = []
    units = [Matrix.elementary(h, a, i, j) for i in range(h) for j in range(a)]
    for u in units:
        for v in units:
            vecs.append((u.T @ J @ v - v.T @ J @ u).vec())
    if not vecs:
        return 0
    return sympy_rank(Matrix(vecs))
