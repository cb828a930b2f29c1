"""Finite-dimensional rational representations of finitely presented groups.

Words are strings over the generator letters: a lowercase letter is a
generator, the matching uppercase letter its inverse, and the empty string
the identity. Products are read left to right, ``rho("ab") = rho(a) @ rho(b)``.

Objects are presented directly by their matrices, so the fibre functor is
the identity on underlying data. The dual acts by inverse-transpose on the
dual basis, and the bidual is identified with the original object through
the identity matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .linalg import Matrix, nullspace, rank


class PresentationMismatch(ValueError):
    pass


class NotAMorphism(ValueError):
    pass


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(gens)) != len(gens):
            raise ValueError("generator names must be distinct")
        for g in gens:
            if len(g) != 1 or not g.isalpha() or not g.islower():
                raise ValueError(f"generator names must be single lowercase letters, got {g!r}")
        for r in self.relators:
            self.check_word(r)

    def check_word(self, word: str) -> None:
        for ch in word:
            if ch.lower() not in self.generators or not ch.isalpha():
                raise ValueError(f"unknown letter {ch!r} in word {word!r}")

    @property
    def letters(self) -> tuple:
        """Alphabet in enumeration order: a, A, b, B, ..."""
        out = []
        for g in self.generators:
            out.extend((g, g.upper()))
        return tuple(out)

    @staticmethod
    def inverse_letter(ch: str) -> str:
        return ch.lower() if ch.isupper() else ch.upper()

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": list(self.relators)}


def free_group(*names: str) -> GroupPresentation:
    return GroupPresentation(tuple(names), ())


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    reason: str = ""
    failing_relator: Optional[str] = None

    def __bool__(self):
        return self.valid


@dataclass(frozen=True, eq=True)
class Representation:
    presentation: GroupPresentation
    dim: int
    images: tuple  # one Matrix per generator, in presentation order
    _inverses: tuple = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != len(self.presentation.generators):
            raise ValueError("one image per generator is required")
        for m in imgs:
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"image of shape {m.shape} in a representation of dimension {self.dim}")

    @classmethod
    def from_images(cls, presentation: GroupPresentation, images: Mapping[str, object]) -> "Representation":
        mats = []
        for g in presentation.generators:
            m = images[g]
            mats.append(m if isinstance(m, Matrix) else Matrix(m))
        dim = mats[0].rows if mats else 0
        return cls(presentation, dim, tuple(mats))

    def image(self, gen: str) -> Matrix:
        return self.images[self.presentation.generators.index(gen)]

    @property
    def inverses(self) -> tuple:
        if self._inverses is None:
            object.__setattr__(self, "_inverses", tuple(m.inverse() for m in self.images))
        return self._inverses

    def letter_matrix(self, ch: str) -> Matrix:
        gens = self.presentation.generators
        if ch in gens:
            return self.images[gens.index(ch)]
        low = ch.lower()
        if ch.isupper() and low in gens:
            return self.inverses[gens.index(low)]
        raise ValueError(f"unknown letter {ch!r}")

    def evaluate_word(self, word: str) -> Matrix:
        result = Matrix.identity(self.dim)
        for ch in word:
            result = result @ self.letter_matrix(ch)
        return result

    def validate(self) -> ValidationReport:
        return validate(self)

    def is_valid(self) -> bool:
        return bool(validate(self))

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {
            "dim": self.dim,
            "images": {g: matrix_to_json(m) for g, m in zip(self.presentation.generators, self.images)},
        }


def validate(rep: Representation) -> ValidationReport:
    for g, m in zip(rep.presentation.generators, rep.images):
        if not m.is_invertible():
            return ValidationReport(False, f"image of {g!r} is not invertible")
    ident = Matrix.identity(rep.dim)
    for r in rep.presentation.relators:
        if rep.evaluate_word(r) != ident:
            return ValidationReport(False, f"relator {r!r} does not evaluate to the identity", r)
    return ValidationReport(True)


def evaluate_word(rep: Representation, word: str) -> Matrix:
    return rep.evaluate_word(word)


def trivial(presentation: GroupPresentation, dim: int = 1) -> Representation:
    return Representation(presentation, dim, tuple(Matrix.identity(dim) for _ in presentation.generators))


def _same_group(*reps: Representation) -> GroupPresentation:
    p = reps[0].presentation
    for r in reps[1:]:
        if r.presentation != p:
            raise PresentationMismatch("representations of different group presentations")
    return p


def dual(rep: Representation) -> Representation:
    return Representation(rep.presentation, rep.dim, tuple(m.T for m in rep.inverses),
                          tuple(m.T for m in rep.images))


def tensor(X: Representation, Y: Representation) -> Representation:
    p = _same_group(X, Y)
    return Representation(p, X.dim * Y.dim, tuple(a.kron(b) for a, b in zip(X.images, Y.images)))


def direct_sum(*reps: Representation) -> Representation:
    p = _same_group(*reps)
    imgs = tuple(Matrix.block_diag(*ms) for ms in zip(*(r.images for r in reps)))
    return Representation(p, sum(r.dim for r in reps), imgs)


def conjugate(rep: Representation, P: Matrix) -> Representation:
    """Representation g -> P^-1 rho(g) P (the same object in the basis given by P's columns)."""
    Pinv = P.inverse()
    return Representation(rep.presentation, rep.dim, tuple(Pinv @ m @ P for m in rep.images))


@dataclass(frozen=True)
class Morphism:
    source: Representation
    target: Representation
    matrix: Matrix

    def __post_init__(self):
        _same_group(self.source, self.target)
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise NotAMorphism(
                f"matrix shape {self.matrix.shape} for a map of dimension {self.source.dim} -> {self.target.dim}"
            )
        for a, b in zip(self.source.images, self.target.images):
            if self.matrix @ a != b @ self.matrix:
                raise NotAMorphism("matrix does not intertwine the actions")

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, self.matrix + other.matrix)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.target != g.source:
        raise NotAMorphism("composition of non-composable morphisms")
    return Morphism(f.source, g.target, g.matrix @ f.matrix)


def identity_morphism(X: Representation) -> Morphism:
    return Morphism(X, X, Matrix.identity(X.dim))


def transpose(f: Morphism) -> Morphism:
    return Morphism(dual(f.target), dual(f.source), f.matrix.T)


def bidual_identification(X: Representation) -> Morphism:
    return Morphism(X, dual(dual(X)), Matrix.identity(X.dim))


def intertwiner_system(X: Representation, Y: Representation) -> Matrix:
    """Stacked linear system in vec(F) (row-major, F of shape dim Y x dim X) for F rho_X = rho_Y F."""
    p, q = Y.dim, X.dim
    rows = []
    for a, b in zip(X.images, Y.images):
        # (F a - b F)_{ij} = sum_k F_ik a_kj - sum_k b_ik F_kj
        for i in range(p):
            for j in range(q):
                row = [0] * (p * q)
                for k in range(q):
                    if a[k, j]:
                        row[i * q + k] += a[k, j]
                for k in range(p):
                    if b[i, k]:
                        row[k * q + j] -= b[i, k]
                rows.append(row)
    return Matrix(rows, cols=p * q)


def hom_space(X: Representation, Y: Representation) -> list:
    """Basis of Hom(X, Y) as Morphisms."""
    _same_group(X, Y)
    p, q = Y.dim, X.dim
    if p * q == 0:
        return []
    if not X.images:
        sys = Matrix.zeros(0, p * q)
    else:
        sys = intertwiner_system(X, Y)
    return [Morphism(X, Y, Matrix.from_vec(v, p, q)) for v in nullspace(sys)]


def hom_dim(X: Representation, Y: Representation) -> int:
    if X.dim * Y.dim == 0:
        return 0
    if not X.images:
        return X.dim * Y.dim
    return X.dim * Y.dim - rank(intertwiner_system(X, Y))


def swap_morphism(X: Representation, Y: Representation) -> Morphism:
    """The commutativity constraint X (x) Y -> Y (x) X."""
    n, m = X.dim, Y.dim
    data = [[0] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(m):
            data[j * n + i][i * m + j] = 1
    return Morphism(tensor(X, Y), tensor(Y, X), Matrix(data, cols=n * m))


def coevaluation(X: Representation) -> Morphism:
    """1 -> X^ (x) X, sending 1 to sum_i e_i^* (x) e_i."""
    n = X.dim
    v = [0] * (n * n)
    for i in range(n):
        v[i * n + i] = 1
    return Morphism(trivial(X.presentation), tensor(dual(X), X), Matrix.column(v))
