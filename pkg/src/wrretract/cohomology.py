# wrretract - exact well-rounded retracts for GL2 and GL3 and their contraction
# Copyright (C) 2023 wrretract contributors
# SPDX-License-Identifier: GPL-3.0-or-later
#
# Wrretract is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Wrretract is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Wrretract. If not, see <https://www.gnu.org/licenses/>.

"""Compute Eilenberg-MacLane cochains and fillings with symmetric power coefficients."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Tuple

from sympy import Poly, Rational, symbols

from wrretract.complex import DistanceRecord, fundamental_cell
from wrretract.contraction import (
    Chain,
    boundary,
    catalogue_simplex,
    contract_chain,
    locate_simplex,
    simplex_dim,
    translate,
)
from wrretract.exceptions import DomainError, SupportError
from wrretract.intvec import IntMatrix, identity, mat_det, mat_mul, signed_permutations

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Word = Tuple[IntMatrix, ...]

# catalogue keys of the four fundamental tetrahedra
GENERATOR_CELLS = ("o-h-m1-x", "o-h-m1-y", "o-h-m2-y", "o-t-m2-y")


def monomials(m: int, n: int) -> list[Monomial]:
    """Return the exponent vectors of the degree n monomials in m variables."""
    return sorted(
        (e for e in itertools.product(range(n + 1), repeat=m) if sum(e) == n),
        reverse=True,
    )


@dataclass(frozen=True)
class SymTensor:
    """An element of Sym^n(Q^m), as a map from monomials to rational coefficients."""

    m: int
    n: int
    coefficients: Mapping[Monomial, Fraction]

    def __post_init__(self) -> None:
        cleaned = {}
        for monomial, coeff in self.coefficients.items():
            if len(monomial) != self.m or sum(monomial) != self.n or min(monomial) < 0:
                msg = f"Monomial {monomial} is not of degree {self.n} in {self.m} vars"
                raise DomainError(msg)
            if coeff:
                cleaned[tuple(monomial)] = Fraction(coeff)
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items())))

    @classmethod
    def zero(cls, m: int, n: int) -> SymTensor:
        return cls(m, n, {})

    @classmethod
    def from_json(cls, m: int, n: int, data: Mapping[str, str | int]) -> SymTensor:
        """Read a map like {"2,0,0": "1/2"} from exponent strings to rationals."""
        try:
            coefficients = {
                tuple(int(e) for e in key.split(",")): Fraction(value)
                for key, value in data.items()
            }
        except ValueError as e:
            msg = f"Cannot read symmetric tensor {dict(data)}: {e}"
            raise DomainError(msg) from e
        return cls(m, n, coefficients)

    def to_json(self) -> dict[str, str]:
        return {
            ",".join(str(e) for e in monomial): str(coeff)
            for monomial, coeff in self.coefficients.items()
        }

    def _check(self, other: SymTensor) -> None:
        if (self.m, self.n) != (other.m, other.n):
            msg = (
                f"Cannot combine Sym^{self.n}(Q^{self.m}) "
                f"and Sym^{other.n}(Q^{other.m})"
            )
            raise DomainError(msg)

    def __add__(self, other: SymTensor) -> SymTensor:
        self._check(other)
        total = dict(self.coefficients)
        for monomial, coeff in other.coefficients.items():
            total[monomial] = total.get(monomial, Fraction(0)) + coeff
        return SymTensor(self.m, self.n, total)

    def __neg__(self) -> SymTensor:
        return self.scale(-1)

    def __sub__(self, other: SymTensor) -> SymTensor:
        return self + (-other)

    def scale(self, factor: Fraction | int) -> SymTensor:
        return SymTensor(
            self.m, self.n, {k: v * factor for k, v in self.coefficients.items()}
        )

    def __bool__(self) -> bool:
        return bool(self.coefficients)


def _check_matrix(gamma: IntMatrix, m: int) -> None:
    if len(gamma) != m or any(len(row) != m for row in gamma):
        msg = f"Matrix {gamma} is not {m}x{m}"
        raise DomainError(msg)
    if abs(mat_det(gamma)) != 1:
        msg = f"Matrix {gamma} is not invertible over the integers"
        raise DomainError(msg)


def rho_sym(gamma: IntMatrix, n: int, tensor: SymTensor) -> SymTensor:
    """Apply the n-th symmetric power of the standard representation.

    The basis vector e_j goes to the j-th column of gamma, and a monomial in the
    basis vectors goes to the product of the images.

    :param gamma: m x m integer matrix of determinant ±1
    :type gamma: IntMatrix
    :param n: degree of the symmetric power
    :type n: int
    :param tensor: element of Sym^n(Q^m)
    :type tensor: SymTensor
    :raises DomainError: the degree or the size of gamma does not match
    :return: the transformed tensor
    :rtype: SymTensor
    """
    if tensor.n != n:
        msg = f"Tensor of degree {tensor.n} given to Sym^{n}"
        raise DomainError(msg)
    _check_matrix(gamma, tensor.m)
    if not tensor:
        return tensor
    xs = symbols(f"x1:{tensor.m + 1}")
    size = range(tensor.m)
    images = [sum(gamma[i][j] * xs[i] for i in size) for j in size]
    expr = sum(
        Rational(coeff.numerator, coeff.denominator)
        * _product(images, monomial)
        for monomial, coeff in tensor.coefficients.items()
    )
    result = {
        monomial: Fraction(int(coeff.p), int(coeff.q))
        for monomial, coeff in Poly(expr, *xs).terms()
    }
    return SymTensor(tensor.m, n, result)


def _product(images: Sequence[object], monomial: Monomial) -> object:
    result: object = 1
    for image, exponent in zip(images, monomial):
        result = result * image**exponent  # type: ignore[operator]
    return result


class Cochain:
    """A function from k-tuples of group elements to Sym^n(Q^m)."""

    def __init__(
        self,
        arity: int,
        n: int,
        m: int,
        evaluator: Callable[[Word], SymTensor],
    ) -> None:
        self.arity = arity
        self.n = n
        self.m = m
        self._evaluator = evaluator

    @classmethod
    def from_table(
        cls, arity: int, n: int, m: int, table: Mapping[Word, SymTensor]
    ) -> Cochain:
        """Build a cochain known only on the tuples of a table.

        :raises SupportError: when evaluated on a tuple missing from the table
        """
        frozen = dict(table)

        def evaluate(word: Word) -> SymTensor:
            try:
                return frozen[word]
            except KeyError:
                msg = f"Cochain is not tabulated at {word}"
                raise SupportError(msg) from None

        return cls(arity, n, m, evaluate)

    def __call__(self, *gammas: IntMatrix) -> SymTensor:
        if len(gammas) != self.arity:
            msg = f"Cochain of arity {self.arity} evaluated on {len(gammas)} elements"
            raise DomainError(msg)
        word = tuple(tuple(tuple(row) for row in g) for g in gammas)
        for gamma in word:
            _check_matrix(gamma, self.m)
        return self._evaluator(word)


def random_cochain(arity: int, n: int, m: int = 3, *, seed: int = 0) -> Cochain:
    """Return a cochain with seeded random integer values, computed on demand.

    The value at a tuple depends only on the seed and the tuple.
    """
    basis = monomials(m, n)

    def evaluate(word: Word) -> SymTensor:
        rng = random.Random(f"{seed}:{arity}:{word}")
        return SymTensor(m, n, {e: Fraction(rng.randint(-5, 5)) for e in basis})

    return Cochain(arity, n, m, evaluate)


def coboundary(f: Cochain) -> Cochain:
    """Return the bar coboundary of a cochain.

    (df)(g1, ..., g_{i+1}) = rho(g1) f(g2, ..., g_{i+1})
        + sum_{k=1}^{i} (-1)^k f(g1, ..., g_k g_{k+1}, ..., g_{i+1})
        + (-1)^{i+1} f(g1, ..., g_i)
    """
    i = f.arity

    def evaluate(word: Word) -> SymTensor:
        total = rho_sym(word[0], f.n, f(*word[1:]))
        for k in range(1, i + 1):
            merged = (*word[: k - 1], mat_mul(word[k - 1], word[k]), *word[k + 1 :])
            total = total + f(*merged).scale((-1) ** k)
        return total + f(*word[:i]).scale((-1) ** (i + 1))

    return Cochain(i + 1, f.n, f.m, evaluate)


def standard_generators(m: int = 3) -> list[IntMatrix]:
    """Return the elementary matrices I + E_ij, I - E_ij and the signed permutations."""
    found = []
    for i, j in itertools.permutations(range(m), 2):
        for sign in (1, -1):
            found.append(
                tuple(
                    tuple(
                        int(r == c) + (sign if (r, c) == (i, j) else 0)
                        for c in range(m)
                    )
                    for r in range(m)
                )
            )
    return found + signed_permutations(m)


def random_word(rng: random.Random, length: int, m: int = 3) -> IntMatrix:
    """Multiply a given number of random standard generators."""
    generators = standard_generators(m)
    result = identity(m)
    for _ in range(length):
        result = mat_mul(result, rng.choice(generators))
    return result


def dd_vanishes(f: Cochain, word: Sequence[IntMatrix]) -> bool:
    """Check d(d(f)) = 0 at a tuple of arity(f) + 2 elements."""
    return not coboundary(coboundary(f))(*word)


# fillings


@dataclass(frozen=True)
class ChainTerm:
    coeff: int
    gamma: IntMatrix
    cell: str
    dim: int


@dataclass(frozen=True)
class FormalChain:
    """A chain written with translates of cells of the four fundamental tetrahedra."""

    terms: Tuple[ChainTerm, ...]

    @classmethod
    def from_chain(cls, chain: Chain) -> FormalChain:
        terms = []
        ordered = sorted(chain.items(), key=lambda t: [c.sort_key() for c in t[0]])
        for simplex, coeff in ordered:
            gamma, cell = locate_simplex(simplex)
            terms.append(ChainTerm(coeff, gamma, cell, simplex_dim(simplex)))
        return cls(tuple(terms))

    def to_chain(self) -> Chain:
        chain: Chain = {}
        for term in self.terms:
            for simplex, coeff in translate(
                term.gamma, {catalogue_simplex(term.cell): term.coeff}
            ).items():
                value = chain.get(simplex, 0) + coeff
                if value:
                    chain[simplex] = value
                else:
                    chain.pop(simplex)
        return chain

    def translate(self, gamma: IntMatrix) -> FormalChain:
        return FormalChain(
            tuple(
                ChainTerm(t.coeff, mat_mul(gamma, t.gamma), t.cell, t.dim)
                for t in self.terms
            )
        )

    @property
    def dims(self) -> set[int]:
        return {t.dim for t in self.terms}

    def to_json(self) -> list[dict[str, object]]:
        return [
            {
                "coeff": t.coeff,
                "gamma": [list(row) for row in t.gamma],
                "cell": t.cell,
                "dim": t.dim,
            }
            for t in self.terms
        ]


def filling_sigma(
    gammas: Sequence[IntMatrix], record: DistanceRecord
) -> FormalChain:
    """Return the filling simplex sigma(g1, ..., gp) in translates of catalogue cells.

    sigma() is the centre o of the fundamental cube and
    sigma(g1, ..., gp) = -P(g1 sigma(g2, ..., gp)) for the chain homotopy P of the
    contraction.

    :param gammas: 3x3 integer matrices of determinant ±1
    :type gammas: Sequence[IntMatrix]
    :param record: distances covering every cube the contraction passes through
    :type record: DistanceRecord
    :raises RadiusExceededError: a needed stratum lies beyond the record
    :return: a p-chain
    :rtype: FormalChain
    """
    return FormalChain.from_chain(_filling_chain(gammas, record))


def _filling_chain(gammas: Sequence[IntMatrix], record: DistanceRecord) -> Chain:
    for gamma in gammas:
        _check_matrix(gamma, 3)
    if not gammas:
        return {(fundamental_cell(3),): 1}
    inner = translate(gammas[0], _filling_chain(gammas[1:], record))
    _, homotopy = contract_chain(inner, record)
    return {s: -c for s, c in homotopy.items()}


def filling_faces(gammas: Sequence[IntMatrix], record: DistanceRecord) -> list[Chain]:
    """Return the chains the faces of sigma(g1, ..., gp) must match, face 0 first.

    Face 0 is g1 sigma(g2, ..., gp), face i multiplies g_i g_{i+1} and face p drops
    g_p. The faces are plain chains of the subdivision.
    """
    p = len(gammas)
    faces = [translate(gammas[0], _filling_chain(gammas[1:], record))]
    for i in range(1, p):
        merged = (*gammas[: i - 1], mat_mul(gammas[i - 1], gammas[i]), *gammas[i + 1 :])
        faces.append(_filling_chain(merged, record))
    faces.append(_filling_chain(gammas[:-1], record))
    return faces


def face_identity_check(gammas: Sequence[IntMatrix], record: DistanceRecord) -> bool:
    """Check that the boundary of sigma(g1, ..., gp) is the alternating sum of faces.

    :raises DomainError: no group elements were given
    """
    if not gammas:
        msg = "sigma() has no faces to check"
        raise DomainError(msg)
    expected: Chain = {}
    for i, face in enumerate(filling_faces(gammas, record)):
        for simplex, coeff in face.items():
            value = expected.get(simplex, 0) + (-1) ** i * coeff
            if value:
                expected[simplex] = value
            else:
                expected.pop(simplex)
    return boundary(filling_sigma(gammas, record).to_chain()) == expected


def cocycle_from_generators(
    values: Mapping[str, SymTensor], chain: FormalChain
) -> SymTensor:
    """Evaluate an invariant form on a chain from its values on the catalogue cells.

    :param values: tensor attached to each catalogue cell of the relevant dimension,
        normally the four fundamental tetrahedra
    :type values: Mapping[str, SymTensor]
    :param chain: chain of translated catalogue cells
    :type chain: FormalChain
    :raises DomainError: a cell of the chain has no value
    :return: the sum of coeff * rho(gamma) value(cell)
    :rtype: SymTensor
    """
    if not values:
        msg = "At least one generator value is needed"
        raise DomainError(msg)
    sample = next(iter(values.values()))
    total = SymTensor.zero(sample.m, sample.n)
    for term in chain.terms:
        try:
            value = values[term.cell]
        except KeyError:
            msg = f"No generator value for cell '{term.cell}'"
            raise DomainError(msg) from None
        total = total + rho_sym(term.gamma, sample.n, value).scale(term.coeff)
    return total
