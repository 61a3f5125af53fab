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

"""Define tests related to the wrretract.cohomology module."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import TYPE_CHECKING

import pytest

from wrretract.cohomology import (
    GENERATOR_CELLS,
    ChainTerm,
    Cochain,
    FormalChain,
    SymTensor,
    coboundary,
    cocycle_from_generators,
    dd_vanishes,
    face_identity_check,
    filling_faces,
    filling_sigma,
    monomials,
    random_cochain,
    random_word,
    rho_sym,
    standard_generators,
)
from wrretract.complex import cube_basis, fundamental_cell
from wrretract.contraction import center_target
from wrretract.exceptions import DomainError, SupportError
from wrretract.intvec import from_columns, identity, mat_mul

if TYPE_CHECKING:
    from wrretract.complex import DistanceRecord
    from wrretract.intvec import IntMatrix

CUBE = fundamental_cell()
SHEAR2 = ((1, 1), (0, 1))
SHEAR3 = ((1, 1, 0), (0, 1, 0), (0, 0, 1))


def _level_one_gamma(record: DistanceRecord) -> IntMatrix:
    """Return a matrix moving the fundamental cube to a cube at distance one.

    :param record: distance record reaching level one
    :type record: DistanceRecord
    :return: matrix whose columns are the basis of the cube
    :rtype: IntMatrix
    """
    return from_columns(cube_basis(record.cubes_at_distance(1)[0]))


class TestSymTensor:
    """Define tests related to symmetric power tensors."""

    def test_monomials(self) -> None:
        """Monomials are listed with the highest power of x1 first."""
        assert monomials(2, 1) == [(1, 0), (0, 1)]
        assert len(monomials(3, 2)) == 6
        assert monomials(3, 2)[0] == (2, 0, 0)

    def test_zero_coefficients_dropped(self) -> None:
        """Zero coefficients are not stored."""
        tensor = SymTensor(2, 1, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
        assert tensor.coefficients == {(0, 1): 2}
        assert not SymTensor.zero(2, 1)

    def test_invalid_monomial(self) -> None:
        """Monomials must have the right degree and length."""
        with pytest.raises(DomainError):
            SymTensor(2, 2, {(1, 0): Fraction(1)})

    def test_arithmetic(self) -> None:
        """Addition, subtraction and scaling act on coefficients."""
        a = SymTensor(2, 1, {(1, 0): Fraction(1)})
        b = SymTensor(2, 1, {(1, 0): Fraction(1, 2), (0, 1): Fraction(3)})
        assert (a + b).coefficients == {(0, 1): 3, (1, 0): Fraction(3, 2)}
        assert not (b - b)
        assert b.scale(2).coefficients == {(0, 1): 6, (1, 0): 1}

    def test_mismatched_spaces(self) -> None:
        """Tensors of different symmetric powers cannot be added."""
        with pytest.raises(DomainError):
            SymTensor.zero(2, 1) + SymTensor.zero(3, 1)

    def test_json(self) -> None:
        """Tensors read and write exponent strings and rational strings."""
        tensor = SymTensor.from_json(3, 2, {"2,0,0": "1/2", "0,1,1": -3})
        assert tensor.coefficients == {(0, 1, 1): -3, (2, 0, 0): Fraction(1, 2)}
        assert tensor.to_json() == {"0,1,1": "-3", "2,0,0": "1/2"}

    def test_from_json_invalid(self) -> None:
        """Unreadable exponents are rejected."""
        with pytest.raises(DomainError):
            SymTensor.from_json(3, 1, {"x,0,0": "1"})


class TestRepresentation:
    """Define tests related to the symmetric power representation."""

    def test_shear(self) -> None:
        """The shear sends x2 to x1 + x2."""
        x2 = SymTensor(2, 1, {(0, 1): Fraction(1)})
        assert rho_sym(SHEAR2, 1, x2).coefficients == {(0, 1): 1, (1, 0): 1}
        square = SymTensor(2, 2, {(0, 2): Fraction(1)})
        assert rho_sym(SHEAR2, 2, square).coefficients == {
            (0, 2): 1,
            (1, 1): 2,
            (2, 0): 1,
        }

    def test_homomorphism(self) -> None:
        """rho(gh) = rho(g) rho(h) on random words."""
        rng = random.Random(4)
        tensor = SymTensor.from_json(3, 2, {"2,0,0": "1", "0,1,1": "-1/3"})
        for _ in range(10):
            g, h = random_word(rng, 3), random_word(rng, 3)
            assert rho_sym(mat_mul(g, h), 2, tensor) == rho_sym(
                g, 2, rho_sym(h, 2, tensor)
            )

    @pytest.mark.parametrize(
        ("gamma", "degree"),
        [(((2, 0), (0, 1)), 1), (SHEAR2, 2), (SHEAR3, 1)],
    )
    def test_invalid(self, gamma: IntMatrix, degree: int) -> None:
        """Matrices must be unimodular of the right size and degrees must match."""
        with pytest.raises(DomainError):
            rho_sym(gamma, degree, SymTensor(2, 1, {(1, 0): Fraction(1)}))

    def test_standard_generators(self) -> None:
        """Twelve elementary matrices and 48 signed permutations."""
        assert len(standard_generators(3)) == 60
        assert SHEAR3 in standard_generators(3)


class TestCochains:
    """Define tests related to bar cochains."""

    def test_arity(self) -> None:
        """Cochains take exactly their arity of arguments."""
        f = random_cochain(1, 1)
        with pytest.raises(DomainError):
            f(SHEAR3, SHEAR3)

    def test_seeded(self) -> None:
        """Values depend only on the seed and the arguments."""
        assert random_cochain(1, 2, seed=3)(SHEAR3) == random_cochain(1, 2, seed=3)(
            SHEAR3
        )

    def test_from_table(self) -> None:
        """Tabulated cochains raise outside their table."""
        value = SymTensor(3, 1, {(1, 0, 0): Fraction(1)})
        f = Cochain.from_table(1, 1, 3, {(SHEAR3,): value})
        assert f(SHEAR3) == value
        with pytest.raises(SupportError):
            f(identity(3))

    def test_coboundary_of_constant(self) -> None:
        """The coboundary of a 0-cochain v is g -> rho(g) v - v."""
        v = SymTensor(3, 1, {(0, 1, 0): Fraction(1)})
        f = Cochain.from_table(0, 1, 3, {(): v})
        assert coboundary(f)(SHEAR3).coefficients == {(1, 0, 0): 1}

    @pytest.mark.parametrize(("arity", "n"), [(0, 1), (1, 2), (2, 1)])
    def test_dd_vanishes(self, arity: int, n: int) -> None:
        """Applying the coboundary twice gives zero."""
        rng = random.Random(arity)
        f = random_cochain(arity, n, seed=arity)
        for _ in range(3):
            word = [random_word(rng, 2) for _ in range(arity + 2)]
            assert dd_vanishes(f, word)


class TestFillings:
    """Define tests related to filling simplices and invariant forms."""

    def test_empty_filling(self, record_one: DistanceRecord) -> None:
        """The filling of the empty tuple is the centre of the fundamental cube."""
        centre = filling_sigma([], record_one)
        assert isinstance(centre, FormalChain)
        assert centre.to_chain() == {(CUBE,): 1}
        assert [(t.cell, t.dim) for t in centre.terms] == [("o", 0)]
        assert filling_sigma([identity(3)], record_one).terms == ()

    def test_level_one_filling(self, record_one: DistanceRecord) -> None:
        """A cube at distance one is joined to the origin through its target."""
        gamma = _level_one_gamma(record_one)
        cube = record_one.cubes_at_distance(1)[0]
        target = center_target(cube)
        assert filling_sigma([gamma], record_one).to_chain() == {
            (CUBE, target): 1,
            (cube, target): -1,
        }
        assert filling_faces([gamma], record_one) == [{(cube,): 1}, {(CUBE,): 1}]
        assert face_identity_check([gamma], record_one)

    def test_face_identity_pair(self, record_one: DistanceRecord) -> None:
        """The face identity holds for a pair ending in the identity."""
        gamma = _level_one_gamma(record_one)
        assert face_identity_check([gamma, identity(3)], record_one)

    def test_face_identity_empty(self, record_one: DistanceRecord) -> None:
        """The empty tuple has no faces."""
        with pytest.raises(DomainError):
            face_identity_check([], record_one)

    def test_formal_chain(self, record_one: DistanceRecord) -> None:
        """Fillings are written with translates of catalogue cells."""
        formal = filling_sigma([_level_one_gamma(record_one)], record_one)
        sigma = formal.to_chain()
        assert formal.dims == {1}
        assert FormalChain.from_chain(sigma) == formal
        assert formal.translate(identity(3)).to_chain() == sigma
        assert all(isinstance(item["cell"], str) for item in formal.to_json())

    def test_cocycle_from_generators(self) -> None:
        """Values on translated tetrahedra are moved by rho and summed."""
        values = {
            key: SymTensor(3, 1, {}) for key in GENERATOR_CELLS
        }
        values["o-h-m1-x"] = SymTensor(3, 1, {(1, 0, 0): Fraction(1)})
        values["o-t-m2-y"] = SymTensor(3, 1, {(0, 1, 0): Fraction(1)})
        chain = FormalChain(
            (
                ChainTerm(1, identity(3), "o-h-m1-x", 3),
                ChainTerm(-2, SHEAR3, "o-t-m2-y", 3),
            )
        )
        result = cocycle_from_generators(values, chain)
        assert result.coefficients == {(0, 1, 0): -2, (1, 0, 0): -1}

    def test_cocycle_missing_value(self) -> None:
        """Cells without a value are rejected."""
        values = {"o-h-m1-x": SymTensor(3, 1, {(1, 0, 0): Fraction(1)})}
        chain = FormalChain((ChainTerm(1, identity(3), "o-h", 1),))
        with pytest.raises(DomainError):
            cocycle_from_generators(values, chain)
        with pytest.raises(DomainError):
            cocycle_from_generators({}, chain)
