import numpy as np
import pytest

from slicekit.errors import ShapeMismatch
from slicekit.quat import Quaternion
from slicekit.stemtensor import (
    StemValue,
    TensorValue,
    basis_product,
    kron_matrix,
    oracle_star,
    sigma_matrix,
    slot_imaginary,
    star_vector,
    tensor_from_kron,
    tensor_from_vector,
    tensor_mul,
    tensor_one,
    vector_from_tensor,
)


def _random_stem(n, rng):
    return StemValue(n, tuple(Quaternion(*rng.uniform(-1, 1, 4)) for _ in range(1 << n)))


def _basis_tensor(n, m):
    return tensor_from_vector(StemValue.basis(n, m))


class TestBasisIsomorphism:
    def test_first_basis_is_one(self):
        assert tensor_from_vector(StemValue.basis(2, 1)) == tensor_one(2)

    def test_basis_maps_to_basis(self):
        t = tensor_from_vector(StemValue.basis(2, 3))
        assert t.coefficients[2] == Quaternion(1)
        assert sum(c.norm2() for c in t.coefficients) == 1.0

    def test_round_trip(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 4))
            a = _random_stem(n, rng)
            assert vector_from_tensor(tensor_from_vector(a)) == a

    def test_additive_and_scalar_equivariant(self, rng):
        for _ in range(100):
            a = _random_stem(2, rng)
            b = _random_stem(2, rng)
            q = Quaternion(*rng.uniform(-1, 1, 4))
            left = tensor_from_vector(a) + tensor_from_vector(b)
            assert vector_from_tensor(left) == a + b
            scaled = tensor_from_vector(StemValue(2, tuple(q * e for e in a.entries)))
            assert scaled == tensor_from_vector(a).scale_left(q)
            scaled_r = tensor_from_vector(StemValue(2, tuple(e * q for e in a.entries)))
            assert scaled_r == tensor_from_vector(a).scale_right(q)


class TestBasisProducts:
    def test_slot_square_is_minus_one(self):
        c, sign = basis_product(1, 2, 2)
        assert (c, sign) == (1, -1)

    def test_identity_element(self, rng):
        b = _random_stem(2, rng)
        assert tensor_mul(tensor_one(2), tensor_from_vector(b)) == tensor_from_vector(b)

    def test_oracle_adjudicated_product(self):
        # slot expansion: b(2) * b(3) = +b(4); confirmed by the Kronecker route
        direct = tensor_mul(_basis_tensor(2, 2), _basis_tensor(2, 3))
        assert direct == _basis_tensor(2, 4)
        left = kron_matrix(_basis_tensor(2, 2))
        right = kron_matrix(_basis_tensor(2, 3))
        recovered = tensor_from_kron(2, left @ right)
        assert (recovered - _basis_tensor(2, 4)).max_norm() < 1e-12

    def test_all_basis_products_match_oracle(self):
        for n in (1, 2):
            for a in range(1, (1 << n) + 1):
                for b in range(1, (1 << n) + 1):
                    direct = tensor_mul(_basis_tensor(n, a), _basis_tensor(n, b))
                    via_kron = tensor_from_kron(
                        n, kron_matrix(_basis_tensor(n, a)) @ kron_matrix(_basis_tensor(n, b))
                    )
                    assert (direct - via_kron).max_norm() < 1e-12


class TestStarVector:
    def test_identity(self, rng):
        b = _random_stem(1, rng)
        e1 = StemValue.basis(1, 1)
        assert star_vector(e1, b) == b

    def test_order_one_closed_form(self, rng):
        for _ in range(50):
            a = _random_stem(1, rng)
            b = _random_stem(1, rng)
            a1, a2 = a.entries
            b1, b2 = b.entries
            expected = StemValue(1, (a1 * b1 - a2 * b2, a1 * b2 + a2 * b1))
            assert (star_vector(a, b) - expected).max_norm() < 1e-15

    def test_second_slot_squares_to_minus_one(self):
        e2 = StemValue.basis(1, 2)
        assert star_vector(e2, e2) == StemValue(1, (Quaternion(-1), Quaternion()))

    def test_zero_padding_law_exact(self, rng):
        for n in (1, 2, 3):
            for _ in range(25):
                a = _random_stem(n, rng)
                b = _random_stem(n, rng)
                lifted = star_vector(StemValue.padded(a), StemValue.padded(b))
                assert lifted == StemValue.padded(star_vector(a, b))

    def test_oracle_equivalence(self, rng):
        for n in (1, 2):
            for _ in range(100):
                a = _random_stem(n, rng)
                b = _random_stem(n, rng)
                assert (star_vector(a, b) - oracle_star(a, b)).max_norm() < 1e-12

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeMismatch):
            star_vector(_random_stem(1, rng), _random_stem(2, rng))

    def test_associativity(self, rng):
        for n in (1, 2, 3):
            for _ in range(20):
                a, b, c = (_random_stem(n, rng) for _ in range(3))
                left = star_vector(star_vector(a, b), c)
                right = star_vector(a, star_vector(b, c))
                assert (left - right).max_norm() < 1e-12

    def test_distributivity(self, rng):
        for _ in range(50):
            a, b, c = (_random_stem(2, rng) for _ in range(3))
            left = star_vector(a + b, c)
            right = star_vector(a, c) + star_vector(b, c)
            assert (left - right).max_norm() < 1e-13


class TestSigma:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_defining_relation_exact(self, n):
        # multiplication by the slot-N imaginary permutes the basis exactly
        # as the structure matrix columns prescribe
        slot = slot_imaginary(n, n)
        sigma = sigma_matrix(n)
        for m in range(1, (1 << n) + 1):
            product = tensor_mul(slot, _basis_tensor(n, m))
            column = sigma[:, m - 1]
            expected = TensorValue(n, tuple(Quaternion(float(column[idx])) for idx in range(1 << n)))
            assert product == expected

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_square_is_minus_identity(self, n):
        sigma = sigma_matrix(n)
        assert np.array_equal(sigma @ sigma, -np.eye(1 << n, dtype=np.int64))


def test_kron_matrix_is_faithful(rng):
    for _ in range(20):
        a = _random_stem(2, rng)
        recovered = vector_from_tensor(tensor_from_kron(2, kron_matrix(tensor_from_vector(a))))
        assert (recovered - a).max_norm() < 1e-12
