import numpy as np
import pytest

from bectools.groundstate.transforms import (
    dft_axis,
    dft_forward,
    dft_inverse,
    dst_axis,
    dst_forward,
    dst_inverse,
    fourier_frequencies,
    idft_axis,
    idst_axis,
    sine_eigenvalues,
)

from oracles import slow_dft, slow_dst


class TestSine:
    def test_single_mode(self):
        n = 8
        j = np.arange(1, n)
        spectrum = dst_forward(np.sin(j * np.pi / n))

        expected = np.zeros(n - 1)
        expected[0] = 1.0
        np.testing.assert_allclose(spectrum.coefficients, expected, atol=1e-13)

    def test_zero(self):
        assert not np.any(dst_forward(np.zeros(15)).coefficients)

    def test_direct_sum(self, rng):
        values = rng.standard_normal(15)
        np.testing.assert_allclose(dst_axis(values), slow_dst(values), atol=1e-12)

    def test_inverse_single_coefficient(self):
        n = 8
        coeffs = np.zeros(n - 1)
        coeffs[0] = 1.0
        j = np.arange(1, n)
        np.testing.assert_allclose(dst_inverse(coeffs), np.sin(j * np.pi / n), atol=1e-13)

    def test_inverse_all_ones(self):
        root2 = np.sqrt(2.0)
        np.testing.assert_allclose(
            dst_inverse(np.ones(3), n=4), [1 + root2, 0.0, root2 - 1], atol=1e-13
        )

    def test_inverse_of_forward(self, rng):
        values = rng.standard_normal(31)
        np.testing.assert_allclose(dst_inverse(dst_forward(values)), values, atol=1e-12)

    def test_parseval(self, rng):
        n = 16
        values = rng.standard_normal(n - 1)
        coeffs = dst_axis(values)
        assert np.sum(values**2) == pytest.approx(0.5 * n * np.sum(coeffs**2), rel=1e-12)

    def test_eigenvalues(self):
        spectrum = dst_forward(np.zeros(7), length=np.pi)
        np.testing.assert_allclose(spectrum.eigenvalues, np.arange(1, 8))
        np.testing.assert_allclose(sine_eigenvalues(4, 2.0), np.pi * np.array([1, 2, 3]) / 2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError) as e:
            dst_forward(np.zeros(7), n=16)

        assert e.match("Expected 15 interior values, got 7.")


class TestFourier:
    def test_constant(self):
        spectrum = dft_forward(np.full(8, 3.0))
        expected = np.zeros(8)
        expected[0] = 3.0
        np.testing.assert_allclose(spectrum.coefficients, expected, atol=1e-13)

    def test_single_mode(self):
        n = 8
        j = np.arange(n)
        coeffs = dft_forward(np.exp(2j * np.pi * j / n)).coefficients
        expected = np.zeros(n)
        expected[1] = 1.0
        np.testing.assert_allclose(coeffs, expected, atol=1e-13)

    def test_direct_sum(self, rng):
        values = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(dft_axis(values), slow_dft(values), atol=1e-12)

    def test_inverse_of_forward(self, rng):
        values = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(dft_inverse(dft_forward(values)), values, atol=1e-12)

    def test_parseval(self, rng):
        n = 16
        values = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        coeffs = dft_axis(values)
        assert np.sum(np.abs(values) ** 2) == pytest.approx(
            n * np.sum(np.abs(coeffs) ** 2), rel=1e-12
        )

    def test_frequencies_fft_order(self):
        np.testing.assert_allclose(fourier_frequencies(4, 2 * np.pi), [0, 1, -2, -1])


class TestAxes:
    def test_sine_along_each_axis(self, rng):
        values = rng.standard_normal((7, 5))
        along0 = dst_axis(values, axis=0)
        for col in range(5):
            np.testing.assert_allclose(along0[:, col], slow_dst(values[:, col]), atol=1e-12)
        np.testing.assert_allclose(idst_axis(along0, axis=0), values, atol=1e-12)

    def test_fourier_along_each_axis(self, rng):
        values = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        along1 = dft_axis(values, axis=1)
        for row in range(4):
            np.testing.assert_allclose(along1[row], slow_dft(values[row]), atol=1e-12)
        np.testing.assert_allclose(idft_axis(along1, axis=1), values, atol=1e-12)
