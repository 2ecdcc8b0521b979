"""
Scaled sine and Fourier transforms used by the pseudospectral flavors.

Normalizations are fixed so the discrete energies take their textbook form:

* sine:    phi~_l = (2/N) sum_j phi_j sin(j l pi / N),  l = 1..N-1
           phi_j  = sum_l phi~_l sin(j l pi / N)
* Fourier: phi~_p = (1/N) sum_j phi_j exp(-2 pi i j p / N)
           phi_j  = sum_p phi~_p exp(2 pi i j p / N)

Multidimensional data is transformed one axis at a time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

__all__ = [
    "SineSpectrum",
    "FourierSpectrum",
    "sine_eigenvalues",
    "fourier_frequencies",
    "dst_forward",
    "dst_inverse",
    "dft_forward",
    "dft_inverse",
    "dst_axis",
    "idst_axis",
    "dft_axis",
    "idft_axis",
]


@dataclass(frozen=True)
class SineSpectrum:
    """
    DST-I coefficients ``phi~_l`` with eigenvalues ``lambda_l = pi l / (b - a)``.
    """

    coefficients: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class FourierSpectrum:
    """
    DFT coefficients in FFT order (p = 0, 1, .., N/2-1, -N/2, .., -1)
    with frequencies ``lambda_p = 2 pi p / (b - a)``.
    """

    coefficients: np.ndarray
    frequencies: np.ndarray


def sine_eigenvalues(n, length):
    """
    :param n: interval count N
    :param length: extent b - a
    :return: ``pi l / length`` for l = 1..N-1
    """
    return np.pi * np.arange(1, n, dtype=float) / length


def fourier_frequencies(n, length):
    """
    :param n: node count N (even)
    :param length: period b - a
    :return: ``2 pi p / length`` in FFT order, p = -N/2..N/2-1
    """
    return 2.0 * np.pi * scipy.fft.fftfreq(n, d=length / n)


# Axis-wise kernels. scipy's type-1 DST omits the factor 1/2 of the sum
# sum_j phi_j sin(j l pi / N), hence the scalings below.


def dst_axis(values, axis=-1):
    n = values.shape[axis] + 1
    return scipy.fft.dst(values, type=1, axis=axis) / n


def idst_axis(coefficients, axis=-1):
    return 0.5 * scipy.fft.dst(coefficients, type=1, axis=axis)


def dft_axis(values, axis=-1):
    return scipy.fft.fft(values, axis=axis, norm="forward")


def idft_axis(coefficients, axis=-1):
    return scipy.fft.ifft(coefficients, axis=axis, norm="forward")


def dst_forward(values, n=None, *, length=None):
    """
    Forward scaled sine transform of interior values ``phi_1..phi_{N-1}``.

    :param values: real array of length N-1
    :type values: numpy.ndarray
    :param n: interval count N, inferred from ``values`` when omitted
    :type n: int | None
    :param length: domain extent used for the eigenvalues, defaults to N (unit spacing)
    :type length: float | None
    :rtype: SineSpectrum
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1] + 1 if n is None else int(n)
    if values.shape[-1] != n - 1:
        raise ValueError(f"Expected {n - 1} interior values, got {values.shape[-1]}.")
    length = float(n) if length is None else float(length)
    return SineSpectrum(
        coefficients=dst_axis(values),
        eigenvalues=sine_eigenvalues(n, length),
    )


def dst_inverse(spectrum, n=None):
    """
    Rebuild ``phi_j = sum_l phi~_l sin(j l pi / N)``.

    :param spectrum: spectrum or bare coefficient array
    :type spectrum: SineSpectrum | numpy.ndarray
    :param n: interval count N, inferred when omitted
    :type n: int | None
    :rtype: numpy.ndarray
    """
    coefficients = getattr(spectrum, "coefficients", spectrum)
    coefficients = np.asarray(coefficients, dtype=float)
    if n is not None and coefficients.shape[-1] != n - 1:
        raise ValueError(f"Expected {n - 1} coefficients, got {coefficients.shape[-1]}.")
    return idst_axis(coefficients)


def dft_forward(values, *, length=None):
    """
    Forward Fourier transform carrying the 1/N factor.

    :param values: complex array of length N
    :type values: numpy.ndarray
    :param length: period used for the frequencies, defaults to N (unit spacing)
    :type length: float | None
    :rtype: FourierSpectrum
    """
    values = np.asarray(values, dtype=complex)
    n = values.shape[-1]
    length = float(n) if length is None else float(length)
    return FourierSpectrum(
        coefficients=dft_axis(values),
        frequencies=fourier_frequencies(n, length),
    )


def dft_inverse(spectrum):
    """
    Unscaled inverse of :func:`dft_forward`.

    :type spectrum: FourierSpectrum | numpy.ndarray
    :rtype: numpy.ndarray
    """
    coefficients = getattr(spectrum, "coefficients", spectrum)
    return idft_axis(np.asarray(coefficients, dtype=complex))
