"""Discrete Fourier transforms for circulant kernel scoring.

The transforms here are the bridge between circulant weight vectors and
their spectra: a circulant matrix is diagonalized by the DFT, so the
bilinear form through a circulant matrix reduces to an elementwise
product in the frequency domain.

Power-of-two lengths run through an iterative radix-2 FFT vectorized
over leading axes; every other length falls back to Bluestein's
chirp-z algorithm (a radix-2 convolution at padded length), so the
classifier dimension is unconstrained.  All arithmetic is complex128.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "dft",
    "idft",
    "conjugate_symmetry_residual",
    "is_conjugate_symmetric",
]

# Per-length caches for twiddle factors, bit-reversal permutations and
# Bluestein chirps.  Benchmarks hammer a handful of sizes repeatedly.
_TWIDDLES: dict[tuple[int, int], np.ndarray] = {}
_BITREV: dict[int, np.ndarray] = {}
_CHIRPS: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, int]] = {}


def _bit_reversal(n: int) -> np.ndarray:
    perm = _BITREV.get(n)
    if perm is None:
        bits = n.bit_length() - 1
        j = np.arange(n)
        perm = np.zeros(n, dtype=np.intp)
        for _ in range(bits):
            perm = (perm << 1) | (j & 1)
            j >>= 1
        _BITREV[n] = perm
    return perm


def _twiddle(m: int, sign: int) -> np.ndarray:
    key = (m, sign)
    tw = _TWIDDLES.get(key)
    if tw is None:
        tw = np.exp(sign * 2j * np.pi * np.arange(m // 2) / m)
        _TWIDDLES[key] = tw
    return tw


def _fft_pow2(x: np.ndarray, sign: int) -> np.ndarray:
    """Radix-2 iterative FFT along the last axis; len must be a power of two."""
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    a = x[..., _bit_reversal(n)]
    m = 2
    while m <= n:
        half = m // 2
        tw = _twiddle(m, sign)
        a = a.reshape(x.shape[:-1] + (n // m, m))
        even = a[..., :half]
        odd = a[..., half:] * tw
        a = np.concatenate((even + odd, even - odd), axis=-1)
        m *= 2
    return a.reshape(x.shape)


def _chirp(n: int, sign: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Chirp sequence and padded-length transform of its reciprocal filter."""
    key = (n, sign)
    cached = _CHIRPS.get(key)
    if cached is None:
        k = np.arange(n)
        # Reduce k^2 mod 2n before scaling: keeps the chirp angles exact
        # for large n where k*k itself would lose low-order bits.
        chirp = np.exp(sign * 1j * np.pi * ((k * k) % (2 * n)) / n)
        m = 1 << (2 * n - 1).bit_length()
        b = np.zeros(m, dtype=np.complex128)
        b[:n] = np.conj(chirp)
        b[m - n + 1:] = np.conj(chirp[1:])[::-1]
        cached = (chirp, _fft_pow2(b, -1), m)
        _CHIRPS[key] = cached
    return cached


def _fft_bluestein(x: np.ndarray, sign: int) -> np.ndarray:
    n = x.shape[-1]
    chirp, b_hat, m = _chirp(n, sign)
    a = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    a[..., :n] = x * chirp
    conv = _fft_pow2(_fft_pow2(a, -1) * b_hat, +1) / m
    return conv[..., :n] * chirp


def _transform(x: np.ndarray, sign: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    if n == 0:
        raise ValueError("dft: length-0 input")
    if n & (n - 1) == 0:
        return _fft_pow2(x, sign)
    return _fft_bluestein(x, sign)


def dft(x: np.ndarray) -> np.ndarray:
    """Forward DFT along the last axis: X[j] = sum_k x[k] exp(-2*pi*i*jk/n)."""
    return _transform(x, -1)


def idft(x: np.ndarray) -> np.ndarray:
    """Inverse DFT along the last axis, including the 1/n factor."""
    x = np.asarray(x, dtype=np.complex128)
    return _transform(x, +1) / x.shape[-1]


def conjugate_symmetry_residual(spectrum: np.ndarray) -> float:
    """Largest deviation from X[k] == conj(X[n-k mod n]).

    Zero exactly when the spectrum is the DFT of a real vector.
    """
    s = np.asarray(spectrum, dtype=np.complex128)
    mirrored = np.conj(np.roll(s[..., ::-1], 1, axis=-1))
    return float(np.max(np.abs(s - mirrored))) if s.size else 0.0


def is_conjugate_symmetric(spectrum: np.ndarray, tol: float = 1e-9) -> bool:
    return conjugate_symmetry_residual(spectrum) <= tol
