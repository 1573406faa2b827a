"""The three bilinear forms used by the arc and label classifiers.

A pair score is a bilinear form v_i^T M v_j where M is either

  * a dense square matrix (n^2 weights),
  * a diagonal matrix, making the form a triple inner product
    <v_i, w, v_j> = sum_k v_i[k] w[k] v_j[k] (n weights), or
  * a circulant matrix C(w), with C[i][j] = w[(i-j) mod n].

A circulant matrix is diagonalized by the DFT, so its bilinear form
can be evaluated in the frequency domain: with spectra
v'_i = conj(F v_i), v'_j = F v_j and a learned spectrum w', the score
is Re(<v'_i, w', v'_j>) at O(n log n) cost.  The spectrum is stored as
a full complex vector (2n reals); it is the DFT of a real vector at
initialization and therefore conjugate symmetric, a property the
gradient structure preserves during training.

Value-level functions here operate on plain numpy arrays and serve as
both the production scoring path and the verification oracles; the
`*_op` functions are their tape-recorded counterparts for training.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import autodiff, fourier
from .autodiff import Var, complex_to_pairs, pairs_to_complex
from .errors import ShapeError

__all__ = [
    "bilinear_dense",
    "triple_inner_product",
    "circulant_from_vector",
    "circulant_bilinear_naive",
    "circulant_bilinear_fft",
    "spectrum_init",
    "spectrum_of_weights",
    "weights_of_spectrum",
    "dense_grid_values",
    "symmetric_grid_values",
    "circulant_grid_values",
    "circulant_grid_op",
    "circulant_pairs_op",
]


def _check_vec(name: str, *vs) -> int:
    n = None
    for v in vs:
        if v.ndim != 1:
            raise ShapeError(f"{name}: expects vectors, got shape {v.shape}")
        if n is None:
            n = v.shape[0]
        elif v.shape[0] != n:
            raise ShapeError(f"{name}: dimension mismatch {n} vs {v.shape[0]}")
    return n


# ---------------------------------------------------------------------------
# Value-level kernels
# ---------------------------------------------------------------------------

def bilinear_dense(vi: np.ndarray, w: np.ndarray, vj: np.ndarray) -> float:
    """v_i^T W v_j with a dense weight matrix."""
    vi = np.asarray(vi, dtype=np.float64)
    vj = np.asarray(vj, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or vi.shape[0] != w.shape[0] or vj.shape[0] != w.shape[1]:
        raise ShapeError(
            f"bilinear_dense: shapes {vi.shape} x {w.shape} x {vj.shape}")
    return float(vi @ w @ vj)


def triple_inner_product(vi: np.ndarray, w: np.ndarray, vj: np.ndarray) -> float:
    """<v_i, w, v_j> = sum_k v_i[k] w[k] v_j[k]; the diagonal-matrix bilinear form."""
    vi = np.asarray(vi, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    vj = np.asarray(vj, dtype=np.float64)
    _check_vec("triple_inner_product", vi, w, vj)
    return float(np.sum(vi * w * vj))


def circulant_from_vector(w: np.ndarray) -> np.ndarray:
    """Materialize C(w): first column w, every column a downward rotation."""
    w = np.asarray(w, dtype=np.float64)
    _check_vec("circulant_from_vector", w)
    n = w.shape[0]
    i = np.arange(n)
    return w[(i[:, None] - i[None, :]) % n]


def circulant_bilinear_naive(vi: np.ndarray, w: np.ndarray, vj: np.ndarray) -> float:
    """v_i^T C(w) v_j through the explicit O(n^2) matrix; the oracle path."""
    vi = np.asarray(vi, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    vj = np.asarray(vj, dtype=np.float64)
    _check_vec("circulant_bilinear_naive", vi, w, vj)
    return float(vi @ circulant_from_vector(w) @ vj)


def circulant_bilinear_fft(vi: np.ndarray, spectrum: np.ndarray,
                           vj: np.ndarray, symmetry_tol: float = 1e-9) -> float:
    """Re(<conj(F v_i), w', F v_j>) with a precomputed spectrum w' = F w / n.

    A spectrum that is not conjugate symmetric (beyond `symmetry_tol`)
    triggers a warning; the real part is taken regardless.
    """
    vi = np.asarray(vi, dtype=np.float64)
    vj = np.asarray(vj, dtype=np.float64)
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    _check_vec("circulant_bilinear_fft", vi, vj)
    if spectrum.ndim != 1 or spectrum.shape[0] != vi.shape[0]:
        raise ShapeError(
            f"circulant_bilinear_fft: spectrum shape {spectrum.shape} vs inputs {vi.shape}")
    residual = fourier.conjugate_symmetry_residual(spectrum)
    if residual > symmetry_tol:
        warnings.warn(
            f"circulant spectrum conjugate-symmetry residual {residual:.3e} "
            f"exceeds {symmetry_tol:.1e}", RuntimeWarning, stacklevel=2)
    vpi = np.conj(fourier.dft(vi))
    vpj = fourier.dft(vj)
    return float(np.real(np.sum(vpi * spectrum * vpj)))


def spectrum_of_weights(w: np.ndarray) -> np.ndarray:
    """Spectrum w' = F w / n of a real circulant weight vector."""
    w = np.asarray(w, dtype=np.float64)
    return fourier.dft(w) / w.shape[0]


def weights_of_spectrum(spectrum: np.ndarray) -> np.ndarray:
    """Real circulant weight vector whose spectrum is w' (inverse of the above)."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    n = spectrum.shape[0]
    return np.real(fourier.idft(spectrum) * n)


def spectrum_init(n: int, rng: np.random.Generator,
                  init_scale: float = 0.1) -> np.ndarray:
    """Draw a real weight vector uniformly in +-init_scale and return its spectrum.

    The result is conjugate symmetric by construction (DFT of a real vector).
    """
    if n < 1:
        raise ShapeError(f"spectrum_init: n must be >= 1, got {n}")
    w = rng.uniform(-init_scale, init_scale, size=n) if init_scale > 0 else np.zeros(n)
    return spectrum_of_weights(w)


# ---------------------------------------------------------------------------
# Batched grid scoring (value level)
# ---------------------------------------------------------------------------

def dense_grid_values(vh: np.ndarray, vd: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Grid of v_h[i]^T W v_d[j] for all row pairs."""
    return (vh @ w) @ vd.T


def symmetric_grid_values(vh: np.ndarray, vd: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Grid of <v_h[i], w, v_d[j]> for all row pairs."""
    return (vh * w[None, :]) @ vd.T


def _midband(spectrum: np.ndarray) -> np.ndarray:
    """Fold a full spectrum onto the nonredundant band.

    For real inputs the frequency products pair up as conjugates, so
    only m[k] = w'[k] + conj(w'[n-k]) (endpoints unpaired) contributes.
    The fold is exact for arbitrary spectra, symmetric or not.
    """
    n = spectrum.shape[0]
    k = n // 2 + 1
    m = spectrum[:k].copy()
    h = (n - 1) // 2
    if h >= 1:
        m[1:h + 1] += np.conj(spectrum[n - 1:n - h - 1:-1])
    return m


def _half_spectra(x: np.ndarray) -> np.ndarray:
    """DFT of real rows, truncated to the first n//2 + 1 bins.

    Batched row transforms on the scoring path go through numpy's FFT;
    it matches `fourier.dft` on real input (tested) and keeps the
    O(n log n) path ahead of the dense kernel at production sizes.
    """
    return np.fft.rfft(x, axis=-1)


def circulant_grid_values(vh: np.ndarray, vd: np.ndarray,
                          spectrum: np.ndarray) -> np.ndarray:
    """Grid of Re(<conj(F v_h[i]), w', F v_d[j]>) via one half-spectrum real GEMM."""
    grid, _ = _circ_grid_forward(vh, vd, spectrum)
    return grid


def _pack_complex(z: np.ndarray) -> np.ndarray:
    """(T, K) complex -> contiguous (T, 2K) [real | imag] block."""
    t, k = z.shape
    out = np.empty((t, 2 * k))
    out[:, :k] = z.real
    out[:, k:] = z.imag
    return out


def _circ_grid_forward(vh, vd, spectrum):
    sh = _half_spectra(vh)
    sd = _half_spectra(vd)
    b = sd * _midband(spectrum)[None, :]
    # Re(conj(a) b) = a_re b_re + a_im b_im: packing the real and
    # imaginary halves side by side turns the complex grid product into
    # a single real GEMM on contiguous operands.
    a_pack = _pack_complex(sh)
    b_pack = _pack_complex(b)
    grid = a_pack @ b_pack.T
    return grid, (sd, a_pack, b_pack)


# ---------------------------------------------------------------------------
# Tape primitives for circulant scoring
# ---------------------------------------------------------------------------

def _spread_midband_grad(dm: np.ndarray, n: int) -> np.ndarray:
    """Adjoint of `_midband`: complex midband gradient -> full-spectrum pairs."""
    dw = np.zeros(n, dtype=np.complex128)
    k = dm.shape[0]
    dw[:k] = dm
    h = (n - 1) // 2
    if h >= 1:
        dw[n - h:] = np.conj(dm[1:h + 1])[::-1]
    return complex_to_pairs(dw)


def _unpad_spectrum_grad(ds: np.ndarray, n: int) -> np.ndarray:
    """Adjoint of `_half_spectra`: half-band gradient -> real time-domain rows."""
    full = np.zeros(ds.shape[:-1] + (n,), dtype=np.complex128)
    full[..., :ds.shape[-1]] = ds
    return np.real(np.fft.ifft(full, axis=-1) * n)


def circulant_grid_op(vh: Var, vd: Var, w_pairs: Var) -> Var:
    """Tape-recorded circulant score grid; spectrum parameter is (n, 2) pairs.

    The backward pass mirrors the midband gradient onto both halves of
    the spectrum, which is exactly the gradient of the full-spectrum
    formula for real inputs and keeps conjugate-symmetric parameters
    conjugate symmetric under elementwise optimizer updates.
    """
    if vh.value.ndim != 2 or vd.value.ndim != 2 or vh.shape[1] != vd.shape[1]:
        raise ShapeError(
            f"circulant_grid: views {vh.shape} vs {vd.shape}")
    if w_pairs.value.ndim != 2 or w_pairs.shape != (vh.shape[1], 2):
        raise ShapeError(
            f"circulant_grid: spectrum pairs {w_pairs.shape} for dim {vh.shape[1]}")
    n = vh.shape[1]
    k = n // 2 + 1
    spectrum = pairs_to_complex(w_pairs.value)
    grid, (sd, a_pack, b_pack) = _circ_grid_forward(vh.value, vd.value, spectrum)
    m = _midband(spectrum)

    def back(g):
        da = g @ b_pack
        db_pack = g.T @ a_pack
        dsh = da[:, :k] + 1j * da[:, k:]
        db = db_pack[:, :k] + 1j * db_pack[:, k:]
        dsd = db * np.conj(m)[None, :]
        dm = np.sum(np.conj(sd) * db, axis=0)
        return (_unpad_spectrum_grad(dsh, n),
                _unpad_spectrum_grad(dsd, n),
                _spread_midband_grad(dm, n))

    return vh.tape.record("circulant_grid", (vh, vd, w_pairs), grid, back)


def circulant_pairs_op(vh: Var, vd: Var, w_pairs: Var) -> Var:
    """Row-aligned circulant scores: out[t] = Re(<conj(F vh[t]), w', F vd[t]>)."""
    if vh.value.ndim != 2 or vh.shape != vd.shape:
        raise ShapeError(f"circulant_pairs: views {vh.shape} vs {vd.shape}")
    if w_pairs.value.ndim != 2 or w_pairs.shape != (vh.shape[1], 2):
        raise ShapeError(
            f"circulant_pairs: spectrum pairs {w_pairs.shape} for dim {vh.shape[1]}")
    n = vh.shape[1]
    spectrum = pairs_to_complex(w_pairs.value)
    sh = _half_spectra(vh.value)
    sd = _half_spectra(vd.value)
    m = _midband(spectrum)
    b = sd * m[None, :]
    out = np.sum(sh.real * b.real + sh.imag * b.imag, axis=1)

    def back(g):
        db = g[:, None] * (sh.real + 1j * sh.imag)
        dsh = g[:, None] * (b.real + 1j * b.imag)
        dsd = db * np.conj(m)[None, :]
        dm = np.sum(np.conj(sd) * db, axis=0)
        return (_unpad_spectrum_grad(dsh, n),
                _unpad_spectrum_grad(dsd, n),
                _spread_midband_grad(dm, n))

    return vh.tape.record("circulant_pairs", (vh, vd, w_pairs), out, back)
