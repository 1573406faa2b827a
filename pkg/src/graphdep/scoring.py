"""Arc and label score functions for the three classifier variants.

Grid entry [i][j] is the score of head i governing dependent j.  The
bias terms differ by variant on purpose: the dense arc score adds a
head-only bias, while the symmetric and circulant scores add a bias
against the concatenated head+dep pair; the dense label score keeps a
per-label scalar bias that the other variants drop.

Training scores labels at gold heads; inference scores them at the
heads the decoder predicted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from . import kernels
from .autodiff import ParamVars, Var
from .errors import ShapeError

VARIANTS = ("dense", "symmetric", "circulant")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown classifier variant {variant!r}")


@dataclass
class ArcClassifier:
    """Head-dependent scorer over the arc views (dimension n)."""

    variant: str
    dim: int

    def __post_init__(self):
        _check_variant(self.variant)

    def init_params(self, rng: np.random.Generator,
                    init_scale: float = 0.01) -> dict[str, np.ndarray]:
        n = self.dim
        if self.variant == "dense":
            return {"arc.w": rng.uniform(-init_scale, init_scale, size=(n, n)),
                    "arc.b": np.zeros(n)}
        if self.variant == "symmetric":
            return {"arc.w": rng.uniform(-init_scale, init_scale, size=n),
                    "arc.b": np.zeros(2 * n)}
        spectrum = kernels.spectrum_init(n, rng, init_scale)
        return {"arc.w": ad.complex_to_pairs(spectrum), "arc.b": np.zeros(2 * n)}

    def grid_op(self, ctx: ParamVars, vh: Var, vd: Var) -> Var:
        """Tape-recorded (T+1)x(T+1) arc score grid."""
        n = self.dim
        if vh.shape[1] != n or vd.shape[1] != n:
            raise ShapeError(f"score_arcs: views {vh.shape}/{vd.shape} vs kernel dim {n}")
        w, b = ctx["arc.w"], ctx["arc.b"]
        if self.variant == "dense":
            grid = ad.matmul(ad.matmul(vh, w), ad.transpose(vd))
            return ad.add_colvec(grid, ad.matvec(vh, b))
        if self.variant == "symmetric":
            grid = ad.matmul(ad.mul_rowvec(vh, w), ad.transpose(vd))
        else:
            grid = kernels.circulant_grid_op(vh, vd, w)
        grid = ad.add_colvec(grid, ad.matvec(vh, ad.slice1d(b, 0, n)))
        return ad.add_rowvec(grid, ad.matvec(vd, ad.slice1d(b, n, 2 * n)))

    def grid_values(self, params: dict[str, np.ndarray], vh: np.ndarray,
                    vd: np.ndarray) -> np.ndarray:
        """Plain-numpy grid; the path benchmarks and inference use."""
        n = self.dim
        w, b = params["arc.w"], params["arc.b"]
        if self.variant == "dense":
            return kernels.dense_grid_values(vh, vd, w) + (vh @ b)[:, None]
        if self.variant == "symmetric":
            grid = kernels.symmetric_grid_values(vh, vd, w)
        else:
            grid = kernels.circulant_grid_values(vh, vd, ad.pairs_to_complex(w))
        return grid + (vh @ b[:n])[:, None] + (vd @ b[n:])[None, :]


@dataclass
class LabelClassifier:
    """Per-label scorers over the label views (dimension m, L labels)."""

    variant: str
    dim: int
    n_labels: int

    def __post_init__(self):
        _check_variant(self.variant)

    def init_params(self, rng: np.random.Generator,
                    init_scale: float = 0.01) -> dict[str, np.ndarray]:
        m = self.dim
        params: dict[str, np.ndarray] = {}
        for l in range(self.n_labels):
            if self.variant == "dense":
                params[f"label.{l}.u"] = rng.uniform(-init_scale, init_scale, size=(m, m))
                params[f"label.{l}.b"] = np.zeros(2 * m)
                params[f"label.{l}.b0"] = np.zeros(())
            elif self.variant == "symmetric":
                params[f"label.{l}.u"] = rng.uniform(-init_scale, init_scale, size=m)
                params[f"label.{l}.b"] = np.zeros(2 * m)
            else:
                spectrum = kernels.spectrum_init(m, rng, init_scale)
                params[f"label.{l}.u"] = ad.complex_to_pairs(spectrum)
                params[f"label.{l}.b"] = np.zeros(2 * m)
        return params

    def pairs_op(self, ctx: ParamVars, vh_sel: Var, vd_sel: Var) -> Var:
        """Tape-recorded (T, L) label scores for row-aligned head/dep views."""
        m = self.dim
        if vh_sel.shape[1] != m or vd_sel.shape[1] != m:
            raise ShapeError(
                f"score_labels: views {vh_sel.shape}/{vd_sel.shape} vs kernel dim {m}")
        cols = []
        for l in range(self.n_labels):
            u, b = ctx[f"label.{l}.u"], ctx[f"label.{l}.b"]
            if self.variant == "dense":
                s = ad.rowwise_dot(ad.matmul(vh_sel, u), vd_sel)
            elif self.variant == "symmetric":
                s = ad.rowwise_dot(ad.mul_rowvec(vh_sel, u), vd_sel)
            else:
                s = kernels.circulant_pairs_op(vh_sel, vd_sel, u)
            s = ad.add(s, ad.matvec(vh_sel, ad.slice1d(b, 0, m)))
            s = ad.add(s, ad.matvec(vd_sel, ad.slice1d(b, m, 2 * m)))
            if self.variant == "dense":
                s = ad.add_scalar(s, ctx[f"label.{l}.b0"])
            cols.append(s)
        return ad.stack_cols(cols)

    def pair_values(self, params: dict[str, np.ndarray], vh: np.ndarray,
                    vd: np.ndarray) -> np.ndarray:
        """Label score vector (length L) for a single head/dep view pair."""
        return self.scores_at(params, vh[None, :], vd[None, :])[0]

    def scores_at(self, params: dict[str, np.ndarray], vh_sel: np.ndarray,
                  vd_sel: np.ndarray) -> np.ndarray:
        """(T, L) label scores for row-aligned head/dep view matrices."""
        m = self.dim
        out = np.empty((vh_sel.shape[0], self.n_labels))
        for l in range(self.n_labels):
            u, b = params[f"label.{l}.u"], params[f"label.{l}.b"]
            if self.variant == "dense":
                s = np.sum((vh_sel @ u) * vd_sel, axis=1)
            elif self.variant == "symmetric":
                s = np.sum(vh_sel * u[None, :] * vd_sel, axis=1)
            else:
                spec = ad.pairs_to_complex(u)
                sh = kernels._half_spectra(vh_sel)
                sd = kernels._half_spectra(vd_sel)
                band = sd * kernels._midband(spec)[None, :]
                s = np.sum(sh.real * band.real + sh.imag * band.imag, axis=1)
            s = s + vh_sel @ b[:m] + vd_sel @ b[m:]
            if self.variant == "dense":
                s = s + params[f"label.{l}.b0"]
            out[:, l] = s
        return out


def self_arc_mask(size: int) -> np.ndarray:
    """Additive mask putting -inf on self-arcs (the decoder masks the rest)."""
    mask = np.zeros((size, size))
    np.fill_diagonal(mask, -np.inf)
    return mask


def arc_loss(grid: Var, gold_heads: np.ndarray) -> Var:
    """Mean softmax cross-entropy over head candidates, self-arcs masked."""
    masked = ad.add_const(grid, self_arc_mask(grid.shape[0]))
    return ad.softmax_ce_columns(masked, gold_heads)


def label_loss(label_scores: Var, gold_labels: np.ndarray) -> Var:
    """Mean softmax cross-entropy over labels at the gold arcs."""
    return ad.softmax_ce_rows(label_scores, gold_labels)
