"""Graph-based dependency parsing with interchangeable bilinear kernels.

The arc and label classifiers score head-dependent pairs through one of
three bilinear forms: a dense weight matrix, a diagonal weight vector
(triple inner product), or a circulant matrix evaluated in the
frequency domain.  Everything needed to train, decode, evaluate and
benchmark them lives here, on plain numpy.
"""

from .autodiff import Tape, Var
from .conllu import Sentence, Vocab, build_vocab, read_conllu, subsample, write_conllu
from .decode import ParseTree, assign_labels, chu_liu_edmonds, evaluate, tree_is_valid
from .encoder import EncoderConfig, TokenViews, encode, init_encoder_params
from .errors import DataError, NumericError, ShapeError
from .fourier import conjugate_symmetry_residual, dft, idft, is_conjugate_symmetric
from .kernels import (
    bilinear_dense,
    circulant_bilinear_fft,
    circulant_bilinear_naive,
    circulant_from_vector,
    spectrum_init,
    spectrum_of_weights,
    triple_inner_product,
    weights_of_spectrum,
)
from .model import Model, ModelConfig, load_model, save_model
from .optim import AdamState, adam_step
from .params import count_classifier, reduction_report
from .scoring import ArcClassifier, LabelClassifier, arc_loss, label_loss
from .train import train_model

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "ArcClassifier",
    "DataError",
    "EncoderConfig",
    "LabelClassifier",
    "Model",
    "ModelConfig",
    "NumericError",
    "ParseTree",
    "Sentence",
    "ShapeError",
    "Tape",
    "TokenViews",
    "Var",
    "Vocab",
    "adam_step",
    "arc_loss",
    "assign_labels",
    "bilinear_dense",
    "build_vocab",
    "chu_liu_edmonds",
    "circulant_bilinear_fft",
    "circulant_bilinear_naive",
    "circulant_from_vector",
    "conjugate_symmetry_residual",
    "count_classifier",
    "dft",
    "encode",
    "evaluate",
    "idft",
    "init_encoder_params",
    "is_conjugate_symmetric",
    "label_loss",
    "load_model",
    "read_conllu",
    "reduction_report",
    "save_model",
    "spectrum_init",
    "spectrum_of_weights",
    "subsample",
    "train_model",
    "tree_is_valid",
    "triple_inner_product",
    "weights_of_spectrum",
    "write_conllu",
]
