"""Reverse-mode automatic differentiation over a flat tape of numpy arrays.

One `Tape` records one forward computation (one sentence, in training).
Every value is a float64 ndarray held by the tape; a `Var` is a light
handle (tape + node id).  Each primitive appends a record with its input
ids, output id and a closure mapping the output gradient to input
gradients, so `backward` is a single reverse sweep over the records.

Complex quantities live on the tape as (..., 2) float arrays of
(real, imag) pairs and are differentiated as independent reals.  The
`dft`/`idft` primitives do not differentiate through FFT internals:
their adjoints are the conjugate-transposed transforms.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import fourier
from .errors import ShapeError

Array = np.ndarray


def _as_array(x) -> Array:
    a = np.asarray(x, dtype=np.float64)
    return a


class Record:
    """One recorded primitive: inputs -> output with a local gradient rule."""

    __slots__ = ("op", "inputs", "output", "backward")

    def __init__(self, op: str, inputs: tuple[int, ...], output: int,
                 backward: Callable[[Array], Sequence[Array | None]]):
        self.op = op
        self.inputs = inputs
        self.output = output
        self.backward = backward


class Var:
    """Handle to a node on a tape."""

    __slots__ = ("tape", "nid")

    def __init__(self, tape: "Tape", nid: int):
        self.tape = tape
        self.nid = nid

    @property
    def value(self) -> Array:
        return self.tape.values[self.nid]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def __add__(self, other: "Var") -> "Var":
        return add(self, other)

    def __sub__(self, other: "Var") -> "Var":
        return sub(self, other)

    def __mul__(self, other: "Var") -> "Var":
        return mul(self, other)

    def __matmul__(self, other: "Var") -> "Var":
        return matmul(self, other)

    def __repr__(self) -> str:
        return f"Var(nid={self.nid}, shape={self.value.shape})"


class Tape:
    """Ordered record of primitive operations plus their node values."""

    def __init__(self):
        self.values: list[Array] = []
        self.records: list[Record] = []

    def node(self, value) -> Var:
        """Create a leaf node (parameter or constant input)."""
        self.values.append(_as_array(value))
        return Var(self, len(self.values) - 1)

    def record(self, op: str, inputs: Sequence[Var], value: Array,
               backward: Callable[[Array], Sequence[Array | None]]) -> Var:
        """Append a primitive's result; `backward` maps d(out) -> d(inputs)."""
        self.values.append(np.asarray(value))
        out = len(self.values) - 1
        self.records.append(Record(op, tuple(v.nid for v in inputs), out, backward))
        return Var(self, out)

    def backward(self, loss: Var) -> dict[int, Array]:
        """Gradients of a scalar loss node w.r.t. every reachable node."""
        lval = self.values[loss.nid]
        if lval.ndim != 0:
            raise ShapeError(f"backward: loss must be scalar, got shape {lval.shape}")
        grads: dict[int, Array] = {loss.nid: np.ones((), dtype=np.float64)}
        for rec in reversed(self.records):
            g = grads.get(rec.output)
            if g is None:
                continue
            for nid, gin in zip(rec.inputs, rec.backward(g)):
                if gin is None:
                    continue
                acc = grads.get(nid)
                grads[nid] = gin if acc is None else acc + gin
        return grads


def _check(cond: bool, op: str, msg: str) -> None:
    if not cond:
        raise ShapeError(f"{op}: {msg}")


# ---------------------------------------------------------------------------
# Elementwise and linear-algebra primitives
# ---------------------------------------------------------------------------

def add(a: Var, b: Var) -> Var:
    _check(a.shape == b.shape, "add", f"shapes {a.shape} vs {b.shape}")
    return a.tape.record("add", (a, b), a.value + b.value, lambda g: (g, g))


def sub(a: Var, b: Var) -> Var:
    _check(a.shape == b.shape, "sub", f"shapes {a.shape} vs {b.shape}")
    return a.tape.record("sub", (a, b), a.value - b.value, lambda g: (g, -g))


def mul(a: Var, b: Var) -> Var:
    _check(a.shape == b.shape, "mul", f"shapes {a.shape} vs {b.shape}")
    av, bv = a.value, b.value
    return a.tape.record("mul", (a, b), av * bv, lambda g: (g * bv, g * av))


def scale(a: Var, c: float) -> Var:
    return a.tape.record("scale", (a,), a.value * c, lambda g: (g * c,))


def add_const(a: Var, arr) -> Var:
    arr = np.asarray(arr, dtype=np.float64)
    _check(a.shape == arr.shape, "add_const", f"shapes {a.shape} vs {arr.shape}")
    return a.tape.record("add_const", (a,), a.value + arr, lambda g: (g,))


def mul_const(a: Var, arr) -> Var:
    arr = np.asarray(arr, dtype=np.float64)
    _check(a.shape == arr.shape, "mul_const", f"shapes {a.shape} vs {arr.shape}")
    return a.tape.record("mul_const", (a,), a.value * arr, lambda g: (g * arr,))


def matmul(a: Var, b: Var) -> Var:
    _check(a.value.ndim == 2 and b.value.ndim == 2, "matmul",
           f"expects matrices, got ndim {a.value.ndim} and {b.value.ndim}")
    _check(a.shape[1] == b.shape[0], "matmul", f"inner dims {a.shape} vs {b.shape}")
    av, bv = a.value, b.value
    return a.tape.record("matmul", (a, b), av @ bv,
                         lambda g: (g @ bv.T, av.T @ g))


def matvec(a: Var, x: Var) -> Var:
    _check(a.value.ndim == 2 and x.value.ndim == 1, "matvec",
           f"expects matrix and vector, got {a.shape} and {x.shape}")
    _check(a.shape[1] == x.shape[0], "matvec", f"dims {a.shape} vs {x.shape}")
    av, xv = a.value, x.value
    return a.tape.record("matvec", (a, x), av @ xv,
                         lambda g: (np.outer(g, xv), av.T @ g))


def dot(a: Var, b: Var) -> Var:
    _check(a.value.ndim == 1 and b.value.ndim == 1 and a.shape == b.shape,
           "dot", f"expects equal-length vectors, got {a.shape} and {b.shape}")
    av, bv = a.value, b.value
    return a.tape.record("dot", (a, b), np.dot(av, bv),
                         lambda g: (g * bv, g * av))


def transpose(a: Var) -> Var:
    _check(a.value.ndim == 2, "transpose", f"expects a matrix, got {a.shape}")
    return a.tape.record("transpose", (a,), a.value.T.copy(), lambda g: (g.T,))


def sum_all(a: Var) -> Var:
    shape = a.shape
    return a.tape.record("sum", (a,), np.sum(a.value),
                         lambda g: (np.broadcast_to(g, shape).copy(),))


def relu(a: Var) -> Var:
    mask = a.value > 0
    return a.tape.record("relu", (a,), np.where(mask, a.value, 0.0),
                         lambda g: (g * mask,))


def sigmoid(a: Var) -> Var:
    s = 1.0 / (1.0 + np.exp(-a.value))
    return a.tape.record("sigmoid", (a,), s, lambda g: (g * s * (1.0 - s),))


def tanh(a: Var) -> Var:
    t = np.tanh(a.value)
    return a.tape.record("tanh", (a,), t, lambda g: (g * (1.0 - t * t),))


def concat(a: Var, b: Var) -> Var:
    _check(a.value.ndim == 1 and b.value.ndim == 1, "concat",
           f"expects vectors, got {a.shape} and {b.shape}")
    na = a.shape[0]
    return a.tape.record("concat", (a, b), np.concatenate([a.value, b.value]),
                         lambda g: (g[:na], g[na:]))


def slice1d(a: Var, lo: int, hi: int) -> Var:
    _check(a.value.ndim == 1, "slice1d", f"expects a vector, got {a.shape}")
    n = a.shape[0]

    def back(g):
        full = np.zeros(n)
        full[lo:hi] = g
        return (full,)

    return a.tape.record("slice1d", (a,), a.value[lo:hi].copy(), back)


def row(m: Var, i: int) -> Var:
    _check(m.value.ndim == 2, "row", f"expects a matrix, got {m.shape}")
    shape = m.shape

    def back(g):
        full = np.zeros(shape)
        full[i] = g
        return (full,)

    return m.tape.record("row", (m,), m.value[i].copy(), back)


def take_rows(m: Var, idx) -> Var:
    """Gather rows by index; used for embedding lookup and gold-head views."""
    _check(m.value.ndim == 2, "take_rows", f"expects a matrix, got {m.shape}")
    idx = np.asarray(idx, dtype=np.intp)
    shape = m.shape

    def back(g):
        full = np.zeros(shape)
        np.add.at(full, idx, g)
        return (full,)

    return m.tape.record("take_rows", (m,), m.value[idx].copy(), back)


def hstack(a: Var, b: Var) -> Var:
    _check(a.value.ndim == 2 and b.value.ndim == 2 and a.shape[0] == b.shape[0],
           "hstack", f"row counts {a.shape} vs {b.shape}")
    ca = a.shape[1]
    return a.tape.record("hstack", (a, b), np.hstack([a.value, b.value]),
                         lambda g: (g[:, :ca], g[:, ca:]))


def stack_rows(vs: Sequence[Var]) -> Var:
    _check(len(vs) > 0, "stack_rows", "needs at least one vector")
    value = np.stack([v.value for v in vs])
    return vs[0].tape.record("stack_rows", tuple(vs), value,
                             lambda g: tuple(g[i] for i in range(len(vs))))


def stack_cols(vs: Sequence[Var]) -> Var:
    _check(len(vs) > 0, "stack_cols", "needs at least one vector")
    value = np.stack([v.value for v in vs], axis=1)
    return vs[0].tape.record("stack_cols", tuple(vs), value,
                             lambda g: tuple(g[:, i] for i in range(len(vs))))


def add_rowvec(m: Var, v: Var) -> Var:
    _check(m.value.ndim == 2 and v.value.ndim == 1 and m.shape[1] == v.shape[0],
           "add_rowvec", f"shapes {m.shape} vs {v.shape}")
    return m.tape.record("add_rowvec", (m, v), m.value + v.value[None, :],
                         lambda g: (g, g.sum(axis=0)))


def add_colvec(m: Var, v: Var) -> Var:
    _check(m.value.ndim == 2 and v.value.ndim == 1 and m.shape[0] == v.shape[0],
           "add_colvec", f"shapes {m.shape} vs {v.shape}")
    return m.tape.record("add_colvec", (m, v), m.value + v.value[:, None],
                         lambda g: (g, g.sum(axis=1)))


def mul_rowvec(m: Var, v: Var) -> Var:
    _check(m.value.ndim == 2 and v.value.ndim == 1 and m.shape[1] == v.shape[0],
           "mul_rowvec", f"shapes {m.shape} vs {v.shape}")
    mv, vv = m.value, v.value
    return m.tape.record("mul_rowvec", (m, v), mv * vv[None, :],
                         lambda g: (g * vv[None, :], (g * mv).sum(axis=0)))


def add_scalar(a: Var, s: Var) -> Var:
    _check(s.value.ndim == 0, "add_scalar", f"expects a scalar, got {s.shape}")
    return a.tape.record("add_scalar", (a, s), a.value + s.value,
                         lambda g: (g, np.sum(g)))


def rowwise_dot(a: Var, b: Var) -> Var:
    _check(a.value.ndim == 2 and a.shape == b.shape, "rowwise_dot",
           f"shapes {a.shape} vs {b.shape}")
    av, bv = a.value, b.value
    return a.tape.record("rowwise_dot", (a, b), np.sum(av * bv, axis=1),
                         lambda g: (g[:, None] * bv, g[:, None] * av))


# ---------------------------------------------------------------------------
# Softmax cross-entropy losses
# ---------------------------------------------------------------------------

def _log_softmax(scores: Array, axis: int) -> Array:
    m = np.max(scores, axis=axis, keepdims=True)
    z = np.exp(scores - m)
    return scores - m - np.log(np.sum(z, axis=axis, keepdims=True))


def softmax_ce_columns(s: Var, gold: np.ndarray) -> Var:
    """Mean cross-entropy over columns 1..T, softmax over rows of each column.

    `s` is a (T+1, T+1) grid with masked entries already set to -inf;
    gold[j-1] is the gold row index for column j.
    """
    grid = s.value
    _check(grid.ndim == 2 and grid.shape[0] == grid.shape[1], "softmax_ce_columns",
           f"expects a square grid, got {grid.shape}")
    t = grid.shape[0] - 1
    _check(len(gold) == t, "softmax_ce_columns", f"{len(gold)} targets for {t} columns")
    gold = np.asarray(gold, dtype=np.intp)
    cols = grid[:, 1:]
    logp = _log_softmax(cols, axis=0)
    loss = -np.mean(logp[gold, np.arange(t)])

    def back(g):
        p = np.exp(logp)
        p[gold, np.arange(t)] -= 1.0
        full = np.zeros_like(grid)
        full[:, 1:] = p * (g / t)
        return (full,)

    return s.tape.record("softmax_ce_columns", (s,), np.float64(loss), back)


def softmax_ce_rows(s: Var, gold: np.ndarray) -> Var:
    """Mean cross-entropy over rows, softmax over each row's entries."""
    scores = s.value
    _check(scores.ndim == 2, "softmax_ce_rows", f"expects a matrix, got {scores.shape}")
    t = scores.shape[0]
    _check(len(gold) == t, "softmax_ce_rows", f"{len(gold)} targets for {t} rows")
    gold = np.asarray(gold, dtype=np.intp)
    logp = _log_softmax(scores, axis=1)
    loss = -np.mean(logp[np.arange(t), gold])

    def back(g):
        p = np.exp(logp)
        p[np.arange(t), gold] -= 1.0
        return (p * (g / t),)

    return s.tape.record("softmax_ce_rows", (s,), np.float64(loss), back)


# ---------------------------------------------------------------------------
# Complex pairs and Fourier primitives
# ---------------------------------------------------------------------------

def pairs_to_complex(pairs: Array) -> Array:
    """View an (..., 2) float array of (real, imag) pairs as complex."""
    pairs = np.ascontiguousarray(pairs, dtype=np.float64)
    return pairs.view(np.complex128)[..., 0]

def complex_to_pairs(z: Array) -> Array:
    """Expand a complex array into (..., 2) float (real, imag) pairs."""
    return np.stack([z.real, z.imag], axis=-1)


def dft(a: Var) -> Var:
    """DFT of a complex vector held as (n, 2) real pairs.

    The adjoint of the forward transform is its conjugate transpose,
    i.e. n times the inverse transform.
    """
    _check(a.value.ndim == 2 and a.shape[1] == 2, "dft",
           f"expects (n, 2) real pairs, got {a.shape}")
    n = a.shape[0]
    out = complex_to_pairs(fourier.dft(pairs_to_complex(a.value)))

    def back(g):
        return (complex_to_pairs(fourier.idft(pairs_to_complex(g)) * n),)

    return a.tape.record("dft", (a,), out, back)


def idft(a: Var) -> Var:
    """Inverse DFT of a complex vector held as (n, 2) real pairs."""
    _check(a.value.ndim == 2 and a.shape[1] == 2, "idft",
           f"expects (n, 2) real pairs, got {a.shape}")
    n = a.shape[0]
    out = complex_to_pairs(fourier.idft(pairs_to_complex(a.value)))

    def back(g):
        return (complex_to_pairs(fourier.dft(pairs_to_complex(g)) / n),)

    return a.tape.record("idft", (a,), out, back)


class ParamVars:
    """Lazy leaf nodes for a named parameter set on one tape.

    Parameters become tape nodes only when touched, and `grads` maps a
    backward result back onto parameter names.
    """

    def __init__(self, tape: Tape, params: dict[str, Array]):
        self.tape = tape
        self.params = params
        self._vars: dict[str, Var] = {}

    def __getitem__(self, name: str) -> Var:
        v = self._vars.get(name)
        if v is None:
            v = self._vars[name] = self.tape.node(self.params[name])
        return v

    def grads(self, grad_map: dict[int, Array]) -> dict[str, Array]:
        out = {}
        for name, v in self._vars.items():
            g = grad_map.get(v.nid)
            if g is not None:
                out[name] = g
        return out
