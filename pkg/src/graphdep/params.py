"""Closed-form parameter counts for the three classifier variants.

Classifier counts are exact functions of the arc dimension n, label
dimension m and label count L:

  dense      arc n^2 + n          label L(m^2 + 2m + 1)
  symmetric  arc n + 2n           label L(m + 2m)
  circulant  arc 2n + 2n          label L(2m + 2m)

The non-classifier ("shared") parameter total is a configuration input
rather than something recomputed from an encoder architecture; the
default matches the reference stack this package's defaults are sized
against (2,619,800 shared parameters, 3,157,637 total with the dense
classifiers at n=400, m=100, L=37).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .scoring import VARIANTS

DEFAULT_SHARED = 2_619_800


def count_classifier(variant: str, n: int, m: int, n_labels: int) -> tuple[int, int]:
    """(arc classifier, label classifier) trainable-scalar counts."""
    if n < 1 or m < 1 or n_labels < 1:
        raise ValueError("count_classifier: dimensions must be >= 1")
    if variant == "dense":
        return n * n + n, n_labels * (m * m + 2 * m + 1)
    if variant == "symmetric":
        return n + 2 * n, n_labels * (m + 2 * m)
    if variant == "circulant":
        return 2 * n + 2 * n, n_labels * (2 * m + 2 * m)
    raise ValueError(f"unknown classifier variant {variant!r}")


@dataclass
class ParamReport:
    """Per-variant parameter totals and reductions against the dense baseline."""

    n: int
    m: int
    n_labels: int
    shared: int
    arc: dict[str, int] = field(default_factory=dict)
    label: dict[str, int] = field(default_factory=dict)
    total: dict[str, int] = field(default_factory=dict)
    delta_pct: dict[str, float] = field(default_factory=dict)
    percentages: dict[str, dict[str, float]] = field(default_factory=dict)


def reduction_report(shared: int = DEFAULT_SHARED, n: int = 400, m: int = 100,
                     n_labels: int = 37) -> ParamReport:
    """Totals per variant (shared + classifiers) and deltas vs the dense baseline."""
    if shared < 0:
        raise ValueError("reduction_report: shared total must be >= 0")
    report = ParamReport(n=n, m=m, n_labels=n_labels, shared=shared)
    for variant in VARIANTS:
        arc, label = count_classifier(variant, n, m, n_labels)
        total = shared + arc + label
        report.arc[variant] = arc
        report.label[variant] = label
        report.total[variant] = total
        report.percentages[variant] = {
            "arc": 100.0 * arc / total,
            "label": 100.0 * label / total,
            "shared": 100.0 * shared / total,
        }
    baseline = report.total["dense"]
    for variant in VARIANTS:
        delta = 100.0 * (report.total[variant] - baseline) / baseline
        report.delta_pct[variant] = round(delta, 2)
    return report


def format_report(report: ParamReport) -> str:
    """Aligned text table for the `params` command."""
    rows = [
        ("", *VARIANTS),
        ("arc classifier", *(f"{report.arc[v]:,}" for v in VARIANTS)),
        ("label classifier", *(f"{report.label[v]:,}" for v in VARIANTS)),
        ("shared parts", *(f"{report.shared:,}" for _ in VARIANTS)),
        ("total", *(f"{report.total[v]:,}" for v in VARIANTS)),
        ("delta vs dense", *(f"{report.delta_pct[v]:+.2f}%" for v in VARIANTS)),
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [
        "  ".join(cell.rjust(w) if i else cell.ljust(w)
                  for i, (cell, w) in enumerate(zip(row, widths)))
        for row in rows
    ]
    header = (f"classifier parameters for n={report.n}, m={report.m}, "
              f"L={report.n_labels}, shared={report.shared:,}")
    return "\n".join([header, *lines])


def report_csv(report: ParamReport) -> str:
    """CSV rendering with one row per variant."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["variant", "arc_params", "label_params", "shared_params",
                     "total_params", "delta_vs_dense_pct"])
    for v in VARIANTS:
        writer.writerow([v, report.arc[v], report.label[v], report.shared,
                         report.total[v], f"{report.delta_pct[v]:.2f}"])
    return buf.getvalue()
