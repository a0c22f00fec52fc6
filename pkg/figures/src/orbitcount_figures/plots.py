"""Four figure kinds over the orbitcount CSV contract.

``logcount`` and ``ratio`` read the unitriangular results CSV
(columns n, q, seed, logq_count, stderr, elapsed); ``multiset`` and
``rephist`` read the multiset results CSV (columns n, k, log_true,
log_est, rep).  A file whose header or rows do not match the contract
raises :class:`SchemaError`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_UNITRIANGULAR_COLUMNS = ["n", "q", "seed", "logq_count", "stderr", "elapsed"]
_MULTISET_COLUMNS = ["n", "k", "log_true", "log_est", "rep"]

KINDS = {
    "logcount": _UNITRIANGULAR_COLUMNS,
    "ratio": _UNITRIANGULAR_COLUMNS,
    "multiset": _MULTISET_COLUMNS,
    "rephist": _MULTISET_COLUMNS,
}


class SchemaError(ValueError):
    """The CSV does not match the column contract for the figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_in: str
    image_out: str


def read_rows(csv_in: str, kind: str) -> list[dict]:
    if kind not in KINDS:
        raise SchemaError(f"unknown figure kind {kind!r}; "
                          f"expected one of {sorted(KINDS)}")
    columns = KINDS[kind]
    with open(csv_in, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{csv_in}: empty file, expected header "
                              f"{columns}") from None
        if header != columns:
            raise SchemaError(f"{csv_in}: header {header} does not match "
                              f"the contract {columns}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if len(raw) != len(columns):
                raise SchemaError(f"{csv_in}:{lineno}: expected "
                                  f"{len(columns)} fields, got {len(raw)}")
            try:
                rows.append({c: float(v) for c, v in zip(columns, raw)})
            except ValueError:
                raise SchemaError(
                    f"{csv_in}:{lineno}: non-numeric field in {raw}") from None
    if not rows:
        raise SchemaError(f"{csv_in}: no data rows")
    return rows


def _fig_logcount(rows):
    fig, ax = plt.subplots(figsize=(6, 4))
    for q in sorted({int(r["q"]) for r in rows}):
        pts = sorted((r for r in rows if int(r["q"]) == q),
                     key=lambda r: r["n"])
        ax.errorbar([r["n"] for r in pts], [r["logq_count"] for r in pts],
                    yerr=[r["stderr"] for r in pts], marker="o",
                    capsize=3, label=f"q = {q}")
    ax.set_xlabel("n")
    ax.set_ylabel("estimated log_q k(U_n(F_q))")
    ax.legend()
    fig.tight_layout()
    return fig


def _fig_ratio(rows):
    fig, ax = plt.subplots(figsize=(6, 4))
    for q in sorted({int(r["q"]) for r in rows}):
        pts = sorted((r for r in rows if int(r["q"]) == q),
                     key=lambda r: r["n"])
        ax.plot([r["n"] for r in pts],
                [r["logq_count"] / r["n"] ** 2 for r in pts],
                marker="o", label=f"q = {q}")
    lo = min(r["n"] for r in rows)
    hi = max(r["n"] for r in rows)
    ax.axhline(1 / 12, color="black", linestyle="--", label="1/12")
    ns = [lo + i * (hi - lo) / 200 for i in range(201)] if hi > lo else [lo]
    ax.plot(ns, [(n + 6) / (12 * n) for n in ns], color="gray",
            linestyle=":", label="(n+6)/(12n)")
    ax.set_xlabel("n")
    ax.set_ylabel("log_q k / n^2")
    ax.legend()
    fig.tight_layout()
    return fig


def _fig_multiset(rows):
    fig, ax = plt.subplots(figsize=(6, 4))
    by_k: dict[int, list[dict]] = {}
    for r in rows:
        by_k.setdefault(int(r["k"]), []).append(r)
    ks = sorted(by_k)
    truth = [by_k[k][0]["log_true"] for k in ks]
    est = [sum(r["log_est"] for r in by_k[k]) / len(by_k[k]) for k in ks]
    ax.plot(ks, truth, marker="o", label="log true count")
    ax.plot(ks, est, marker="x", linestyle="--", label="log estimate")
    ax.set_xlabel("number of colors k")
    ax.set_ylabel("log orbit count")
    ax.legend()
    fig.tight_layout()
    return fig


def _fig_rephist(rows):
    fig, ax = plt.subplots(figsize=(6, 4))
    estimates = [r["log_est"] for r in rows]
    bins = max(5, min(30, int(math.sqrt(len(estimates))) * 2))
    ax.hist(estimates, bins=bins, edgecolor="black")
    ax.axvline(rows[0]["log_true"], color="red", linestyle="--",
               label="log true count")
    ax.set_xlabel("log estimate")
    ax.set_ylabel("replications")
    ax.legend()
    fig.tight_layout()
    return fig


_BUILDERS = {
    "logcount": _fig_logcount,
    "ratio": _fig_ratio,
    "multiset": _fig_multiset,
    "rephist": _fig_rephist,
}


def build_figure(kind: str, rows: list[dict]):
    """Figure object for the given kind; exposed separately for tests."""
    return _BUILDERS[kind](rows)


def plot(kind: str, csv_in: str, image_out: str) -> None:
    """Render one figure kind from a CSV file to a static image."""
    rows = read_rows(csv_in, kind)
    fig = build_figure(kind, rows)
    try:
        fig.savefig(image_out, dpi=150)
    finally:
        plt.close(fig)


def plot_spec(spec: FigureSpec) -> None:
    plot(spec.kind, spec.csv_in, spec.image_out)
