#!/usr/bin/env python3
"""Render figures from clockdyn CSV output.

Usage:
    render.py --csv results.csv --kind survival|rabi|lineshape|mc --out figure.png

Reads only the documented CSV schemas and never recomputes physics: every
plotted value comes straight from the file.  Reference curves (the Lorentzian,
the perfect-clock populations) are extra columns emitted by the CLI.

Exits 0 on success, 2 on an unknown kind or missing columns.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class SchemaError(ValueError):
    """The CSV does not carry the columns the requested kind needs."""


@dataclass
class RenderResult:
    kind: str
    rows_used: int
    curves: list

    @property
    def points_per_curve(self) -> int:
        return self.rows_used


def load_csv(path: str):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        columns = reader.fieldnames or []
    if not rows:
        raise SchemaError(f"{path} holds no data rows")
    return columns, rows


def _select(rows, kind_value):
    """Rows matching the given kind when a kind column exists, else all."""
    if rows and "kind" in rows[0]:
        return [r for r in rows if r["kind"] == kind_value]
    return rows


def _column(rows, name):
    try:
        return [float(r[name]) for r in rows]
    except (KeyError, TypeError):
        raise SchemaError(f"missing column {name!r}") from None
    except ValueError as err:
        raise SchemaError(f"column {name!r} is not numeric: {err}") from None


def _value_columns(columns, prefix):
    return [c for c in columns if c.startswith(prefix)]


def _render_survival(columns, rows, ax):
    rows = _select(rows, "survival")
    if not rows:
        raise SchemaError("no survival rows")
    t = _column(rows, "t")
    curves = _value_columns(columns, "p")
    if not curves:
        raise SchemaError("no survival-probability columns (p_*)")
    for name in curves:
        ax.plot(t, _column(rows, name), label=name)
    ax.set_xlabel("clock time t")
    ax.set_ylabel("survival probability")
    ax.legend(fontsize=8)
    return RenderResult("survival", len(rows), curves)


def _render_rabi(columns, rows, ax):
    n = _column(rows, "n")
    p2 = _column(rows, "p2")
    ax.bar(range(len(n)), p2, tick_label=[str(int(v)) for v in n], label="p2")
    if "p2_perfect" in columns:
        ax.plot(range(len(n)), _column(rows, "p2_perfect"), "k.--", label="p2_perfect")
    ax.set_xlabel("number of measurements n")
    ax.set_ylabel("level-2 population")
    ax.legend(fontsize=8)
    return RenderResult("rabi", len(rows), ["p2"] + (["p2_perfect"] if "p2_perfect" in columns else []))


def _render_lineshape(columns, rows, ax):
    rows = _select(rows, "lineshape")
    if not rows:
        raise SchemaError("no lineshape rows")
    omega = _column(rows, "omega")
    curves = [c for c in _value_columns(columns, "p") if any(r.get(c) for r in rows)]
    if not curves:
        raise SchemaError("no line-shape columns (p_*)")
    for name in curves:
        ax.plot(omega, _column(rows, name), label=name)
    if "lorentzian" in columns:
        ax.plot(omega, _column(rows, "lorentzian"), "k--", label="lorentzian")
        curves = curves + ["lorentzian"]
    ax.set_xlabel("frequency")
    ax.set_ylabel("decay-product probability")
    ax.legend(fontsize=8)
    return RenderResult("lineshape", len(rows), curves)


def _render_mc(columns, rows, ax):
    k = _column(rows, "k")
    mc = _column(rows, "mc_re")
    stderr = _column(rows, "stderr")
    exact = _column(rows, "exact_re")
    band = [3 * e for e in stderr]
    ax.plot(k, exact, label="analytic")
    ax.errorbar(k, mc, yerr=band, fmt="o", capsize=3, label="MC (3 stderr)")
    lower = [m - b for m, b in zip(mc, band)]
    upper = [m + b for m, b in zip(mc, band)]
    ax.fill_between(k, lower, upper, alpha=0.2)
    ax.set_xlabel("frequency k")
    ax.set_ylabel("Re Pi(t, k)")
    ax.legend(fontsize=8)
    return RenderResult("mc", len(rows), ["analytic", "mc_re"])


_RENDERERS = {
    "survival": _render_survival,
    "rabi": _render_rabi,
    "lineshape": _render_lineshape,
    "mc": _render_mc,
}


def render(csv_path: str, kind: str, out_image: str) -> RenderResult:
    if kind not in _RENDERERS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {sorted(_RENDERERS)}")
    columns, rows = load_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=120)
    try:
        result = _RENDERERS[kind](columns, rows, ax)
        fig.tight_layout()
        fig.savefig(out_image)
    finally:
        plt.close(fig)
    return result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True)
    parser.add_argument("--kind", required=True, choices=sorted(_RENDERERS))
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        result = render(args.csv, args.kind, args.out)
    except (SchemaError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}: {result.points_per_curve} points per curve, "
          f"{len(result.curves)} curve(s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
