"""CSV loading against the published schemas, and the three figure kinds."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KNOWN_SCHEMAS = ("qnls-diagnostics v1", "qnls-sweep v1", "qnls-ensemble v1")

# human-readable axis labels for the functionals in the diagnostics schema
COLUMN_LABELS = {
    "t": "time t",
    "mass": "mass  $\\int |u|^2\\,dx$",
    "energy": "energy  $\\frac{1}{2}\\int|u_x|^2 + \\frac{\\mu}{6}\\int|u|^6$",
    "momentum": "momentum  $\\mathrm{Im}\\int \\bar u\\, u_x\\,dx$",
    "h1": "$\\dot H^1$ seminorm",
    "morawetz": "interaction Morawetz action $M(t)$",
    "morawetz_I": "truncated Morawetz action $M_I(t)$",
    "err1": "truncation error term 1",
    "err2": "truncation error term 2",
    "err3": "truncation error term 3",
    "l6_accum": "running $\\int\\int |u|^6$",
    "l8_inst": "$\\int |u|^8\\,dx$",
    "x_center": "spatial center $x(t)$",
    "x_radius": "spatial radius",
    "xi_center": "frequency center $\\xi(t)$",
    "xi_radius": "frequency radius",
    "N_t": "concentration scale $N(t)$",
    "scale": "frequency scale $N$",
    "constant": "estimated constant",
    "seed": "seed",
}

KINDS = ("timeseries", "loglog-fit", "phase-track")


class SchemaError(ValueError):
    """CSV does not match a published schema or lacks requested columns."""


class PlotSpec:
    """What to render: input CSV, figure kind, column selection, output path."""

    def __init__(self, csv_path, kind, columns=None, out_path="figure.png"):
        if kind not in KINDS:
            raise SchemaError(f"unknown figure kind {kind!r}; choose from {KINDS}")
        self.csv_path = csv_path
        self.kind = kind
        self.columns = list(columns) if columns else None
        self.out_path = out_path


def load_csv(path):
    """Read a schema-versioned CSV; returns (schema, columns, rows array)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith("# "):
        raise SchemaError(f"{path}: missing schema header comment line")
    schema = lines[0][2:].strip()
    if schema not in KNOWN_SCHEMAS:
        raise SchemaError(f"{path}: unknown schema {schema!r}; known: {KNOWN_SCHEMAS}")
    if len(lines) < 2 or not lines[1].strip():
        raise SchemaError(f"{path}: missing column header row")
    columns = [c.strip() for c in lines[1].split(",")]
    body = [ln for ln in lines[2:] if ln.strip()]
    if not body:
        raise SchemaError(f"{path}: no data rows")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in body])
    if rows.shape[1] != len(columns):
        raise SchemaError(f"{path}: row width {rows.shape[1]} != {len(columns)} columns")
    return schema, columns, rows


def _select(columns, rows, wanted, path):
    missing = [c for c in wanted if c not in columns]
    if missing:
        raise SchemaError(
            f"{path}: columns {missing} not in schema; available: {columns}")
    return {c: rows[:, columns.index(c)] for c in wanted}


def _label(col):
    return COLUMN_LABELS.get(col, col)


def _style():
    plt.rcdefaults()
    plt.rcParams.update({"figure.figsize": (7.0, 4.5), "figure.dpi": 110,
                         "axes.grid": True, "grid.alpha": 0.3,
                         "svg.hashsalt": "plotviz"})


def render(spec):
    """Render the figure described by ``spec``; returns an info dict.

    The dict carries the output path and, for loglog-fit, the fitted slope
    that was annotated.  Raises SchemaError on column/schema mismatch.
    """
    schema, columns, rows = load_csv(spec.csv_path)
    _style()
    info = {"out": spec.out_path, "schema": schema, "kind": spec.kind}
    if spec.kind == "timeseries":
        wanted = spec.columns or ["mass", "energy"]
        data = _select(columns, rows, ["t"] + wanted, spec.csv_path)
        fig, ax = plt.subplots()
        for c in wanted:
            ax.plot(data["t"], data[c], label=_label(c))
        ax.set_xlabel(_label("t"))
        ax.legend(loc="best")
        ax.set_title("diagnostics time series")
    elif spec.kind == "loglog-fit":
        wanted = spec.columns or ["scale", "constant"]
        if len(wanted) != 2:
            raise SchemaError("loglog-fit needs exactly two columns (x, y)")
        data = _select(columns, rows, wanted, spec.csv_path)
        x, y = data[wanted[0]], data[wanted[1]]
        if np.any(x <= 0) or np.any(y <= 0):
            raise SchemaError("loglog-fit needs positive data in both columns")
        slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
        info["slope"] = float(slope)
        fig, ax = plt.subplots()
        ax.loglog(x, y, "o", label="measured")
        ax.loglog(x, np.exp(intercept) * x**slope, "-",
                  label=f"fit: slope = {slope:.3f}")
        ax.set_xlabel(_label(wanted[0]))
        ax.set_ylabel(_label(wanted[1]))
        ax.annotate(f"slope = {slope:.3f}", xy=(0.05, 0.08),
                    xycoords="axes fraction")
        ax.legend(loc="best")
        ax.set_title("log-log scaling fit")
    else:  # phase-track
        wanted = spec.columns or ["N_t", "xi_center"]
        data = _select(columns, rows, ["t"] + wanted, spec.csv_path)
        fig, axes = plt.subplots(len(wanted), 1, sharex=True,
                                 figsize=(7.0, 2.6 * len(wanted)))
        axes = np.atleast_1d(axes)
        for ax, c in zip(axes, wanted):
            ax.plot(data["t"], data[c])
            ax.set_ylabel(_label(c))
        axes[-1].set_xlabel(_label("t"))
        axes[0].set_title("concentration tracks")
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata={"Software": "plotviz"})
    plt.close(fig)
    return info
