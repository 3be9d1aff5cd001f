"""Render qnls diagnostics CSV files into labeled figures.

Reads only the public CSV schemas written by the qnls runner (version
declared in the leading `# <schema>` comment line); no coupling to the
solver internals.  Three figure kinds: `timeseries` (columns against t),
`loglog-fit` (log-log scatter with an annotated least-squares slope), and
`phase-track` (concentration tracks against time).  Rendering never mutates
its inputs and is deterministic for a fixed style version.
"""

from .core import PlotSpec, SchemaError, load_csv, render

__version__ = "0.1.0"
__all__ = ["PlotSpec", "SchemaError", "load_csv", "render"]
