"""Scenario configuration: line-oriented ``key = value`` files with sections.

A minimal file needs only the scenario name and the nonlinearity sign::

    [scenario]
    name = demo
    mu = +1

Every other key has a documented default (echoed back on parse).  Unknown
sections or keys, duplicates, type mismatches, and constraint violations are
collected with line numbers and reported together.  ``echo_config`` renders
a config back to text; parse(echo(parse(text))) is the identity.
"""

import numpy as np

from .concentration import ConcentrationParams
from .integrator import IntegratorConfig
from .morawetz import IOperator, MorawetzKernel
from .spectral import Grid

_AUTO = object()


def _parse_bool(s):
    if s.lower() in ("on", "true", "yes", "1"):
        return True
    if s.lower() in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {s!r}")


def _fmt(value):
    if isinstance(value, bool):
        return "on" if value else "off"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# section -> key -> (converter, default); _AUTO defaults are derived after
# parsing (kernel width from dx, I-cutoff from the Nyquist frequency)
SCHEMA = {
    "scenario": {
        "name": (str, None),
        "mu": (int, None),
        "seed": (int, 0),
    },
    "grid": {
        "n": (int, 1024),
        "length": (float, 64.0 * np.pi),
    },
    "integrator": {
        "dt": (float, 1e-3),
        "t_end": (float, 10.0),
        "save_every": (int, 10),
        "dealias": (_parse_bool, True),
        "blowup_guard": (float, 10.0),
        "boundary_tol": (float, 1e-6),
    },
    "initial": {
        "preset": (str, "gaussian"),
        "amplitude": (float, 0.1),
        "sigma": (float, 1.0),
        "center": (float, 0.0),
        "velocity": (float, 0.0),
        "band_lo": (float, 1.0),
        "band_hi": (float, 8.0),
    },
    "concentration": {
        "eta": (float, 0.1),
        "eps0": (float, 0.5),
        "c_eta": (float, 1.0),
    },
    "morawetz": {
        "kernel_width": (float, _AUTO),
        "variant": (str, "odd"),
        "cutoff": (float, _AUTO),
    },
    "output": {
        "checkpoint": (_parse_bool, False),
    },
}

PRESETS = ("gaussian", "soliton", "random", "zero")


class ConfigError(ValueError):
    """Carries the full list of parse/validation problems."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ScenarioConfig:
    """Validated scenario: nested dict of sections plus typed accessors."""

    def __init__(self, values):
        self.values = values

    def __getitem__(self, section):
        return self.values[section]

    @property
    def name(self):
        return self.values["scenario"]["name"]

    @property
    def mu(self):
        return self.values["scenario"]["mu"]

    @property
    def seed(self):
        return self.values["scenario"]["seed"]

    def build_grid(self):
        return Grid(self.values["grid"]["n"], self.values["grid"]["length"])

    def integrator_config(self):
        g = self.values["integrator"]
        return IntegratorConfig(self.mu, g["dt"], g["t_end"], g["save_every"],
                                g["dealias"], g["blowup_guard"], g["boundary_tol"])

    def concentration_params(self):
        c = self.values["concentration"]
        return ConcentrationParams(c["eta"], c["c_eta"], c["eps0"])

    def kernel(self):
        m = self.values["morawetz"]
        return MorawetzKernel(m["kernel_width"], m["variant"])

    def i_operator(self):
        return IOperator(self.values["morawetz"]["cutoff"])

    def echo(self):
        return echo_config(self)


def _raw_parse(text):
    """Text -> (section, key) -> (value string, line number); collects errors."""
    entries = {}
    errors = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in SCHEMA:
                errors.append(f"line {lineno}: unknown section [{section}]")
                section = None
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        if section is None:
            errors.append(f"line {lineno}: key outside any known section")
            continue
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.split("#", 1)[0].strip()
        if key not in SCHEMA[section]:
            errors.append(f"line {lineno}: unknown key {key!r} in section [{section}]")
            continue
        if (section, key) in entries:
            errors.append(f"line {lineno}: duplicate key {key!r} in section [{section}]")
            continue
        entries[(section, key)] = (value, lineno)
    return entries, errors


def _validate(values, errors, lines):
    def where(section, key):
        lineno = lines.get((section, key))
        return f"line {lineno}: " if lineno else ""

    def check(section, key, ok, message):
        if not ok:
            errors.append(where(section, key) + message)

    s = values["scenario"]
    check("scenario", "name", bool(s["name"]), "scenario name is required")
    check("scenario", "mu", s["mu"] in (1, -1), "mu must be +1 or -1 (defocusing/focusing)")
    g = values["grid"]
    n = g["n"]
    check("grid", "n", n >= 8 and (n & (n - 1)) == 0, f"grid n must be a power of two >= 8, got {n}")
    check("grid", "length", g["length"] > 0, "grid length must be positive")
    it = values["integrator"]
    check("integrator", "dt", it["dt"] > 0, "dt must be positive")
    check("integrator", "t_end", it["t_end"] > 0, "t_end must be positive")
    check("integrator", "save_every", it["save_every"] >= 1, "save_every must be >= 1")
    check("integrator", "blowup_guard", it["blowup_guard"] > 1, "blowup_guard must exceed 1")
    check("integrator", "boundary_tol", it["boundary_tol"] > 0, "boundary_tol must be positive")
    ic = values["initial"]
    check("initial", "preset", ic["preset"] in PRESETS,
          f"unknown preset {ic['preset']!r}; choose from {', '.join(PRESETS)}")
    check("initial", "sigma", ic["sigma"] > 0, "sigma must be positive")
    check("initial", "band_lo", 0 < ic["band_lo"], "band_lo must be positive")
    check("initial", "band_hi", ic["band_lo"] < ic["band_hi"], "band_hi must exceed band_lo")
    c = values["concentration"]
    check("concentration", "eta", 0 < c["eta"] < 0.5, "eta must lie in (0, 1/2)")
    check("concentration", "eps0", c["eps0"] > 0, "eps0 must be positive")
    check("concentration", "c_eta", c["c_eta"] > 0, "c_eta must be positive")
    m = values["morawetz"]
    check("morawetz", "kernel_width", m["kernel_width"] >= 0,
          "kernel_width must be >= 0 (0 selects the sign-kernel limit)")
    check("morawetz", "variant", m["variant"] in ("odd", "two_sided"),
          "variant must be odd or two_sided")
    check("morawetz", "cutoff", m["cutoff"] > 0, "cutoff must be positive")
    if values["grid"]["length"] > 0 and values["initial"]["velocity"] != 0.0:
        dxi = 2.0 * np.pi / values["grid"]["length"]
        k = values["initial"]["velocity"] / dxi
        check("initial", "velocity", abs(k - round(k)) < 1e-9,
              f"velocity must be a lattice frequency (multiple of {dxi!r})")


def parse_config(text):
    """Parse and validate; returns ScenarioConfig or raises ConfigError."""
    entries, errors = _raw_parse(text)
    values = {}
    lines = {}
    for section, keys in SCHEMA.items():
        values[section] = {}
        for key, (conv, default) in keys.items():
            if (section, key) in entries:
                raw, lineno = entries[(section, key)]
                lines[(section, key)] = lineno
                try:
                    values[section][key] = conv(raw)
                except (ValueError, TypeError):
                    errors.append(
                        f"line {lineno}: cannot parse {key} = {raw!r} as {conv.__name__}")
                    values[section][key] = default if default is not _AUTO else None
            else:
                values[section][key] = default
    # derived defaults
    n, length = values["grid"]["n"], values["grid"]["length"]
    if values["morawetz"]["kernel_width"] is _AUTO:
        values["morawetz"]["kernel_width"] = 4.0 * length / n if n and length > 0 else 0.1
    if values["morawetz"]["cutoff"] is _AUTO:
        values["morawetz"]["cutoff"] = (np.pi * n / length) / 128.0 if n and length > 0 else 1.0
    if values["scenario"]["name"] is None:
        errors.append("missing required key: [scenario] name")
        values["scenario"]["name"] = ""
    if values["scenario"]["mu"] is None:
        errors.append("missing required key: [scenario] mu")
        values["scenario"]["mu"] = 1
    if not errors:
        _validate(values, errors, lines)
    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(values)


def echo_config(cfg):
    """Render a config to text; parsing the echo reproduces the config."""
    out = []
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for key in keys:
            out.append(f"{key} = {_fmt(cfg.values[section][key])}")
        out.append("")
    return "\n".join(out)
