"""Scenario execution: solve, stream diagnostics to CSV, write manifests.

One CSV row per saved frame, schema fixed and versioned in a header comment
line; floats carry 17 significant digits so identical config+seed gives
bit-identical files.  Full wavefunctions go to an optional binary sidecar
(little-endian, per frame: uint64 n, float64 L, float64 t, then n
interleaved re/im float64 pairs), never into the CSV.

Suites run member scenarios in separate processes (parallelism only across
runs, never within one) and aggregate pass/fail reports.
"""

import json
import os
import struct
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import concentration, functionals, integrator, morawetz
from .config import echo_config, parse_config
from .presets import preset_from_config

CSV_SCHEMA = "qnls-diagnostics v1"
SWEEP_SCHEMA = "qnls-sweep v1"
CSV_COLUMNS = [
    "t", "mass", "energy", "momentum", "h1", "morawetz", "morawetz_I",
    "err1", "err2", "err3", "l6_accum", "l8_inst",
    "x_center", "x_radius", "xi_center", "xi_radius", "N_t",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_FAILURE = 4


class RunnerError(RuntimeError):
    """I/O or orchestration failure, annotated with path context."""


class DiagnosticRecord:
    """One timestamped row of every scalar functional."""

    __slots__ = CSV_COLUMNS

    def __init__(self, **kw):
        for c in CSV_COLUMNS:
            setattr(self, c, float(kw[c]))

    def row(self):
        return [getattr(self, c) for c in CSV_COLUMNS]


def compute_diagnostics(traj, cparams, kernel, iop):
    """DiagnosticRecords plus tracker samples for every saved frame."""
    mu = traj.cfg.mu if traj.cfg is not None else 1
    times, l6_cum = functionals.l6_accumulation(traj)
    records = []
    samples = []
    for i in range(len(times)):
        f = traj.field(i)
        m = functionals.mass(f)
        if m > 0.0:
            s = concentration.track(f, cparams)
        else:
            s = concentration.TrackerSample(f.time, 0.0, 0.0, 0.0, 0.0, 0.0)
        samples.append(s)
        e1, e2, e3 = morawetz.commutator_error_integrands(f, iop, kernel, s.xi_center, mu)
        records.append(DiagnosticRecord(
            t=f.time,
            mass=m,
            energy=functionals.energy(f, mu),
            momentum=functionals.momentum(f),
            h1=functionals.h_s_norm(f, 1),
            morawetz=morawetz.interaction_action(f, kernel),
            morawetz_I=morawetz.truncated_action(f, iop, kernel, s.xi_center),
            err1=e1, err2=e2, err3=e3,
            l6_accum=l6_cum[i],
            l8_inst=float(np.sum(np.abs(traj.frame(i)) ** 8) * traj.grid.dx),
            x_center=s.x_center, x_radius=s.x_radius,
            xi_center=s.xi_center, xi_radius=s.xi_radius, N_t=s.n_t,
        ))
    return records, samples


def write_csv(path, records, columns=CSV_COLUMNS, schema=CSV_SCHEMA):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# {schema}\n")
            fh.write(",".join(columns) + "\n")
            for rec in records:
                row = rec.row() if hasattr(rec, "row") else rec
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    except OSError as exc:
        raise RunnerError(f"cannot write CSV {path}: {exc}") from exc


def write_checkpoint(path, traj):
    """Binary sidecar with every saved frame (documented layout above)."""
    try:
        with open(path, "wb") as fh:
            for i in range(len(traj.times)):
                fh.write(struct.pack("<Qdd", traj.grid.n, traj.grid.length,
                                     float(traj.times[i])))
                inter = np.empty(2 * traj.grid.n, dtype="<f8")
                inter[0::2] = traj.frame(i).real
                inter[1::2] = traj.frame(i).imag
                fh.write(inter.tobytes())
    except OSError as exc:
        raise RunnerError(f"cannot write checkpoint {path}: {exc}") from exc


def read_checkpoint(path):
    """Yields (n, length, t, samples) frames from a sidecar file."""
    frames = []
    try:
        with open(path, "rb") as fh:
            header = fh.read(24)
            while header:
                n, length, t = struct.unpack("<Qdd", header)
                raw = np.frombuffer(fh.read(16 * n), dtype="<f8")
                frames.append((n, length, t, raw[0::2] + 1j * raw[1::2]))
                header = fh.read(24)
    except OSError as exc:
        raise RunnerError(f"cannot read checkpoint {path}: {exc}") from exc
    return frames


def run(cfg, out_dir="."):
    """Execute one scenario; returns (status, csv_path, manifest_path).

    Writes <name>.csv, <name>.manifest.json, and optionally
    <name>.frames.bin under out_dir.
    """
    os.makedirs(out_dir, exist_ok=True)
    grid = cfg.build_grid()
    u0 = preset_from_config(cfg, grid)
    traj = integrator.solve(u0, cfg.integrator_config())
    cparams = cfg.concentration_params()
    kernel = cfg.kernel()
    iop = cfg.i_operator()
    records, samples = compute_diagnostics(traj, cparams, kernel, iop)

    if functionals.mass(traj.field(0)) > 0.0:
        partition = concentration.partition_small_intervals(traj, cparams, samples)
        summary = concentration.bookkeeping(traj, partition, samples)
        summary["small_intervals"] = len(partition)
    else:
        summary = {k: 0.0 for k in ("sum_n", "int_n3", "int_n2", "xi_drift",
                                    "l6_sixth_power", "n2_over_l6",
                                    "sum_n_over_n3", "xi_drift_over_sum_n")}
        summary["small_intervals"] = 0
    summary["status"] = traj.status
    summary["frames"] = len(traj.times)
    summary["t_final"] = float(traj.times[-1])

    base = os.path.join(out_dir, cfg.name)
    csv_path = base + ".csv"
    write_csv(csv_path, records)
    checkpoint_path = None
    if cfg["output"]["checkpoint"]:
        checkpoint_path = base + ".frames.bin"
        write_checkpoint(checkpoint_path, traj)
    manifest_path = base + ".manifest.json"
    manifest = {
        "schema": "qnls-manifest v1",
        "config_text": echo_config(cfg),
        "status": traj.status,
        "summary": summary,
        "csv": os.path.basename(csv_path),
        "checkpoint": os.path.basename(checkpoint_path) if checkpoint_path else None,
    }
    try:
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise RunnerError(f"cannot write manifest {manifest_path}: {exc}") from exc
    return traj.status, csv_path, manifest_path


def exit_code_for(status):
    return {integrator.COMPLETED: EXIT_OK,
            integrator.BLOWUP_GUARD_TRIPPED: EXIT_BLOWUP,
            integrator.NUMERICAL_FAILURE: EXIT_FAILURE}[status]


def _run_one(args):
    text, out_dir = args
    cfg = parse_config(text)
    status, csv_path, manifest_path = run(cfg, out_dir)
    return cfg.name, status, csv_path, manifest_path


def run_scenarios(config_texts, out_dir=".", jobs=1):
    """Run several scenarios, optionally in parallel processes.

    Results are keyed by scenario name and independent of the job count
    (each run is single-threaded and self-seeded).
    """
    work = [(text, out_dir) for text in config_texts]
    if jobs <= 1 or len(work) <= 1:
        results = [_run_one(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    return sorted(results, key=lambda r: r[0])


def run_suite(name, jobs=1, out_dir="."):
    """Execute a named suite; returns (all_passed, report list).

    Suites: acceptance (the full criteria battery), strichartz (exponent
    fits plus admissibility, writes sweep CSVs), morawetz-ensemble (seeded
    defocusing runs and their L^8 ratios).
    """
    from . import acceptance  # deferred: acceptance pulls in everything
    os.makedirs(out_dir, exist_ok=True)
    if name == "acceptance":
        return acceptance.run_all(jobs=jobs, out_dir=out_dir)
    if name == "strichartz":
        return acceptance.strichartz_suite(out_dir=out_dir)
    if name == "morawetz-ensemble":
        return acceptance.morawetz_ensemble_suite(out_dir=out_dir, jobs=jobs)
    raise RunnerError(f"unknown suite {name!r}; choose acceptance, strichartz, "
                      f"or morawetz-ensemble")
