"""Command-line front end: ``tomofit --mode {fit,check,seed,simulate}``.

Counts are read from ``setting,count,shots`` CSV tables and Stokes vectors
from ``{"s1": .., "s2": .., "s3": ..}`` JSON objects. Reports are JSON
documents written to ``--output`` (stdout when omitted). Exit status is 0 on
success, 2 when the input describes an unphysical state and 1 otherwise.
"""

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .constants import EPSILON_FALLBACK, FALLBACK_SEED, SIMPLEX_F_TOL
from .fitting import FitConfig, ObjectiveKind, cross_form_check, default_threshold, fit_form, fit_with_policy
from .forms import MULTI_QUBIT_FORMS, SINGLE_QUBIT_FORMS, FormId
from .seeding import Region, seed_single
from .stokes import (
    MeasurementRecord,
    MeasurementSet,
    StokesVector,
    UnphysicalStateError,
    rho_from_stokes,
    sample_counts,
    stokes_from_counts,
)

SCHEMA_VERSION = 1
CSV_HEADER = ["setting", "count", "shots"]

log = logging.getLogger("tomofit")


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    mode: str
    input: str | None = None
    format: str | None = None
    forms: list = field(default_factory=list)
    objective: ObjectiveKind = ObjectiveKind.multinomial_nll
    shots: int | None = None
    true_stokes: tuple | None = None
    rng_seed: int = 0
    output: str | None = None
    epsilon_fallback: float = EPSILON_FALLBACK
    consistency_threshold: float | None = None
    f_tol: float = SIMPLEX_F_TOL

    def validate(self):
        if self.epsilon_fallback <= 0:
            raise InputError("--epsilon-fallback must be positive")
        if self.consistency_threshold is not None and self.consistency_threshold <= 0:
            raise InputError("--consistency-threshold must be positive")
        if self.mode == "simulate":
            if self.true_stokes is None or self.shots is None:
                raise InputError("simulate needs --true-stokes and --shots")
            if self.shots <= 0:
                raise InputError("--shots must be positive")
        elif self.input is None:
            raise InputError(f"mode {self.mode} needs --input")


def parse_counts_csv(text):
    """Parse a counts table; errors carry the 1-based line number."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("line 1: empty file") from None
    if [h.strip() for h in header] != CSV_HEADER:
        raise InputError(f"line 1: expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise InputError(f"line {lineno}: expected 3 fields, got {len(row)}")
        setting, count, shots = (c.strip() for c in row)
        try:
            records.append(MeasurementRecord(setting, int(count), int(shots)))
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if not records:
        raise InputError("no data rows")
    n = len(records[0].setting)
    try:
        return MeasurementSet(n, records)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_stokes_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(obj, dict) or not {"s1", "s2", "s3"} <= obj.keys():
        raise InputError("expected an object with keys s1, s2, s3")
    vals = []
    for k in ("s1", "s2", "s3"):
        v = obj[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InputError(f"{k} is not a number")
        if not np.isfinite(v) or abs(v) > 1.0:
            raise UnphysicalStateError(f"{k} = {v} is outside [-1, 1]")
        vals.append(float(v))
    return StokesVector.from_raw(*vals)


def ingest(path, fmt):
    """Read ``path`` as ``counts-csv`` or ``stokes-json``; returns (value, sha256)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8")
    if fmt == "counts-csv":
        return parse_counts_csv(text), digest
    if fmt == "stokes-json":
        return parse_stokes_json(text), digest
    raise InputError(f"unknown format {fmt!r}")


def write_counts_csv(m, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in m.records:
        w.writerow([r.setting, int(r.count), r.shots])


def _matrix_json(rho):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(rho)]


def _stokes_json(s):
    return {"s1": s.s1, "s2": s.s2, "s3": s.s3, "clamped": s.clamped}


def _fit_json(fit):
    return {
        "form": fit.form.value,
        "t_hat": [float(x) for x in fit.t_hat.t],
        "seed_t": [float(x) for x in fit.seed.t],
        "seed_region": fit.seed_region.value,
        "rho_hat": _matrix_json(fit.rho_hat),
        "objective_value": fit.objective_value,
        "iterations": fit.iterations,
        "evaluations": fit.evaluations,
        "converged": fit.converged,
        "notes": list(fit.notes),
    }


def _seed_json(sr):
    return {
        "form": sr.params.form.value,
        "t": [float(x) for x in sr.params.t],
        "region": sr.region.value,
        "notes": sr.notes,
    }


def _parse_forms(spec):
    if not spec:
        return []
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        try:
            out.append(FormId(tok))
        except ValueError:
            raise InputError(f"unknown form {tok!r}") from None
    return out


def _fit_config(cfg):
    return FitConfig(f_tol=cfg.f_tol)


def _check_forms(forms, n):
    for f in forms:
        if n > 1 and f not in MULTI_QUBIT_FORMS:
            raise InputError(f"form {f.value} needs single-qubit data")


def run(cfg):
    """Execute one CLI request; returns ``(exit_code, report_dict_or_None)``."""
    cfg.validate()
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "mode": cfg.mode,
        "config": {
            "objective": ObjectiveKind(cfg.objective).value,
            "epsilon_fallback": cfg.epsilon_fallback,
            "fallback_seed": list(FALLBACK_SEED),
            "consistency_threshold": cfg.consistency_threshold,
            "f_tol": cfg.f_tol,
            "forms": [f.value for f in cfg.forms],
            "rng_seed": cfg.rng_seed,
        },
        "events": [],
    }
    events = report["events"]

    if cfg.mode == "simulate":
        s = StokesVector(*cfg.true_stokes)
        data = sample_counts(rho_from_stokes(s), cfg.shots, cfg.rng_seed)
        buf = io.StringIO()
        write_counts_csv(data, buf)
        return 0, buf.getvalue()

    value, digest = ingest(cfg.input, cfg.format)
    report["input"] = {"path": cfg.input, "format": cfg.format, "sha256": digest}

    if isinstance(value, StokesVector):
        if cfg.mode != "seed":
            raise InputError(f"mode {cfg.mode} needs counts-csv input")
        stokes, data = value, None
    else:
        data = value
        stokes = stokes_from_counts(data) if data.n_qubits == 1 else None
    report["n_qubits"] = 1 if data is None else data.n_qubits
    if stokes is not None:
        report["stokes_estimate"] = _stokes_json(stokes)
        if stokes.clamped:
            events.append({"kind": "clamped", "detail": "Stokes estimate rescaled onto the unit sphere"})

    def note_fallback(form, region):
        if region is Region.fallback:
            events.append({"kind": "fallback", "form": form.value, "detail": "seed fallback rule applied"})

    fit_kw = dict(objective=cfg.objective, cfg=_fit_config(cfg), epsilon=cfg.epsilon_fallback)

    if cfg.mode == "seed":
        if stokes is None:
            raise InputError("seed mode needs single-qubit input")
        forms = cfg.forms or list(SINGLE_QUBIT_FORMS)
        seeds = []
        for f in forms:
            if f not in SINGLE_QUBIT_FORMS:
                raise InputError(f"seed mode supports forms A-D, got {f.value}")
            sr = seed_single(stokes, f, epsilon=cfg.epsilon_fallback)
            note_fallback(f, sr.region)
            seeds.append(_seed_json(sr))
        report["seeds"] = seeds
        return 0, report

    _check_forms(cfg.forms, data.n_qubits)
    if cfg.mode == "fit":
        if len(cfg.forms) == 1:
            fit = fit_form(data, cfg.forms[0], **fit_kw)
        elif data.n_qubits == 1:
            fit = fit_with_policy(data, **fit_kw)
        else:
            fit = fit_form(data, FormId.B_multi, **fit_kw)
        note_fallback(fit.form, fit.seed_region)
        report["fits"] = [_fit_json(fit)]
        return 0, report

    if cfg.mode == "check":
        forms = cfg.forms or (list(SINGLE_QUBIT_FORMS) if data.n_qubits == 1 else list(MULTI_QUBIT_FORMS))
        threshold = cfg.consistency_threshold or default_threshold(data)
        rep = cross_form_check(data, forms, threshold=threshold, **fit_kw)
        for fit in rep.fits:
            note_fallback(fit.form, fit.seed_region)
        report["config"]["consistency_threshold"] = rep.threshold
        report["fits"] = [_fit_json(f) for f in rep.fits]
        report["pairwise_trace_distance"] = rep.pairwise_trace_distance.tolist()
        report["pairwise_fidelity"] = rep.pairwise_fidelity.tolist()
        report["max_trace_distance"] = rep.max_trace_distance
        report["consistent"] = rep.consistent
        return 0, report

    raise InputError(f"unknown mode {cfg.mode!r}")


def build_parser():
    p = _Parser(prog="tomofit", description="Single- and multi-qubit state tomography by T-matrix MLE.")
    p.add_argument("--mode", required=True, choices=["fit", "check", "seed", "simulate"])
    p.add_argument("--input")
    p.add_argument("--format", choices=["counts-csv", "stokes-json"], default="counts-csv")
    p.add_argument("--forms", default="", help="comma-separated form ids, e.g. A,B,C,D")
    p.add_argument("--objective", choices=[k.value for k in ObjectiveKind],
                   default=ObjectiveKind.multinomial_nll.value)
    p.add_argument("--shots", type=int)
    p.add_argument("--true-stokes", help="s1,s2,s3 of the simulated state")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--output", help="report path (stdout when omitted)")
    p.add_argument("--epsilon-fallback", type=float, default=EPSILON_FALLBACK)
    p.add_argument("--consistency-threshold", type=float)
    return p


def config_from_args(ns):
    true_stokes = None
    if ns.true_stokes is not None:
        try:
            true_stokes = tuple(float(x) for x in ns.true_stokes.split(","))
        except ValueError:
            raise InputError(f"cannot parse --true-stokes {ns.true_stokes!r}") from None
        if len(true_stokes) != 3:
            raise InputError("--true-stokes needs three comma-separated values")
    return RunConfig(
        mode=ns.mode,
        input=ns.input,
        format=ns.format,
        forms=_parse_forms(ns.forms),
        objective=ObjectiveKind(ns.objective),
        shots=ns.shots,
        true_stokes=true_stokes,
        rng_seed=ns.rng_seed,
        output=ns.output,
        epsilon_fallback=ns.epsilon_fallback,
        consistency_threshold=ns.consistency_threshold,
    )


def _emit(payload, path):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(name)s: %(message)s")
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        code, payload = run(cfg)
    except UnphysicalStateError as exc:
        log.error("unphysical input: %s", exc)
        return 2
    except (InputError, OSError, UnicodeDecodeError) as exc:
        log.error("%s", exc)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return 1
    _emit(payload, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
