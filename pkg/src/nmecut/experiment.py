"""Robustness-versus-shots sweep over Haar-random input states.

Seeding: every random draw comes from a generator built off
``SeedSequence(master_seed, spawn_key=...)``. The Haar unitary of state ``s``
uses key ``(0, s)``; the shots for state ``s`` at robustness index ``ri`` and
budget index ``si`` use key ``(1, s, ri, si)``. Results therefore do not
depend on execution order or on how the work is split between processes.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from functools import lru_cache

import numpy as np

from .channels import WireCutDecomposition, nme_cut
from .entangle import haar_random_unitary, k_from_robustness
from .estimator import MODES, estimate_distribution, l2_error
from .qmath import PureState, is_unitary

DEFAULT_ROBUSTNESS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_SHOTS = tuple(2**e for e in range(6, 17))
CSV_FIELDS = ("robustness", "k", "shots", "n_states", "mean_l2", "stderr_l2", "seed")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    robustness_levels: tuple[float, ...] = DEFAULT_ROBUSTNESS
    shot_budgets: tuple[int, ...] = DEFAULT_SHOTS
    n_states: int = 500
    master_seed: int = 0
    allocation_mode: str = "proportional"
    clip: bool = False

    def __post_init__(self):
        object.__setattr__(self, "robustness_levels", tuple(float(r) for r in self.robustness_levels))
        object.__setattr__(self, "shot_budgets", tuple(int(n) for n in self.shot_budgets))
        if not self.robustness_levels or not self.shot_budgets:
            raise ConfigError("need at least one robustness level and one shot budget")
        if any(not 0.0 <= r <= 1.0 for r in self.robustness_levels):
            raise ConfigError(f"robustness levels must lie in [0, 1]: {self.robustness_levels}")
        if any(n < 1 for n in self.shot_budgets):
            raise ConfigError(f"shot budgets must be >= 1: {self.shot_budgets}")
        if self.n_states < 1:
            raise ConfigError(f"n_states must be >= 1, got {self.n_states}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.allocation_mode not in MODES:
            raise ConfigError(f"unknown allocation mode {self.allocation_mode!r}")


@dataclass(frozen=True)
class ExperimentRecord:
    robustness: float
    k: float
    shots: int
    n_states: int
    mean_l2: float
    stderr_l2: float
    seed: int


def state_rng(master_seed: int, state: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(0, state)))


def cell_rng(master_seed: int, state: int, r_index: int, s_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(1, state, r_index, s_index))
    )


@lru_cache(maxsize=64)
def _cut_for_robustness(r: float) -> WireCutDecomposition:
    return nme_cut(k_from_robustness(r))


def run_trial(
    u,
    r: float,
    shots: int,
    rng: np.random.Generator,
    mode: str = "proportional",
    clip: bool = False,
) -> float:
    """L2 distance between the cut estimate and the exact distribution of ``U|0>``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("u must be a 2x2 unitary")
    psi = PureState.normalized(u[:, 0])
    exact = np.abs(u[:, 0]) ** 2
    est = estimate_distribution(_cut_for_robustness(float(r)), psi, shots, mode, rng, clip=clip)
    return l2_error(est.probs, exact)


def _state_errors(config: ExperimentConfig, state: int) -> np.ndarray:
    u = haar_random_unitary(2, state_rng(config.master_seed, state))
    out = np.empty((len(config.robustness_levels), len(config.shot_budgets)))
    for ri, r in enumerate(config.robustness_levels):
        for si, n in enumerate(config.shot_budgets):
            rng = cell_rng(config.master_seed, state, ri, si)
            out[ri, si] = run_trial(u, r, n, rng, config.allocation_mode, config.clip)
    return out


def _chunk_errors(args) -> np.ndarray:
    config, states = args
    return np.stack([_state_errors(config, s) for s in states])


def sweep_errors(config: ExperimentConfig, workers: int = 1) -> np.ndarray:
    """Per-state L2 errors, shape ``(n_states, n_robustness, n_budgets)``."""
    states = list(range(config.n_states))
    if workers <= 1:
        return _chunk_errors((config, states))
    chunks = [states[i::workers] for i in range(workers) if states[i::workers]]
    out = np.empty((config.n_states, len(config.robustness_levels), len(config.shot_budgets)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk, errs in zip(chunks, pool.map(_chunk_errors, [(config, c) for c in chunks])):
            out[chunk] = errs
    return out


def aggregate(config: ExperimentConfig, errors: np.ndarray) -> list[ExperimentRecord]:
    n = errors.shape[0]
    mean = errors.mean(axis=0)
    se = errors.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros_like(mean)
    records = [
        ExperimentRecord(
            robustness=r,
            k=k_from_robustness(r),
            shots=shots,
            n_states=n,
            mean_l2=float(mean[ri, si]),
            stderr_l2=float(se[ri, si]),
            seed=config.master_seed,
        )
        for ri, r in enumerate(config.robustness_levels)
        for si, shots in enumerate(config.shot_budgets)
    ]
    return sorted(records, key=lambda rec: (rec.robustness, rec.shots))


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[ExperimentRecord]:
    """Run every (state, robustness, budget) cell and aggregate per (robustness, budget).

    The same Haar state is reused across all robustness levels and budgets.
    Output is sorted by ``(robustness, shots)`` and is a pure function of
    ``config``; ``workers`` only changes wall time.
    """
    if not isinstance(config, ExperimentConfig):
        raise ConfigError("run_sweep needs an ExperimentConfig")
    return aggregate(config, sweep_errors(config, workers))


def monotonicity_violations(records, n_se: float = 2.0) -> list[tuple[int, float, float, float]]:
    """Adjacent robustness pairs whose mean error rises by more than
    ``n_se`` combined standard errors, as ``(shots, r_lo, r_hi, excess)``."""
    by_shots: dict[int, list[ExperimentRecord]] = {}
    for rec in records:
        by_shots.setdefault(rec.shots, []).append(rec)
    bad = []
    for shots, recs in sorted(by_shots.items()):
        recs = sorted(recs, key=lambda rec: rec.robustness)
        for lo, hi in zip(recs, recs[1:]):
            tol = n_se * np.hypot(lo.stderr_l2, hi.stderr_l2)
            rise = hi.mean_l2 - lo.mean_l2
            if rise > tol:
                bad.append((shots, lo.robustness, hi.robustness, float(rise - tol)))
    return bad


def _format_float(x: float) -> str:
    # shortest round-tripping digits, never in exponent notation
    return np.format_float_positional(float(x), unique=True, trim="0")


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(
            [
                _format_float(rec.robustness),
                _format_float(rec.k),
                rec.shots,
                rec.n_states,
                _format_float(rec.mean_l2),
                _format_float(rec.stderr_l2),
                rec.seed,
            ]
        )
    return buf.getvalue()


def records_to_json(records) -> str:
    return json.dumps([asdict(rec) for rec in records], indent=2) + "\n"


def write_records(records, format: str = "csv", destination=None) -> None:
    """Write records as CSV or JSON to a path or an open text stream."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    if format == "csv":
        text = records_to_csv(records)
    elif format == "json":
        text = records_to_json(records)
    else:
        raise ValueError(f"unknown format {format!r}; expected 'csv' or 'json'")
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(os.fspath(destination), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_records(source, format: str = "csv") -> list[ExperimentRecord]:
    """Parse output of :func:`write_records`."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(os.fspath(source), encoding="utf-8") as fh:
            text = fh.read()
    types = {f.name: f.type for f in fields(ExperimentRecord)}
    if format == "json":
        rows = json.loads(text)
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
    return [
        ExperimentRecord(**{k: (int(v) if types[k] == "int" else float(v)) for k, v in row.items()})
        for row in rows
    ]
