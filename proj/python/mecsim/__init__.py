"""Python front end for the edge offloading simulator.

Configs are plain dicts in the same JSON schema the command-line tool reads.
"""

import csv
import io
import json

from . import _core
from ._core import ConfigError, update_local_queue, update_server_queue

__all__ = [
    "ConfigError",
    "default_config",
    "normalize_config",
    "config_hash",
    "drift_constant",
    "run",
    "sweep",
    "verify",
    "solve_per_slot",
    "update_local_queue",
    "update_server_queue",
]


def _dump(config):
    return json.dumps({} if config is None else config)


def default_config(n_devices=5, n_cores=8):
    return json.loads(_core.default_config_json(n_devices, n_cores))


def normalize_config(config=None):
    """Canonical SI form of a config dict (defaults filled in)."""
    return json.loads(_core.normalize_config_json(_dump(config)))


def config_hash(config=None):
    return _core.config_hash(_dump(config))


def drift_constant(config=None):
    return _core.drift_constant(_dump(config))


def run(config=None, mode="baseline", n_slots=10000, warmup=0, trace=False):
    """Metrics document of one run. With trace=True the per-slot CSV is under "trace_csv"."""
    return json.loads(_core.run_json(_dump(config), mode, n_slots, warmup, trace))


def sweep(config=None, v_values=(1e6, 1e7, 1e8, 1e9, 3e9, 7e9), modes=("baseline",), seeds=(1,),
          server_weights=(0.0,), n_slots=10000, threads=1, as_csv=False):
    """Sweep rows as dicts (numeric fields converted), or the raw CSV text."""
    text = _core.sweep_csv(_dump(config), list(v_values), list(modes), list(seeds), list(server_weights),
                           n_slots, threads)
    if as_csv:
        return text
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    rows = []
    for row in csv.DictReader(io.StringIO("\n".join(lines))):
        rows.append({k: (v if k == "mode" else float(v)) for k, v in row.items()})
    return rows


def verify(suite="all", n_cases=100, seed=1, perturb=0.0):
    return json.loads(_core.verify_json(suite, n_cases, seed, perturb))


def solve_per_slot(config, q_bits, t_bits, gamma):
    return json.loads(_core.solve_per_slot_json(_dump(config), list(q_bits), list(t_bits), list(gamma)))
