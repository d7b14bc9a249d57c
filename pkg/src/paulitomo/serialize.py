"""JSON and CSV schemas for every file the CLI reads or writes.

Schemas:
  state        {"n": int, "amplitudes": [[re, im], ...]}
  records      {"version": 1, "n": int, "shots": int,
                "records": [{"setting": "zxx..", "counts": {"0110..": int}}]}
  expectations {"version": 1, "n": int, "normalized": bool,
                "items": [{"monomial": "IXXZ..", "value": float}]}
  result       {"config": {...}, "final_fidelity": float|null,
                "final_frobenius_error": float|null, "iterations": int,
                "trace": [{"iter", "change", "error", "fidelity", "time_s",
                           "grad_time_s"}], "factor": optional}
  calibration  {"n": int, "columns": [[float, ...], ...]}  (column-major)

Bit strings and monomial strings put qubit 0 first.
"""

import csv
import json
from dataclasses import asdict

import numpy as np

from .baselines import CalibrationMatrix
from .measurements import ExpectationSample, MeasurementRecord, PauliMonomial, PauliSetting
from .optimizer import ConvergenceTrace, OptimizerConfig
from .sensing import ObservationVector, SensingMap
from .states import PureState


def _complex_pairs(values) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def state_to_json(state: PureState) -> dict:
    return {"n": state.n, "amplitudes": _complex_pairs(state.amplitudes)}


def state_from_json(obj: dict) -> PureState:
    amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
    return PureState(int(obj["n"]), amps)


def records_to_json(n: int, shots: int, records) -> dict:
    return {
        "version": 1,
        "n": n,
        "shots": shots,
        "records": [
            {"setting": r.setting.axes, "counts": dict(r.counts)} for r in records
        ],
    }


def records_from_json(obj: dict) -> list:
    shots = int(obj["shots"])
    return [
        MeasurementRecord(
            setting=PauliSetting(entry["setting"]),
            shots=shots,
            counts={k: int(v) for k, v in entry["counts"].items()},
        )
        for entry in obj["records"]
    ]


def expectations_to_json(n: int, normalized: bool, monomials, values) -> dict:
    return {
        "version": 1,
        "n": n,
        "normalized": bool(normalized),
        "items": [
            {"monomial": str(p), "value": float(v)} for p, v in zip(monomials, values)
        ],
    }


def expectations_from_json(obj: dict):
    """Returns (SensingMap, ObservationVector) rebuilt from the file."""
    n = int(obj["n"])
    monomials = [PauliMonomial.from_string(item["monomial"]) for item in obj["items"]]
    values = np.array([float(item["value"]) for item in obj["items"]])
    sensing_map = SensingMap(n, monomials, normalized=bool(obj["normalized"]))
    return sensing_map, ObservationVector(values)


def samples_from_json(obj: dict) -> list:
    """The same file, as raw expectation samples (requires unnormalized values)."""
    if obj["normalized"]:
        raise ValueError("expectation samples require unnormalized values")
    return [
        ExpectationSample(PauliMonomial.from_string(item["monomial"]), float(item["value"]))
        for item in obj["items"]
    ]


def config_to_json(config: OptimizerConfig) -> dict:
    return asdict(config)


def config_from_json(obj: dict) -> OptimizerConfig:
    return OptimizerConfig(**obj)


def factor_to_json(factor: np.ndarray) -> dict:
    factor = np.asarray(factor)
    if factor.ndim == 1:
        factor = factor[:, None]
    return {
        "rows": factor.shape[0],
        "cols": factor.shape[1],
        "columns": [_complex_pairs(factor[:, j]) for j in range(factor.shape[1])],
    }


def factor_from_json(obj: dict) -> np.ndarray:
    cols = [
        np.array([complex(re, im) for re, im in col]) for col in obj["columns"]
    ]
    return np.stack(cols, axis=1)


def result_to_json(
    config: OptimizerConfig,
    trace: ConvergenceTrace,
    final_fidelity: float | None,
    final_frobenius_error: float | None,
    factor: np.ndarray | None = None,
) -> dict:
    out = {
        "config": config_to_json(config),
        "final_fidelity": final_fidelity,
        "final_frobenius_error": final_frobenius_error,
        "iterations": trace.iterations,
        "eta": trace.eta,
        "mu": trace.mu,
        "trace": [
            {
                "iter": rec.iteration,
                "change": rec.change,
                "error": rec.error,
                "fidelity": rec.fidelity,
                "time_s": rec.time_s,
                "grad_time_s": rec.grad_time_s,
            }
            for rec in trace
        ],
    }
    if factor is not None:
        out["factor"] = factor_to_json(factor)
    return out


def trace_to_csv(trace: ConvergenceTrace, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "change", "error", "fidelity", "time_s"])
        for rec in trace:
            writer.writerow(
                [
                    rec.iteration,
                    rec.change,
                    "" if rec.error is None else rec.error,
                    "" if rec.fidelity is None else rec.fidelity,
                    rec.time_s,
                ]
            )


def calibration_to_json(calibration: CalibrationMatrix) -> dict:
    c = calibration.entries
    n = int(np.log2(c.shape[0]))
    return {"n": n, "columns": [c[:, j].tolist() for j in range(c.shape[1])]}


def calibration_from_json(obj: dict) -> CalibrationMatrix:
    cols = np.array(obj["columns"], dtype=float).T
    return CalibrationMatrix(cols)


def save_json(obj: dict, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
