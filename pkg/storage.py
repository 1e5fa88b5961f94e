# storage.py - File utilities for curves, plans, samples and reports
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from analyticity import AnalyticityReport
from chebyshev import ChebSeries, clenshaw_eval
from config import FLOAT_FORMAT, PLAN_TOLERANCE, PLAN_VERSION
from curve_algebra import Curve, rescale_to_unit
from errors import MalformedInputError
from sampler import PlanPiece, SamplerPlan
from schemas import CurveFile, PlanFile


@contextmanager
def open_output(path):
    """Yields a text handle for path ('-' or None is stdout) and closes it when done."""
    if path is None or str(path) == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    handle = open(path, "w", encoding="utf-8", newline="")
    try:
        yield handle
    finally:
        handle.close()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedInputError(f"Cannot read {path}: {e}") from e


# --- Curves ---
def curve_to_dict(c: Curve) -> dict:
    return {"domain": list(c.domain), "components": [list(p.coeffs) for p in c.components]}


def curve_from_record(record: CurveFile) -> Curve:
    return Curve.from_coefficients(record.components, record.domain)


def load_curve(path) -> Curve:
    """Parse a curve file {"domain": [a, b], "components": [[a0, ..., ad], ...]} and map it onto [-1, 1]."""
    try:
        record = CurveFile.model_validate(_read_json(path))
    except ValidationError as e:
        raise MalformedInputError(f"Invalid curve file {path}: {e}") from e
    return rescale_to_unit(curve_from_record(record))


# --- Plans ---
def _report_to_dict(r: AnalyticityReport) -> dict:
    return {
        "roots": [[z.real, z.imag] for z in r.roots],
        "rho_star": None if math.isinf(r.rho_star) else r.rho_star,
        "ellipse_sup": r.ellipse_sup,
        "degree": r.degree,
        "normalizer": r.normalizer,
        "heuristic_degree": r.heuristic_degree,
        "condition": r.condition,
        "lower_bound": r.lower_bound,
    }


def plan_to_dict(plan: SamplerPlan) -> dict:
    return {
        "version": PLAN_VERSION,
        "ell": plan.ell,
        "splits": plan.splits,
        "split_at_roots": plan.split_at_roots,
        "bound": plan.bound,
        "curve": curve_to_dict(plan.curve),
        "pieces": [
            {
                "interval": list(p.interval),
                "density_coeffs": p.density.coeffs.tolist(),
                "cdf_coeffs": p.cdf.coeffs.tolist(),
                "probability": p.probability,
                "bisect_depth": p.bisect_depth,
                "report": _report_to_dict(p.report),
            }
            for p in plan.pieces
        ],
    }


def _check_pieces(record: PlanFile) -> None:
    """Pieces must tile [-1, 1] in order, carry CDFs running from 0 to 1 and probabilities summing to 1."""
    edges = [p.interval for p in record.pieces]
    if edges[0][0] != -1.0 or edges[-1][1] != 1.0:
        raise MalformedInputError(f"Plan pieces cover [{edges[0][0]}, {edges[-1][1]}], not [-1, 1].")
    for (a, b), (c, _) in zip(edges, edges[1:] + [(1.0, 1.0)]):
        if not a < b or b != c:
            raise MalformedInputError(f"Plan piece [{a}, {b}] is empty or does not meet the next piece at {c}.")

    for i, p in enumerate(record.pieces):
        cdf = ChebSeries(p.cdf_coeffs)
        start, end = clenshaw_eval(cdf, -1.0), clenshaw_eval(cdf, 1.0)
        if abs(start) > PLAN_TOLERANCE or abs(end - 1.0) > PLAN_TOLERANCE:
            raise MalformedInputError(f"Piece {i} CDF runs from {start:.6g} to {end:.6g}, not from 0 to 1.")

    total = math.fsum(p.probability for p in record.pieces)
    if abs(total - 1.0) > PLAN_TOLERANCE:
        raise MalformedInputError(f"Piece probabilities sum to {total:.17g}, not 1.")


def plan_from_dict(data: dict) -> SamplerPlan:
    try:
        record = PlanFile.model_validate(data)
    except ValidationError as e:
        raise MalformedInputError(f"Invalid plan: {e}") from e
    _check_pieces(record)

    pieces = []
    for p in record.pieces:
        r = p.report
        report = AnalyticityReport(
            roots=tuple(complex(re, im) for re, im in r.roots),
            rho_star=math.inf if r.rho_star is None else r.rho_star,
            ellipse_sup=r.ellipse_sup,
            degree=r.degree,
            normalizer=r.normalizer,
            heuristic_degree=r.heuristic_degree,
            condition=r.condition,
            lower_bound=r.lower_bound,
        )
        pieces.append(
            PlanPiece(
                interval=tuple(p.interval),
                density=ChebSeries(p.density_coeffs),
                cdf=ChebSeries(p.cdf_coeffs),
                probability=p.probability,
                bisect_depth=p.bisect_depth,
                report=report,
            )
        )
    return SamplerPlan(
        curve=curve_from_record(record.curve),
        pieces=tuple(pieces),
        ell=record.ell,
        splits=record.splits,
        split_at_roots=record.split_at_roots,
        bound=record.bound,
    )


def save_plan(plan: SamplerPlan, path) -> None:
    # repr-based float output round-trips every double exactly
    with open_output(path) as f:
        json.dump(plan_to_dict(plan), f, indent=1)


def load_plan(path) -> SamplerPlan:
    return plan_from_dict(_read_json(path))


# --- Samples ---
def sample_frame(t: np.ndarray, points: np.ndarray) -> pd.DataFrame:
    columns = {"t": t}
    for i in range(points.shape[1]):
        columns[f"x{i + 1}"] = points[:, i]
    return pd.DataFrame(columns)


def write_samples(handle, t: np.ndarray, points: np.ndarray, fmt: str, header: bool = True) -> None:
    """Append one block of rows; csv uses 17 significant digits, jsonl exact float repr."""
    frame = sample_frame(t, points)
    if fmt == "csv":
        frame.to_csv(handle, index=False, header=header, float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        for row in frame.itertuples(index=False):
            handle.write(json.dumps(row._asdict()) + "\n")


def read_samples(path) -> pd.DataFrame:
    if str(path).endswith(".jsonl"):
        return pd.read_json(path, lines=True, precise_float=True)
    return pd.read_csv(path, float_precision="round_trip")


# --- Reports and tables ---
def save_json(data: dict, path) -> None:
    with open_output(path) as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def write_table(frame: pd.DataFrame, path) -> None:
    with open_output(path) as f:
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
