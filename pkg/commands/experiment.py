"""Reproduction runs over random and structured curve families.

table1  random Gaussian curves over a (d, n, epsilon) grid
split   unsplit against four equal pieces over a range of ell
degree  (1 + T + ... + T^d) in three coordinates for a range of d

Curves that fail the condition check are logged and skipped.
"""
import logging
import math
import time

import numpy as np
import pandas as pd

from config import (
    DEGREE_RANGE,
    SPLIT_DEGREE,
    SPLIT_DIMENSION,
    SPLIT_ELLS,
    TABLE1_DEGREES,
    TABLE1_DIMENSIONS,
    TABLE1_EPSILONS,
)
from curve_algebra import geometric_curve, random_gaussian_curve
from errors import CurveSamplerError
from sampler import RandomSource, build_plan, resolve_seed, sample_points, shard_seed
from schemas import RunConfig, ell_for_epsilon
from storage import write_table

logger = logging.getLogger(__name__)

SPLIT_COUNTS = (0, 4)


def timed_run(curve, ell: int, config: RunConfig, splits: int, seed: int) -> dict:
    start = time.perf_counter()
    plan = build_plan(curve, ell, splits, split_at_roots=config.root_split, bound=config.bound)
    preprocess_time = time.perf_counter() - start

    start = time.perf_counter()
    sample_points(plan, RandomSource(seed), config.samples)
    per_sample = (time.perf_counter() - start) / config.samples

    first = plan.pieces[0].report
    return {
        "k": plan.max_degree,
        "pieces": len(plan.pieces),
        "rho_star": first.rho_star if math.isfinite(first.rho_star) else np.nan,
        "M": first.ellipse_sup,
        "preprocess_time": preprocess_time,
        "time_per_sample": per_sample,
    }


def table1(config: RunConfig, seed: int) -> pd.DataFrame:
    rng = np.random.Generator(np.random.Philox(seed))
    degrees = config.degrees or TABLE1_DEGREES
    dimensions = config.dimensions or TABLE1_DIMENSIONS
    epsilons = config.epsilons or TABLE1_EPSILONS

    rows = []
    for d in degrees:
        for n in dimensions:
            for trial in range(config.trials):
                curve = random_gaussian_curve(d, n, rng)
                for epsilon in epsilons:
                    ell = ell_for_epsilon(epsilon)
                    try:
                        result = timed_run(curve, ell, config, 0, shard_seed(seed, len(rows)))
                    except CurveSamplerError as e:
                        logger.warning("skipping d=%d n=%d trial=%d: %s %s", d, n, trial, e.code, e)
                        continue
                    rows.append({"d": d, "n": n, "ell": ell, "epsilon": epsilon, "trial": trial, **result})
    return pd.DataFrame(rows)


def split(config: RunConfig, seed: int) -> pd.DataFrame:
    rng = np.random.Generator(np.random.Philox(seed))
    degree = (config.degrees or [SPLIT_DEGREE])[0]
    dimension = (config.dimensions or [SPLIT_DIMENSION])[0]
    ells = config.ells or SPLIT_ELLS

    rows = []
    for trial in range(config.trials):
        curve = random_gaussian_curve(degree, dimension, rng)
        for ell in ells:
            for splits in SPLIT_COUNTS:
                try:
                    result = timed_run(curve, ell, config, splits, shard_seed(seed, len(rows)))
                except CurveSamplerError as e:
                    logger.warning("skipping trial=%d ell=%d splits=%d: %s %s", trial, ell, splits, e.code, e)
                    continue
                rows.append({"d": degree, "n": dimension, "ell": ell, "splits": splits, "trial": trial, **result})
    return pd.DataFrame(rows)


def degree(config: RunConfig, seed: int) -> pd.DataFrame:
    degrees = config.degrees or list(range(DEGREE_RANGE[0], DEGREE_RANGE[1] + 1))
    rows = []
    for d in degrees:
        try:
            result = timed_run(geometric_curve(d), config.ell, config, 0, shard_seed(seed, d))
        except CurveSamplerError as e:
            logger.warning("skipping d=%d: %s %s", d, e.code, e)
            continue
        rows.append({"d": d, "n": 3, "ell": config.ell, **result})
    return pd.DataFrame(rows)


def run(config: RunConfig) -> int:
    seed = resolve_seed(config.seed)
    if config.mode == "table1":
        frame = table1(config, seed)
    elif config.mode == "split":
        frame = split(config, seed)
    else:
        frame = degree(config, seed)

    write_table(frame, config.output_path)
    if config.output_path is not None:
        print(f"mode={config.mode} rows={len(frame)} seed={seed}")
        if not frame.empty:
            print(frame.groupby("ell")["k"].median().to_string())
    return 0
