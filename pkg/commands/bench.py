import logging
import time

import numpy as np
import pandas as pd

from sampler import RandomSource, build_plan, resolve_seed, sample_points, shard_seed
from schemas import RunConfig
from storage import load_curve, write_table

logger = logging.getLogger(__name__)

FIELDS = ["metric", "mean", "sd", "min", "max"]


def run(config: RunConfig) -> int:
    curve = load_curve(config.curve_path)
    seed = resolve_seed(config.seed)
    preprocess = np.zeros(config.repeats)
    per_sample = np.zeros(config.repeats)
    degree = 0

    for i in range(config.repeats):
        logger.debug("bench repeat %d/%d", i + 1, config.repeats)
        start = time.perf_counter()
        plan = build_plan(curve, config.ell, config.splits, split_at_roots=config.root_split, bound=config.bound)
        preprocess[i] = time.perf_counter() - start

        start = time.perf_counter()
        sample_points(plan, RandomSource(shard_seed(seed, i)), config.count)
        per_sample[i] = (time.perf_counter() - start) / config.count
        degree = plan.max_degree

    rows = [[name, v.mean(), v.std(), v.min(), v.max()] for name, v in (("preprocess_time", preprocess), ("time_per_sample", per_sample))]
    write_table(pd.DataFrame(rows, columns=FIELDS), config.output_path)

    if config.output_path is not None:
        print(f"k={degree} preprocess: {preprocess.mean():.6f}s ({preprocess.std():.6f})")
        print(f"per sample: {per_sample.mean():.3e}s ({per_sample.std():.3e})")
    return 0
