import logging
import time

from sampler import resolve_seed, sample_sharded
from schemas import RunConfig
from storage import load_plan, open_output, write_samples

logger = logging.getLogger(__name__)


def run(config: RunConfig) -> int:
    plan = load_plan(config.plan_path)
    seed = resolve_seed(config.seed)

    start = time.perf_counter()
    written = 0
    with open_output(config.output_path) as out:
        for t, points in sample_sharded(plan, seed, config.count, config.workers):
            write_samples(out, t, points, config.format, header=written == 0)
            written += t.size
    elapsed = time.perf_counter() - start

    logger.info("wrote %d samples with seed %d", written, seed)
    if config.output_path is not None:
        print(f"samples={written} seed={seed} wall_time={elapsed:.6f}s time_per_sample={elapsed / written:.3e}s")
    return 0
