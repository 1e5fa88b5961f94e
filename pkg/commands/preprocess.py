import logging
import math
import time

from sampler import build_plan
from schemas import RunConfig
from storage import load_curve, save_plan

logger = logging.getLogger(__name__)


def summary_lines(plan, elapsed: float) -> list[str]:
    lines = [f"pieces={len(plan.pieces)} ell={plan.ell} bound={plan.bound} preprocess_time={elapsed:.6f}s"]
    for i, p in enumerate(plan.pieces):
        r = p.report
        rho = "inf" if math.isinf(r.rho_star) else f"{r.rho_star:.6g}"
        lines.append(
            f"  piece {i} [{p.interval[0]:.6g}, {p.interval[1]:.6g}]: "
            f"k={r.degree} rho*={rho} M={r.ellipse_sup:.6g} ell_B={p.bisect_depth} p={p.probability:.6g}"
        )
    return lines


def run(config: RunConfig) -> int:
    curve = load_curve(config.curve_path)

    start = time.perf_counter()
    plan = build_plan(curve, config.ell, config.splits, split_at_roots=config.root_split, bound=config.bound)
    elapsed = time.perf_counter() - start

    save_plan(plan, config.output_path)
    logger.info("plan written to %s", config.output_path or "stdout")
    if config.output_path is not None:
        for line in summary_lines(plan, elapsed):
            print(line)
    return 0
