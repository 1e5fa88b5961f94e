import logging
import math
from dataclasses import asdict

import numpy as np

from sampler import resolve_seed, sample_sharded
from schemas import RunConfig
from storage import load_curve, load_plan, save_json
from validation import build_report, check_certificates, piece_errors

logger = logging.getLogger(__name__)

CERTIFICATE_EXIT_CODE = 5


def _finite(record: dict) -> dict:
    # JSON has no infinity; an unbounded rho* is written as null
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in record.items()}


def run(config: RunConfig) -> int:
    plan = load_plan(config.plan_path)
    curve = load_curve(config.curve_path)
    seed = resolve_seed(config.seed)

    # the oracle is built from the curve file, independently of the plan
    t = np.concatenate([t for t, _ in sample_sharded(plan, seed, config.count, config.workers)])
    report = build_report(plan, curve, t, config.bins)
    certificates = check_certificates(plan, curve)
    passed = all(c.passed for c in certificates)

    save_json(
        {
            **asdict(report),
            "tightness": report.tightness,
            "seed": seed,
            "passed": passed,
            "certificates": [_finite(asdict(c)) for c in certificates],
            "pieces": [asdict(e) for e in piece_errors(plan, curve)],
        },
        config.output_path,
    )

    if config.output_path is not None:
        print(
            f"binned_tv={report.binned_tv:.6g} ks={report.ks_stat:.6g} "
            f"l1={report.l1_density_error:.6g} budget={report.budget:.6g} passed={passed}"
        )
    if not passed:
        failed = ", ".join(sorted({c.name for c in certificates if not c.passed}))
        logger.error("certificates failed: %s", failed)
        return CERTIFICATE_EXIT_CODE
    return 0
