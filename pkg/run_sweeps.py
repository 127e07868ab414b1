# run_sweeps.py

import argparse
import logging
import os
import random
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from dotenv import load_dotenv

from blowup_engine import principalize_many, principalize_pair
from chart_oracle import verify_trace
from constants import ENV_LOG_LEVEL, LOG_FORMAT
from errors import EngineError, OracleError
from models import Arrangement, BlowupState, Divisor, Nerve, Trace, invariant_key

logger = logging.getLogger(__name__)


# Instance builders

def random_nerve(rng: random.Random, n: int) -> Nerve:
    """Random downward-closed nerve on n vertices that contains every singleton."""
    sets: List[List[int]] = [[i] for i in range(n)]
    for _ in range(rng.randint(0, 2 * n)):
        size = rng.randint(2, max(2, n))
        sets.append(rng.sample(range(n), min(size, n)))
    return Nerve.from_sets(n, sets)


def build_state(rows: Sequence[Sequence[int]], nerve: Optional[Nerve] = None) -> BlowupState:
    n = len(rows[0])
    names = [f"Y{i}" for i in range(n)]
    return BlowupState(
        arrangement=Arrangement.original(names, nerve),
        divisors=tuple(Divisor(coeffs=tuple(row)) for row in rows),
    )


def random_state(
    rng: random.Random,
    max_vertices: int,
    max_divisors: int,
    max_coeff: int,
    full_nerve: bool = False,
) -> BlowupState:
    n = rng.randint(1, max_vertices)
    h = rng.randint(2, max_divisors)
    rows = [[rng.randint(0, max_coeff) for _ in range(n)] for _ in range(h)]
    nerve = Nerve.full(n) if full_nerve else random_nerve(rng, n)
    return build_state(rows, nerve)


def _max_invariant(trace: Trace) -> str:
    if not trace.steps:
        return "-inf, 0"
    worst = max(trace.steps, key=lambda s: invariant_key(s.sigma_before, s.tau_before))
    return f"{worst.sigma_before}, {worst.tau_before}"


# Sweeps

def monomial_pair_counts(max_exponent: int = 6) -> pd.DataFrame:
    """Blow-up counts of the ideals (x^a, y^b) for 1 <= a, b <= max_exponent."""
    records = []
    for a in range(1, max_exponent + 1):
        for b in range(1, max_exponent + 1):
            state = build_state([(a, 0), (0, b)])
            _, trace = principalize_pair(state, 0, 1)
            report = verify_trace(2, [(a, 0), (0, b)], trace)
            records.append({
                "a": a,
                "b": b,
                "degree": a + b,
                "blowups": trace.blowup_count,
                "leaves": report.leaf_count,
                "verified": report.ok,
            })
    return pd.DataFrame(records)


def strict_decrease_sweep(
    count: int,
    seed: int = 0,
    max_vertices: int = 6,
    max_divisors: int = 4,
    max_coeff: int = 5,
) -> pd.DataFrame:
    rng = random.Random(seed)
    records = []
    for index in range(count):
        state = random_state(rng, max_vertices, max_divisors, max_coeff)
        record = {
            "instance": index,
            "n": state.arrangement.vertex_count,
            "h": len(state.divisors),
            "blowups": None,
            "max_invariant": None,
            "violation": "",
        }
        try:
            _, trace = principalize_many(state)
        except EngineError as e:
            logger.error(f"Instance {index} failed: {e}")
            record["violation"] = f"{type(e).__name__}: {e}"
        else:
            record["blowups"] = trace.blowup_count
            record["max_invariant"] = _max_invariant(trace)
        records.append(record)
    return pd.DataFrame(records)


def oracle_sweep(
    count: int,
    seed: int = 0,
    max_vertices: int = 4,
    max_divisors: int = 3,
    max_coeff: int = 4,
) -> pd.DataFrame:
    rng = random.Random(seed)
    records = []
    for index in range(count):
        state = random_state(rng, max_vertices, max_divisors, max_coeff, full_nerve=True)
        rows = [d.coeffs for d in state.divisors]
        record = {
            "instance": index,
            "n": state.arrangement.vertex_count,
            "h": len(rows),
            "blowups": None,
            "leaves": None,
            "failures": None,
            "pullback_mismatches": None,
            "nerve_violations": None,
            "unrealized_nerve_sets": None,
            "error": "",
        }
        try:
            _, trace = principalize_many(state)
            report = verify_trace(len(rows[0]), rows, trace)
        except (EngineError, OracleError) as e:
            logger.error(f"Instance {index} failed: {e}")
            record["error"] = f"{type(e).__name__}: {e}"
        else:
            record.update({
                "blowups": trace.blowup_count,
                "leaves": report.leaf_count,
                "failures": len(report.failures),
                "pullback_mismatches": len(report.pullback_mismatches),
                "nerve_violations": len(report.nerve_violations),
                "unrealized_nerve_sets": len(report.unrealized_nerve_sets),
            })
        records.append(record)
    return pd.DataFrame(records)


def max_count_by_degree(counts: pd.DataFrame) -> pd.Series:
    """
    Largest blow-up count among the (x^a, y^b) with a + b = degree, for the
    degrees whose every pair (a, b) with a, b >= 1 lies inside the table.
    """
    complete = counts[counts["degree"] <= counts["a"].max() + 1]
    return complete.groupby("degree")["blowups"].max()


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(
        level=getattr(logging, os.getenv(ENV_LOG_LEVEL, "INFO").upper(), logging.INFO),
        format=LOG_FORMAT,
    )
    parser = argparse.ArgumentParser(description="Run the principalization acceptance sweeps.")
    parser.add_argument("--out-dir", default="sweeps", help="Directory for the CSV tables.")
    parser.add_argument("--decrease-count", type=int, default=10_000)
    parser.add_argument("--oracle-count", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    # Step 1: (x^a, y^b) table
    counts = monomial_pair_counts()
    counts.to_csv(out_dir / "monomial_pair_counts.csv", index=False)
    by_degree = max_count_by_degree(counts)
    logger.info(f"(x^a, y^b) counts verified: {bool(counts['verified'].all())}; "
                f"max count by degree monotone: {by_degree.is_monotonic_increasing}")

    # Step 2: strict decrease over random nerves
    decrease = strict_decrease_sweep(args.decrease_count, seed=args.seed)
    decrease.to_csv(out_dir / "strict_decrease.csv", index=False)
    violations = int((decrease["violation"] != "").sum())
    logger.info(f"Strict decrease sweep: {len(decrease)} instances, {violations} violation(s), "
                f"max blow-ups {decrease['blowups'].max()}")

    # Step 3: toric oracle replay
    oracle = oracle_sweep(args.oracle_count, seed=args.seed)
    oracle.to_csv(out_dir / "oracle.csv", index=False)
    errors = int((oracle["error"] != "").sum())
    failures = int(oracle["failures"].fillna(0).sum())
    mismatches = int(oracle["pullback_mismatches"].fillna(0).sum())
    logger.info(f"Oracle sweep: {len(oracle)} instances, {failures} non-principal leaves, "
                f"{mismatches} pullback mismatches, {errors} error(s), "
                f"{int(oracle['unrealized_nerve_sets'].fillna(0).sum())} unrealized nerve sets")

    return 0 if violations == 0 and errors == 0 and failures == 0 and mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
