"""Tally the exact invariance suite under each theta rule."""

import argparse
import json

from superhyp import minkowski as mk
from superhyp.suite import SuiteConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--gens", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for rule in mk.THETA_RULES:
        rep = run_suite("verify-invariance", SuiteConfig(args.gens, args.seed, args.trials, rule))
        failing = {k: v.failed for k, v in {**rep.checks, **rep.claims}.items() if v.failed}
        print(f"{rule:>9}: {'ok' if rep.ok else 'counterexample'}  failures={json.dumps(failing)}")


if __name__ == "__main__":
    main()
