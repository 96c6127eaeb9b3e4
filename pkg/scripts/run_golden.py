#!/usr/bin/env python3
"""Build the golden fixture, run every construction, and print the report.

Usage: python scripts/run_golden.py [--save path.json]
"""

import argparse
import sys

from modfactor.cstar import block_decomposition
from modfactor.harness import golden_instance, run_verification, save_instance
from modfactor.hilbmod import dual_qons_family, finite_rank_algebra, quasi_orthonormal_system


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--save", default=None, help="also write the fixture JSON here")
    args = ap.parse_args()

    inst = golden_instance()
    if args.save:
        save_instance(inst, args.save)
        print(f"fixture written to {args.save}")

    E = inst.E
    K = finite_rank_algebra(E)
    print(f"module dimension {E.dim} inside B({E.dim_G}, {E.dim_H})")
    print(f"finite-rank algebra dimension {K.dim}, blocks {block_decomposition(K)}")
    qons = quasi_orthonormal_system(E)
    print(f"quasi-orthonormal system of size {len(qons)}, residual {qons.residual:.2e}")
    family = dual_qons_family(E)
    print(f"dual-side family of size {len(family)}")
    print()

    report = run_verification(inst)
    sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
