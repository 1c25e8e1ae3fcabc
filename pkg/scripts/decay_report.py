#!/usr/bin/env python3
"""Print the built-in decay models as a table of predictions over a range
of ages, plus the implied ages at common loss percentages.

Usage:
    python3 scripts/decay_report.py [--max-days 1500] [--step 100] [--csv]
"""

import argparse
import csv
import sys

from webrot.decay import BUILTIN_MODELS, invert, predict


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-days", type=int, default=1500)
    parser.add_argument("--step", type=int, default=100)
    parser.add_argument("--csv", action="store_true",
                        help="emit CSV instead of an aligned table")
    args = parser.parse_args()

    models = sorted(BUILTIN_MODELS.items(), key=lambda kv: kv[0].value)
    ages = range(0, args.max_days + 1, args.step)

    header = ["age_days"] + [label.value for label, _ in models]
    rows = [
        [age] + [round(predict(model, age), 2) for _, model in models]
        for age in ages
    ]

    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        widths = [max(len(str(h)), 8) for h in header]
        print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for row in rows:
            print("  ".join(str(v).rjust(w) for v, w in zip(row, widths)))
        print()
        print("implied age (days) at given percentage:")
        for pct in (10, 25, 50):
            parts = []
            for label, model in models:
                if model.slope > 0:
                    parts.append(f"{label.value}={invert(model, pct):.0f}")
            print(f"  {pct}%: " + "  ".join(parts))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
