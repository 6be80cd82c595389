"""Run the acceptance checks outside pytest and print one line per check.

    python scripts/run_acceptance.py          # all nine
    python scripts/run_acceptance.py 5 6      # a subset
"""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from test_acceptance import CHECKS  # noqa: E402


def main(argv):
    which = [int(a) for a in argv] or range(1, len(CHECKS) + 1)
    results = [CHECKS[n - 1]() for n in which]
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
