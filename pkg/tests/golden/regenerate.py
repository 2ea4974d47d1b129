"""Record the pilot runs that the trend and decay checks compare against.

Run from the repository root:  python3 tests/golden/regenerate.py

Only rerun this when a deliberate change alters the recorded numbers, and
review the diff of the JSON files before committing them.
"""

import json
from pathlib import Path

from matrix_equidist import experiments as ex

HERE = Path(__file__).resolve().parent

LEMMA_RUNS = {
    # file stem: (lemma, n, primes)
    "lemma_L1_n2": ("L1", 2, [3, 5, 7, 11, 13]),
    "lemma_L2_n2": ("L2", 2, [3, 5, 7, 11, 13]),
    "lemma_R2_n2": ("R2", 2, [3, 5, 7, 11, 13]),
    "lemma_S4_n3": ("S4", 3, [3, 5]),
}
SAMPLES, SEED = 50, 0

DECAY_RUNS = {
    "decay_g": ("g", [11, 19, 31]),
    "decay_h": ("h", [11, 19, 31, 61]),
    "decay_s": ("s", [11, 19, 31, 61]),
}


def _write(name, obj):
    (HERE / f"{name}.json").write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def main():
    for stem, (lemma, n, primes) in LEMMA_RUNS.items():
        rep = ex.verify_lemma_bounds(lemma, n, primes, SAMPLES, SEED)
        _write(stem, ex.golden_from_report(rep))
        print(stem, "done")
    for stem, (emb, primes) in DECAY_RUNS.items():
        k = ex.Embedding.parse(emb).dim(2)
        rep = ex.theorem_scan(emb, 2, primes, ex.decay_region(k))
        _write(stem, {"embedding": emb, "n": 2, "p": primes,
                      "error": [r["error"] for r in rep["records"]],
                      "count": [r["count"] for r in rep["records"]]})
        print(stem, "done")


if __name__ == "__main__":
    main()
