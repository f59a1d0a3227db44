"""Run the U^p_q search, write the certificate, and replay it.

    python3 scripts/run_search.py --p 3 --max-q 2 --out cert_p3.json
"""

import argparse
import json
import time
from dataclasses import dataclass

from grassfold.grassmann import SearchBudget, search_u, verify_certificate


@dataclass
class RunConfig:
    p: int = 2
    max_q: int | None = None
    seed: int = 0
    out: str = "certificate.json"


def parse() -> RunConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=RunConfig.p)
    ap.add_argument("--max-q", type=int, default=None)
    ap.add_argument("--seed", type=int, default=RunConfig.seed)
    ap.add_argument("--out", default=RunConfig.out)
    a = ap.parse_args()
    return RunConfig(a.p, a.max_q, a.seed, a.out)


def main():
    cfg = parse()
    start = time.perf_counter()
    doc = search_u(cfg.p, SearchBudget(max_q=cfg.max_q), seed=cfg.seed)
    built = time.perf_counter() - start
    with open(cfg.out, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    for q, level in enumerate(doc["levels"]):
        fiber = level.get("fiber") or {}
        print(f"q={q}: {len(level['excluded'])} exclusions, fiber factors {fiber.get('factors')}")
    start = time.perf_counter()
    problems = verify_certificate(doc)
    print(f"complete={doc['complete']} built in {built:.1f}s, replayed in {time.perf_counter() - start:.1f}s")
    print("verified" if not problems else "\n".join(problems))


if __name__ == "__main__":
    main()
