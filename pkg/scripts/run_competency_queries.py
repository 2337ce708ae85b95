#!/usr/bin/env python3
"""Run the four competency queries and print their result tables.

Each query exercises one question the graph must be able to answer:

  1. who handles a given subject at a given location, and how
  2. what one agency deals with (duplicates preserved, one per record)
  3. who serves a given location
  4. where a given subject is handled, and by whom

The default fixture is the two-location graph whose tables are small
enough to eyeball; --fixture full runs the same queries at full scale.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from civic311.cli import render_term
from civic311.nlq import build_cq1, build_cq2, build_cq3, build_cq4
from civic311.ontology import o3110, resolve_fixture
from civic311.sparql import run_query


def show(store, title: str, query: str) -> None:
    print(f"== {title}")
    print(query.strip())
    print()
    table = run_query(store, query)
    print("\t".join(f"?{c}" for c in table.columns))
    for row in table.rows:
        print("\t".join(render_term(store, cell) for cell in row))
    print(f"({len(table.rows)} row{'s' if len(table.rows) != 1 else ''})")
    print()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--fixture",
        default="replica",
        help="packaged graph name (replica, full) or a path to a .ttl file",
    )
    args = parser.parse_args()
    store = resolve_fixture(args.fixture)

    show(
        store,
        "CQ-1: who handles Grass at iiitCC3, and what do they do",
        build_cq1(o3110("iiitCC3"), o3110("Grass")),
    )
    show(
        store,
        "CQ-2: what iiitElectrician deals with",
        build_cq2(o3110("iiitElectrician")),
    )
    show(store, "CQ-3: who serves iiitCC3", build_cq3(o3110("iiitCC3")))
    show(store, "CQ-4: where Grass is handled", build_cq4(o3110("Grass")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
