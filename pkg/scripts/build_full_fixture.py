#!/usr/bin/env python3
"""Regenerate the campus-wide graph fixture.

Extends the two-location graph to the whole campus: 8 subjects x 6
locations = 48 reportable things, every one fully linked.  Writes
src/civic311/fixtures/full.ttl and then re-parses it as a check.

    python scripts/build_full_fixture.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from civic311.ontology import load_graph, things, validate_store  # noqa: E402

OUT = ROOT / "src" / "civic311" / "fixtures" / "full.ttl"

# subject local name, display label (None: local name serves),
# condition type, remedial action, handling agency
SUBJECTS = [
    ("StreetLight", "Street Light", "Damaged", "Repair", "iiitElectrician"),
    ("Grass", None, "Overgrown", "Cut", "iiitGardener"),
    ("Tree", None, "Fallen", "Remove", "iiitGardener"),
    ("Waste", None, "Accumulated", "Collect", "iiitSweeper"),
    ("Insect", "Insects", "Infestation", "Fumigate", "iiitGuard"),
    ("Smoking", None, "Violation", "Warn", "iiitGuard"),
    ("Noise", None, "Excessive", "Investigate", "iiitGuard"),
    ("Internet", None, "Down", "Restore", "iiitNetworkAdmin"),
]

LOCATIONS = [
    "iiitCC3",
    "iiitBH4",
    "iiitAdminBlock",
    "iiitCafeteria",
    "iiitSportsGround",
    "iiitResidential",
]

# all contact details are synthetic
AGENCIES = [
    ("iiitElectrician", "electrician@iiita.example.edu", "+91-532-0000-101", "IIIT Allahabad Estate Office"),
    ("iiitGardener", "gardener@iiita.example.edu", "+91-532-0000-102", "IIIT Allahabad Estate Office"),
    ("iiitSweeper", "sweeper@iiita.example.edu", "+91-532-0000-103", "IIIT Allahabad Estate Office"),
    ("iiitGuard", "security@iiita.example.edu", "+91-532-0000-104", "IIIT Allahabad Security Office"),
    ("iiitNetworkAdmin", "noc@iiita.example.edu", "+91-532-0000-105", "IIIT Allahabad Network Operations"),
]


def build() -> str:
    lines = [
        "# Campus-wide graph: every (subject, location) combination has one",
        "# reportable thing, linked to its condition, remedial action and",
        "# handling agency.  Generated by scripts/build_full_fixture.py; edit",
        "# the tables there, not this file.  All contact details are synthetic.",
        "",
        "@prefix O3110: <http://ontology.eil.utoronto.ca/open311.owl#> .",
        "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
        "",
        "# locations",
    ]
    for loc in LOCATIONS:
        lines.append(f"O3110:{loc} a O3110:Location .")

    lines += ["", "# report subjects; labels only where the display form differs",
              "# from the local name"]
    for subject, label, _, _, _ in SUBJECTS:
        if label is None:
            lines.append(f"O3110:{subject} a O3110:Subject .")
        else:
            lines.append(f"O3110:{subject} a O3110:Subject ;")
            lines.append(f'    rdfs:label "{label}" .')

    lines += ["", "# condition types"]
    for _, _, type311, _, _ in SUBJECTS:
        lines.append(f"O3110:{type311} a O3110:Type311 .")

    lines += ["", "# remedial actions"]
    for _, _, _, action, _ in SUBJECTS:
        lines.append(f"O3110:{action} a O3110:Action311 .")

    lines += ["", "# handling agencies"]
    for agency, email, phone, body in AGENCIES:
        lines.append(f"O3110:{agency} a O3110:Agency ;")
        lines.append(f'    O3110:contactEmail "{email}" ;')
        lines.append(f'    O3110:contactPhone "{phone}" ;')
        lines.append(f'    O3110:governingBody "{body}" .')

    lines += ["", "# reportable things"]
    for subject, _, type311, action, agency in SUBJECTS:
        for loc in LOCATIONS:
            suffix = loc.removeprefix("iiit")
            lines += [
                f"O3110:Thing_{subject}_{suffix} a O3110:Open311Thing ;",
                f"    O3110:hasAddress O3110:{loc} ;",
                f"    O3110:has311Subject O3110:{subject} ;",
                f"    O3110:has311Type O3110:{type311} ;",
                f"    O3110:need311Action O3110:{action} ;",
                f"    O3110:isHandledBy O3110:{agency} .",
                "",
            ]
    return "\n".join(lines).rstrip() + "\n"


def main() -> int:
    text = build()
    store = load_graph(text)
    count = len(things(store))
    violations = validate_store(store)
    if count != len(SUBJECTS) * len(LOCATIONS) or violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        print(f"refusing to write: {count} things, {len(violations)} violations", file=sys.stderr)
        return 1
    OUT.write_text(text, encoding="utf-8")
    print(f"wrote {OUT} ({count} things, {len(store)} triples)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
