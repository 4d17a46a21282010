#!/usr/bin/env python3
"""Translate a handful of bundled example questions and show the stage traces.

Usage: python scripts/demo_translate.py [case-id ...]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from arnlq import evaluate
from arnlq.pipeline import Pipeline, PipelineConfig, default_data_path

DEFAULT_CASES = [
    "fig3-gout-cure",
    "fig4-conjunction",
    "union-heart-or-lung",
    "negation-antibiotics",
    "superlative-unsupported",
]


def main():
    wanted = sys.argv[1:] or DEFAULT_CASES
    pipeline = Pipeline.from_config(
        PipelineConfig(ontology=default_data_path("diseases.nt"))
    )
    cases = {
        case.id: case
        for case in evaluate.load_dataset(
            default_data_path("gold_cases.json").read_text(encoding="utf-8")
        )
    }
    for case_id in wanted:
        if case_id not in cases:
            print(f"unknown case {case_id!r}; known: {', '.join(sorted(cases))}")
            continue
        case = cases[case_id]
        trace = pipeline.translate_text(case.question, case.tree)
        print("=" * 72)
        print(trace.format_human())
        print()


if __name__ == "__main__":
    main()
