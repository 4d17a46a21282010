#!/usr/bin/env python3
"""Score the pipeline against the bundled gold dataset and print the table.

Usage: python scripts/run_eval.py [--report out.json]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from arnlq import evaluate
from arnlq.pipeline import Pipeline, PipelineConfig, default_data_path


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dataset", default=str(default_data_path("gold_cases.json")))
    parser.add_argument("--ontology", default=str(default_data_path("diseases.nt")))
    parser.add_argument("--report", help="also write the JSON report here")
    args = parser.parse_args()

    pipeline = Pipeline.from_config(PipelineConfig(ontology=Path(args.ontology)))
    cases = evaluate.load_dataset(Path(args.dataset).read_text(encoding="utf-8"))
    report = evaluate.run_eval(cases, pipeline)
    print(report.format_table())
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
        print(f"\nreport written to {args.report}")


if __name__ == "__main__":
    main()
