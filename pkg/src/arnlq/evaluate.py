"""Gold-dataset evaluation: run the pipeline, score precision and recall.

A dataset case carries the Arabic question, its bracketed tree, and either a
gold query (written in the generator's SPARQL subset) or null for questions
the system is expected to leave untranslated.  A generated query counts as
correct when its canonical form equals the gold's canonical form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from . import ptree, sparqlgen
from .pipeline import Pipeline


class SchemaError(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(f"case {index}: {message}")
        self.index = index


class CountOrderViolation(ValueError):
    """Counts must satisfy correct <= generated <= total."""


@dataclass(frozen=True)
class DatasetCase:
    id: str
    question: str
    tree: str
    gold_sparql: str | None = None  # None means "expected untranslatable"
    category: str | None = None

    @property
    def supported(self) -> bool:
        return self.gold_sparql is not None


@dataclass
class EvalReport:
    total: int = 0
    generated: int = 0
    correct: int = 0
    precision: float | None = None  # percent, two decimals
    recall: float | None = None
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, ensure_ascii=False, indent=2)

    def format_table(self) -> str:
        def pct(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.2f}%"

        lines = [
            f"{'queries':<28}{self.total}",
            f"{'generated by the system':<28}{self.generated}",
            f"{'correctly generated':<28}{self.correct}",
            f"{'precision':<28}{pct(self.precision)}",
            f"{'recall':<28}{pct(self.recall)}",
        ]
        if self.failures:
            lines.append("failures:")
            for failure in self.failures:
                lines.append(
                    f"  {failure['id']}: [{failure['stage']}] {failure['reason']}"
                )
        return "\n".join(lines)


def _percent(numerator: int, denominator: int) -> float:
    exact = Fraction(numerator * 100, denominator)
    quantized = (Decimal(exact.numerator) / Decimal(exact.denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP
    )
    return float(quantized)


def metrics(correct: int, generated: int, total: int) -> tuple[float | None, float | None]:
    """Precision and recall as percentages rounded to two decimals.

    Precision is null when nothing was generated (and recall when the
    dataset is empty), rather than dividing by zero.
    """
    if not 0 <= correct <= generated <= total:
        raise CountOrderViolation(
            f"need 0 <= correct({correct}) <= generated({generated}) <= total({total})"
        )
    precision = None if generated == 0 else _percent(correct, generated)
    recall = None if total == 0 else _percent(correct, total)
    return precision, recall


def load_dataset(text: str) -> list[DatasetCase]:
    """Parse and validate the JSON dataset; trees and golds must be well-formed."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as error:
        raise SchemaError(f"not valid JSON: {error}", -1) from error
    if not isinstance(raw, list):
        raise SchemaError("dataset must be a JSON array", -1)

    cases = []
    seen_ids: set[str] = set()
    for index, record in enumerate(raw):
        if not isinstance(record, dict):
            raise SchemaError("record must be an object", index)
        for key in ("id", "question", "tree"):
            if not isinstance(record.get(key), str) or not record[key].strip():
                raise SchemaError(f"missing or empty field {key!r}", index)
        case_id = record["id"]
        if case_id in seen_ids:
            raise SchemaError(f"duplicate id {case_id!r}", index)
        seen_ids.add(case_id)
        gold = record.get("gold_sparql")
        if gold is not None and not isinstance(gold, str):
            raise SchemaError("gold_sparql must be a string or null", index)
        try:
            ptree.parse_bracketed(record["tree"])
        except ValueError as error:
            raise SchemaError(f"tree does not parse: {error}", index) from error
        if gold is not None:
            try:
                sparqlgen.canonicalize(gold)
            except sparqlgen.OutOfSubset as error:
                raise SchemaError(f"gold query outside subset: {error}", index) from error
        cases.append(
            DatasetCase(
                id=case_id,
                question=record["question"],
                tree=record["tree"],
                gold_sparql=gold,
                category=record.get("category"),
            )
        )
    return cases


def run_eval(cases: list[DatasetCase], pipeline: Pipeline) -> EvalReport:
    """Translate every case and score it against its gold query.

    Each case lands in exactly one bucket: correct, incorrectly generated, or
    not generated; the latter two are recorded in ``failures``.
    """
    report = EvalReport(total=len(cases))
    for case in sorted(cases, key=lambda c: c.id):
        trace = pipeline.translate_text(case.question, case.tree)
        if trace.sparql is None:
            failure = trace.failure or {"stage": "unknown", "reason": "no query produced"}
            report.failures.append(
                {"id": case.id, "stage": failure["stage"], "reason": failure["reason"]}
            )
            continue
        report.generated += 1
        if case.gold_sparql is None:
            report.failures.append(
                {
                    "id": case.id,
                    "stage": "semantic analysis",
                    "reason": "expected untranslatable, but a query was generated",
                }
            )
            continue
        if sparqlgen.canonicalize(trace.sparql) == sparqlgen.canonicalize(case.gold_sparql):
            report.correct += 1
        else:
            report.failures.append(
                {
                    "id": case.id,
                    "stage": "semantic analysis",
                    "reason": "generated query differs from gold",
                }
            )
    report.precision, report.recall = metrics(
        report.correct, report.generated, report.total
    )
    return report
