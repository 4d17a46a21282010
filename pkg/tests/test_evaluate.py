import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arnlq.evaluate import (
    CountOrderViolation,
    SchemaError,
    load_dataset,
    metrics,
    run_eval,
)


class TestMetrics:
    def test_geography_corpus_counts(self):
        assert metrics(514, 638, 877) == (80.56, 58.61)

    def test_diseases_corpus_counts(self):
        assert metrics(31, 39, 45) == (79.49, 68.89)

    def test_nothing_generated(self):
        assert metrics(0, 0, 10) == (None, 0.0)

    def test_half(self):
        assert metrics(5, 10, 10) == (50.0, 50.0)

    def test_count_order_violation(self):
        with pytest.raises(CountOrderViolation):
            metrics(5, 3, 10)
        with pytest.raises(CountOrderViolation):
            metrics(1, 2, 1)

    @given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 500))
    def test_precision_at_least_recall(self, a, b, c):
        correct, generated, total = sorted((a, b, c))
        precision, recall = metrics(correct, generated, total)
        if precision is not None and recall is not None:
            assert precision >= recall


class TestLoadDataset:
    def test_bundled_dataset(self, gold_cases):
        assert len(gold_cases) >= 15
        supported = [c for c in gold_cases if c.supported]
        assert len(supported) >= 10
        assert any(c.category == "negation" for c in gold_cases)
        assert any(c.category == "disjunction" for c in gold_cases)
        assert any(c.category == "superlative-unsupported" for c in gold_cases)

    def test_empty_array(self):
        assert load_dataset("[]") == []

    def test_duplicate_id(self):
        record = {
            "id": "same",
            "question": "س",
            "tree": "(NP (NN س))",
            "gold_sparql": None,
        }
        with pytest.raises(SchemaError):
            load_dataset(json.dumps([record, record]))

    def test_bad_tree(self):
        record = {"id": "x", "question": "س", "tree": "(NP (NN"}
        with pytest.raises(SchemaError) as err:
            load_dataset(json.dumps([record]))
        assert err.value.index == 0

    def test_gold_outside_subset(self):
        record = {
            "id": "x",
            "question": "س",
            "tree": "(NP (NN س))",
            "gold_sparql": "SELECT ?t WHERE { ?t :p :o . } LIMIT 3",
        }
        with pytest.raises(SchemaError):
            load_dataset(json.dumps([record]))

    def test_missing_field(self):
        with pytest.raises(SchemaError):
            load_dataset(json.dumps([{"id": "x", "question": "س"}]))

    def test_not_json(self):
        with pytest.raises(SchemaError):
            load_dataset("{not json")


class TestRunEval:
    def test_bundled_gold_set(self, gold_cases, pipeline):
        report = run_eval(gold_cases, pipeline)
        supported = sum(1 for c in gold_cases if c.supported)
        assert report.total == len(gold_cases)
        assert report.generated == supported
        assert report.correct == supported
        assert report.precision == 100.0
        failed_ids = {f["id"] for f in report.failures}
        assert failed_ids == {c.id for c in gold_cases if not c.supported}

    def test_unsupported_cases_tagged(self, gold_cases, pipeline):
        report = run_eval(gold_cases, pipeline)
        by_id = {f["id"]: f for f in report.failures}
        assert by_id["superlative-unsupported"]["stage"] == "semantic analysis"
        assert "unsupported" in by_id["superlative-unsupported"]["reason"]
        assert by_id["cost-unknown-entity"]["stage"] == "entity identification"

    def test_deterministic(self, gold_cases, pipeline):
        one = run_eval(gold_cases, pipeline)
        two = run_eval(gold_cases, pipeline)
        assert one.__dict__ == two.__dict__

    def test_every_case_in_one_bucket(self, gold_cases, pipeline):
        report = run_eval(gold_cases, pipeline)
        assert report.correct + len(report.failures) == report.total

    def test_report_formats(self, gold_cases, pipeline):
        report = run_eval(gold_cases, pipeline)
        table = report.format_table()
        assert "precision" in table and "recall" in table
        parsed = json.loads(report.to_json())
        assert parsed["total"] == report.total
