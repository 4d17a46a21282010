import pytest

from arnlq import evaluate, ontostore
from arnlq.artext import StopWordList
from arnlq.pipeline import Pipeline, PipelineConfig, default_data_path
from arnlq.ptree import parse_bracketed


@pytest.fixture(scope="session")
def diseases_text():
    return default_data_path("diseases.nt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def diseases_store(diseases_text):
    return ontostore.infer_closure(ontostore.load_ntriples(diseases_text))


@pytest.fixture(scope="session")
def stopwords():
    return StopWordList.from_file(default_data_path("stopwords.txt"))


@pytest.fixture(scope="session")
def lexicon():
    return ontostore.SynonymLexicon.from_file(default_data_path("synonyms.tsv"))


@pytest.fixture(scope="session")
def dictionary(diseases_store, lexicon, stopwords):
    return ontostore.build_dictionary(diseases_store, lexicon, stopwords)


@pytest.fixture(scope="session")
def pipeline():
    config = PipelineConfig(ontology=default_data_path("diseases.nt"))
    return Pipeline.from_config(config)


@pytest.fixture(scope="session")
def geo_pipeline():
    config = PipelineConfig(ontology=default_data_path("geography.nt"))
    return Pipeline.from_config(config)


@pytest.fixture(scope="session")
def gold_cases():
    text = default_data_path("gold_cases.json").read_text(encoding="utf-8")
    return evaluate.load_dataset(text)


@pytest.fixture(scope="session")
def case_by_id(gold_cases):
    return {case.id: case for case in gold_cases}


@pytest.fixture(scope="session")
def fig3_tree(case_by_id):
    return parse_bracketed(case_by_id["fig3-gout-cure"].tree)


@pytest.fixture(scope="session")
def fig4_tree(case_by_id):
    return parse_bracketed(case_by_id["fig4-conjunction"].tree)


@pytest.fixture(scope="session")
def union_tree(case_by_id):
    return parse_bracketed(case_by_id["union-heart-or-lung"].tree)
