"""End-to-end translation pipeline and its per-stage trace.

Wires the stages together: phrase extraction over the parse tree, relation
words via LCA paths, dictionary matching, schema completion, domain/range
validation, chooser resolution, then target/modifier interpretation and
SPARQL emission.  The trace records each stage's output so a translation can
be audited or replayed, and failed translations carry the stage that gave up
(parsing / entity identification / semantic analysis).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import artext, mapper, npx, ontostore, ptree, sparqlgen

STAGE_PARSING = "parsing"
STAGE_ENTITY = "entity identification"
STAGE_SEMANTIC = "semantic analysis"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNTRANSLATED = 2


def default_data_path(name: str) -> Path:
    return Path(resources.files("arnlq").joinpath("data", name))  # type: ignore[arg-type]


class ConfigError(ValueError):
    """A configured file is missing or does not parse."""


class TranslationFailure(Exception):
    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


@dataclass
class PipelineConfig:
    ontology: Path
    synonyms: Path | None = None
    stopwords: Path | None = None
    question_words: Path | None = None
    order_words: Path | None = None
    prefixes: Path | None = None
    lang_tags: tuple[str, ...] = ("ar", "")
    chooser_mode: str = "BATCH"  # BATCH | INTERACTIVE
    parser_cmd: str | None = None  # external parser: query on stdin, tree on stdout

    def resolved(self) -> "PipelineConfig":
        return PipelineConfig(
            ontology=Path(self.ontology),
            synonyms=Path(self.synonyms) if self.synonyms else default_data_path("synonyms.tsv"),
            stopwords=Path(self.stopwords) if self.stopwords else default_data_path("stopwords.txt"),
            question_words=Path(self.question_words)
            if self.question_words
            else default_data_path("question_words.txt"),
            order_words=Path(self.order_words)
            if self.order_words
            else default_data_path("order_words.txt"),
            prefixes=Path(self.prefixes) if self.prefixes else default_data_path("prefixes.json"),
            lang_tags=self.lang_tags,
            chooser_mode=self.chooser_mode,
            parser_cmd=self.parser_cmd,
        )


def _load_word_list(path: Path) -> set[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(artext.normalize(line))
    return words


@dataclass
class TranslationTrace:
    query: str
    tokens: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    nps: list[dict] = field(default_factory=list)
    intermediate_triples: list[dict] = field(default_factory=list)
    candidates: list[list[dict]] = field(default_factory=list)
    resolved: list[dict] = field(default_factory=list)
    target: dict | None = None
    modifiers: list[dict] = field(default_factory=list)
    unsupported: list[dict] = field(default_factory=list)
    sparql: str | None = None
    failure: dict | None = None

    @property
    def succeeded(self) -> bool:
        return self.sparql is not None

    def to_json(self) -> str:
        return json.dumps(self.__dict__, ensure_ascii=False, indent=2)

    def format_human(self) -> str:
        lines = [f"query: {self.query}"]
        for warning in self.warnings:
            lines.append(f"warning: {warning}")
        lines.append("noun phrases:")
        for np in self.nps:
            lines.append(
                f"  [{np['preorder_pos']}] {' '.join(np['tokens'])}"
                f"  (head: {np['head']})"
            )
        lines.append("intermediate triples:")
        for it in self.intermediate_triples:
            pred = " ".join(it["predicate_tokens"]) or "null"
            origin = f" ({it['conjunction_origin']})" if it["conjunction_origin"] else ""
            lines.append(f"  <{it['subject']} | {pred} | {it['object']}>{origin}")
        lines.append("rdf triples:")
        for triple in self.resolved:
            completed = " (completed)" if triple["completed"] else ""
            lines.append(
                f"  <{triple['subject']}, {triple['predicate']}, {triple['object']}>{completed}"
            )
        if self.target:
            lines.append(f"target: {self.target['surface']} -> {self.target['term']}")
        if self.modifiers:
            kinds = ", ".join(f"{m['kind']}({m['trigger_token']})" for m in self.modifiers)
            lines.append(f"modifiers: {kinds}")
        if self.sparql is not None:
            lines.append("sparql:")
            lines.extend("  " + line for line in self.sparql.splitlines())
        if self.failure:
            lines.append(f"failed at {self.failure['stage']}: {self.failure['reason']}")
        return "\n".join(lines)


def _np_dict(np: npx.NounPhrase) -> dict:
    return {
        "preorder_pos": np.preorder_pos,
        "tokens": list(np.tokens),
        "premodifiers": list(np.premodifiers),
        "head": np.head,
        "postmodifiers": list(np.postmodifiers),
    }


def _candidate_dict(candidate: mapper.CandidateRdfTriple) -> dict:
    def part(p: mapper.TriplePart) -> dict:
        return {
            "state": p.state,
            "value": p.describe(),
            "tier": p.tier.name if p.tier is not None else None,
        }

    return {
        "subject": part(candidate.subject),
        "predicate": part(candidate.predicate),
        "object": part(candidate.object),
        "completion_penalty": candidate.completion_penalty,
        "valid": candidate.valid,
    }


class Pipeline:
    """Loaded resources plus the translate loop; safe for repeated use."""

    def __init__(
        self,
        store: ontostore.OntologyStore,
        dictionary: ontostore.OntologicalDictionary,
        stopwords: artext.StopWordList,
        question_words: set[str],
        order_words: set[str],
        prefixes: dict[str, str],
        chooser: mapper.ChooserContract,
    ):
        self.store = store
        self.dictionary = dictionary
        self.stopwords = stopwords
        self.question_words = question_words
        self.order_words = order_words
        self.prefixes = prefixes
        self.chooser = chooser

    @classmethod
    def from_config(
        cls, config: PipelineConfig, chooser: mapper.ChooserContract | None = None
    ) -> "Pipeline":
        config = config.resolved()
        for name in ("ontology", "synonyms", "stopwords", "question_words", "order_words", "prefixes"):
            path: Path = getattr(config, name)
            if not path.is_file():
                raise ConfigError(f"{name} file not found: {path}")
        try:
            store = ontostore.load_ntriples(config.ontology.read_text(encoding="utf-8"))
        except ontostore.NTriplesSyntaxError as error:
            raise ConfigError(f"ontology {config.ontology}: {error}") from error
        store = ontostore.infer_closure(store)
        lexicon = ontostore.SynonymLexicon.from_file(config.synonyms)
        stopwords = artext.StopWordList.from_file(config.stopwords)
        dictionary = ontostore.build_dictionary(
            store, lexicon, stopwords, lang_tags=config.lang_tags
        )
        try:
            prefixes = json.loads(config.prefixes.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ConfigError(f"prefixes {config.prefixes}: {error}") from error
        if chooser is None:
            if config.chooser_mode != "BATCH":
                raise ConfigError(
                    f"chooser mode {config.chooser_mode!r} needs an explicit chooser"
                )
            chooser = mapper.BatchChooser()
        return cls(
            store,
            dictionary,
            stopwords,
            _load_word_list(config.question_words),
            _load_word_list(config.order_words),
            prefixes,
            chooser,
        )

    # -- stages ------------------------------------------------------------

    def _check_tokens(self, query: str, tree: ptree.ParseTree, trace: TranslationTrace) -> None:
        # Segmentation differs between raw text and tree leaves (clitics,
        # punctuation), so compare the whitespace-free character streams.
        leaf_text = "".join(leaf.token or "" for leaf in tree.leaves)
        query_text = "".join(query.split())
        if leaf_text != query_text:
            trace.warnings.append("tree leaves do not spell out the question text")

    def _lookup_entity(self, np: npx.NounPhrase):
        prepared = artext.strip_stopwords(
            artext.normalize_tokens(np.head_tokens), self.stopwords
        )
        for match in ontostore.lookup(self.dictionary, prepared):
            if match.term.kind in (ontostore.CLASS, ontostore.INSTANCE):
                return match
        return None

    def _resolve_triple(
        self, it: npx.IntermediateTriple, trace: TranslationTrace
    ) -> mapper.CandidateRdfTriple:
        candidates = mapper.match_candidates(it, self.dictionary, self.stopwords)
        expanded: list[mapper.CandidateRdfTriple] = []
        for candidate in candidates:
            missing = candidate.missing_count()
            if missing == 0:
                expanded.append(candidate)
            elif missing == 1:
                expanded.extend(mapper.complete_triple(candidate, self.store))
            else:
                raise TranslationFailure(
                    STAGE_ENTITY,
                    f"no part of {it.describe()} matches the ontology",
                )
        if not expanded:
            raise TranslationFailure(
                STAGE_ENTITY, f"no completion found for {it.describe()}"
            )
        for candidate in expanded:
            candidate.valid = mapper.validate_triple(candidate, self.store)
        trace.candidates.append([_candidate_dict(c) for c in expanded])
        try:
            chosen = mapper.resolve(expanded, self.chooser, context=it.describe())
        except mapper.NoValidTriple as error:
            raise TranslationFailure(STAGE_ENTITY, str(error)) from error
        return chosen

    def translate(self, query: str, tree: ptree.ParseTree) -> TranslationTrace:
        trace = TranslationTrace(query=query, tokens=[l.token or "" for l in tree.leaves])
        try:
            self._run(query, tree, trace)
        except TranslationFailure as failure:
            trace.failure = {"stage": failure.stage, "reason": failure.reason}
        return trace

    def _run(self, query: str, tree: ptree.ParseTree, trace: TranslationTrace) -> None:
        self._check_tokens(query, tree, trace)

        unsupported = sparqlgen.find_unsupported_modifiers(tree)
        trace.unsupported = [
            {"token": u.token, "position": u.position} for u in unsupported
        ]
        if unsupported:
            tokens = ", ".join(u.token for u in unsupported)
            raise TranslationFailure(
                STAGE_SEMANTIC, f"unsupported comparative/superlative modifier: {tokens}"
            )

        try:
            nps = [npx.split_head_modifiers(np) for np in npx.extract_nps(tree)]
        except npx.NoNounPhrases as error:
            raise TranslationFailure(STAGE_ENTITY, str(error)) from error
        except npx.NoHeadFound as error:
            raise TranslationFailure(STAGE_ENTITY, str(error)) from error
        trace.nps = [_np_dict(np) for np in nps]

        triples = npx.build_intermediate_triples(tree, nps)
        trace.intermediate_triples = [
            {
                "subject": it.subject.surface,
                "predicate_tokens": list(it.predicate_tokens),
                "object": it.object.surface,
                "conjunction_origin": it.conjunction_origin,
            }
            for it in triples
        ]

        modifiers = sparqlgen.extract_modifiers(tree)
        trace.modifiers = [
            {"kind": m.kind, "trigger_token": m.trigger_token, "position": m.position}
            for m in modifiers
        ]

        try:
            target = sparqlgen.extract_target(
                tree, nps, self.question_words, self.order_words
            )
        except sparqlgen.NoTargetFound as error:
            raise TranslationFailure(STAGE_SEMANTIC, str(error)) from error
        target_match = self._lookup_entity(target.np)
        if target_match is None:
            raise TranslationFailure(
                STAGE_ENTITY,
                f"target {target.np.surface!r} matches no ontology class or instance",
            )
        target.term = target_match.term
        trace.target = {
            "surface": target.np.surface,
            "head": target.np.head,
            "term": target.term.iri,
            "tier": target_match.tier.name,
        }

        resolved = [self._resolve_triple(it, trace) for it in triples]
        trace.resolved = [
            {
                "subject": c.subject.describe(),
                "predicate": c.predicate.describe(),
                "object": c.object.describe(),
                "completed": c.completion_penalty > 0,
            }
            for c in resolved
        ]

        try:
            built = sparqlgen.build_query(resolved, target, modifiers)
        except sparqlgen.TargetUnmatched as error:
            raise TranslationFailure(STAGE_SEMANTIC, str(error)) from error
        trace.sparql = sparqlgen.serialize(built, self.prefixes)

    def translate_text(self, query: str, tree_text: str) -> TranslationTrace:
        """Convenience wrapper that also charges tree-parse errors to parsing."""
        trace = TranslationTrace(query=query)
        try:
            tree = ptree.parse_bracketed(tree_text)
        except (ptree.EmptyInput, ptree.UnbalancedBrackets, ptree.LeafWithoutToken) as error:
            trace.failure = {"stage": STAGE_PARSING, "reason": str(error)}
            return trace
        return self.translate(query, tree)
