"""Turn intermediate triples into RDF triples against the ontology.

Heads of the subject/object phrases match classes and instances; the
connecting words match properties.  A triple with one unmatched part is
completed from the schema; every candidate is then checked against the
property's domain and range, and whatever ambiguity survives validation is
settled by a chooser (a non-interactive policy for batch runs, a human prompt
in the REPL).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .artext import StopWordList, normalize_tokens, strip_stopwords
from .npx import IntermediateTriple
from .ontostore import (
    ANY_CLASS,
    CLASS,
    DATATYPE_PROPERTY,
    INSTANCE,
    LITERAL_CLASS,
    OBJECT_PROPERTY,
    OntologicalDictionary,
    OntologyStore,
    Term,
    Tier,
    lookup,
    schema_statements,
)

MATCHED = "MATCHED"
LITERAL = "LITERAL"
MISSING = "MISSING"


class TooManyMissing(ValueError):
    """Completion needs exactly one unknown part."""


class NoValidTriple(ValueError):
    """No candidate survived validation, or ambiguity could not be settled."""


@dataclass(frozen=True)
class TriplePart:
    state: str  # MATCHED | LITERAL | MISSING
    term: Term | None = None
    text: str = ""
    tier: Tier | None = None

    @classmethod
    def matched(cls, term: Term, tier: Tier) -> "TriplePart":
        return cls(MATCHED, term, term.iri, tier)

    @classmethod
    def completed(cls, term: Term) -> "TriplePart":
        # No lexical evidence backs a completed part, so it carries no tier.
        return cls(MATCHED, term, term.iri, None)

    @classmethod
    def literal(cls, text: str) -> "TriplePart":
        return cls(LITERAL, None, text)

    @classmethod
    def missing(cls) -> "TriplePart":
        return cls(MISSING)

    @property
    def is_matched(self) -> bool:
        return self.state == MATCHED

    @property
    def is_literal(self) -> bool:
        return self.state == LITERAL

    @property
    def is_missing(self) -> bool:
        return self.state == MISSING

    def describe(self) -> str:
        if self.is_matched:
            return self.term.iri  # type: ignore[union-attr]
        if self.is_literal:
            return f'"{self.text}"'
        return "∅"


@dataclass(eq=False)
class CandidateRdfTriple:
    subject: TriplePart
    predicate: TriplePart
    object: TriplePart
    completion_penalty: int = 0
    valid: bool = False
    source: IntermediateTriple | None = None

    def parts(self) -> tuple[TriplePart, TriplePart, TriplePart]:
        return (self.subject, self.predicate, self.object)

    def missing_count(self) -> int:
        return sum(1 for part in self.parts() if part.is_missing)

    def score_key(self) -> tuple[int, int, tuple[str, str, str]]:
        """Total order: weakest matched tier, completion penalty, then IRIs."""
        tiers = [int(part.tier) for part in self.parts() if part.tier is not None]
        worst = max(tiers) if tiers else int(Tier.SKELETON) + 1
        iris = tuple(part.describe() for part in self.parts())
        return (worst, self.completion_penalty, iris)

    def semantic_score(self) -> tuple[int, int]:
        return self.score_key()[:2]

    def describe(self) -> str:
        return (
            f"<{self.subject.describe()}, {self.predicate.describe()}, "
            f"{self.object.describe()}>"
        )


# A chooser receives (question context, valid candidates sorted best-first)
# and returns the index of the candidate to use.  It may raise NoValidTriple
# to abandon the triple instead.
ChooserContract = Callable[[str, list[CandidateRdfTriple]], int]


class BatchChooser:
    """Non-interactive policy: best score wins, a genuine tie is a failure."""

    def __call__(self, context: str, candidates: list[CandidateRdfTriple]) -> int:
        if candidates[0].semantic_score() == candidates[1].semantic_score():
            readings = ", ".join(c.describe() for c in candidates)
            raise NoValidTriple(f"ambiguous readings ({readings}) for: {context}")
        return 0


def _prepare(tokens: list[str], stopwords: StopWordList) -> list[str]:
    return strip_stopwords(normalize_tokens(tokens), stopwords)


def _top_match(dictionary: OntologicalDictionary, tokens: list[str], kinds: set[str]):
    for match in lookup(dictionary, tokens):
        if match.term.kind in kinds:
            return match
    return None


def match_candidates(
    it: IntermediateTriple,
    dictionary: OntologicalDictionary,
    stopwords: StopWordList,
) -> list[CandidateRdfTriple]:
    """All pre-validation readings of an intermediate triple.

    One candidate per matching property (ambiguous connecting words yield
    several); subject and object take their single best class/instance match.
    """
    entity_kinds = {CLASS, INSTANCE}
    property_kinds = {OBJECT_PROPERTY, DATATYPE_PROPERTY}

    subject_match = _top_match(dictionary, _prepare(it.subject.head_tokens, stopwords), entity_kinds)
    object_match = _top_match(dictionary, _prepare(it.object.head_tokens, stopwords), entity_kinds)
    predicate_tokens = _prepare(it.predicate_tokens, stopwords)
    predicate_matches = [
        m for m in lookup(dictionary, predicate_tokens) if m.term.kind in property_kinds
    ]

    subject = (
        TriplePart.matched(subject_match.term, subject_match.tier)
        if subject_match
        else TriplePart.missing()
    )

    candidates = []
    if predicate_matches:
        for pred in predicate_matches:
            if object_match:
                obj = TriplePart.matched(object_match.term, object_match.tier)
            elif pred.term.kind == DATATYPE_PROPERTY:
                obj = TriplePart.literal(it.object.surface)
            else:
                obj = TriplePart.missing()
            candidates.append(
                CandidateRdfTriple(
                    subject, TriplePart.matched(pred.term, pred.tier), obj, source=it
                )
            )
    else:
        obj = (
            TriplePart.matched(object_match.term, object_match.tier)
            if object_match
            else TriplePart.missing()
        )
        candidates.append(
            CandidateRdfTriple(subject, TriplePart.missing(), obj, source=it)
        )
    return candidates


def match_intermediate(
    it: IntermediateTriple,
    dictionary: OntologicalDictionary,
    stopwords: StopWordList | None = None,
) -> CandidateRdfTriple:
    """The single best pre-validation reading (first by score)."""
    candidates = match_candidates(it, dictionary, stopwords or StopWordList())
    return min(candidates, key=CandidateRdfTriple.score_key)


def _part_classes(part: TriplePart, store: OntologyStore) -> set[str]:
    """Classes a matched part can stand for: itself if a class, else its types."""
    term = part.term
    if term is None:
        return set()
    if term.kind == CLASS:
        return {term.iri}
    return store.classes_of(term.iri)


def _agrees_with_class(part: TriplePart, class_iri: str, store: OntologyStore) -> bool:
    if class_iri == ANY_CLASS:
        return True
    if class_iri == LITERAL_CLASS:
        return part.is_literal
    if part.is_literal:
        return False
    return any(
        store.is_subclass_or_equal(c, class_iri) for c in _part_classes(part, store)
    )


def complete_triple(
    candidate: CandidateRdfTriple, store: OntologyStore
) -> list[CandidateRdfTriple]:
    """Fill the single missing part from schema statements that agree.

    Agreement is up to subclassing; a completed subject or object becomes the
    schema statement's class itself.  Returns one candidate per distinct
    completion, each carrying a completion penalty.
    """
    missing = candidate.missing_count()
    if missing != 1:
        raise TooManyMissing(f"{missing} parts missing in {candidate.describe()}")

    completions: list[CandidateRdfTriple] = []
    seen: set[str] = set()
    for stmt in schema_statements(store):
        prop = store.terms[stmt.predicate]
        if candidate.predicate.is_missing:
            if not _agrees_with_class(candidate.subject, stmt.subject, store):
                continue
            if not _agrees_with_class(candidate.object, str(stmt.object), store):
                continue
            if prop.iri in seen:
                continue
            seen.add(prop.iri)
            filled = replace_part(candidate, "predicate", TriplePart.completed(prop))
        elif candidate.subject.is_missing:
            if prop.iri != candidate.predicate.term.iri:  # type: ignore[union-attr]
                continue
            if not _agrees_with_class(candidate.object, str(stmt.object), store):
                continue
            if stmt.subject == ANY_CLASS or stmt.subject in seen:
                continue
            seen.add(stmt.subject)
            cls = store.terms[stmt.subject]
            filled = replace_part(candidate, "subject", TriplePart.completed(cls))
        else:
            if prop.iri != candidate.predicate.term.iri:  # type: ignore[union-attr]
                continue
            if not _agrees_with_class(candidate.subject, stmt.subject, store):
                continue
            obj = str(stmt.object)
            if obj in (ANY_CLASS, LITERAL_CLASS) or obj in seen:
                continue
            seen.add(obj)
            cls = store.terms[obj]
            filled = replace_part(candidate, "object", TriplePart.completed(cls))
        filled.completion_penalty = candidate.completion_penalty + 1
        completions.append(filled)
    return completions


def replace_part(
    candidate: CandidateRdfTriple, slot: str, part: TriplePart
) -> CandidateRdfTriple:
    fields = {
        "subject": candidate.subject,
        "predicate": candidate.predicate,
        "object": candidate.object,
    }
    fields[slot] = part
    return CandidateRdfTriple(
        fields["subject"],
        fields["predicate"],
        fields["object"],
        completion_penalty=candidate.completion_penalty,
        valid=False,
        source=candidate.source,
    )


def validate_triple(candidate: CandidateRdfTriple, store: OntologyStore) -> bool:
    """True iff subject and object fit the property's domain and range."""
    if candidate.missing_count():
        return False
    predicate = candidate.predicate
    if not predicate.is_matched or predicate.term.kind not in (
        OBJECT_PROPERTY,
        DATATYPE_PROPERTY,
    ):
        return False
    prop = predicate.term
    if candidate.object.is_literal and prop.kind != DATATYPE_PROPERTY:
        return False
    if candidate.subject.is_literal:
        return False

    domains = store.domain_of.get(prop.iri, set()) or {ANY_CLASS}
    if prop.kind == DATATYPE_PROPERTY:
        ranges = {LITERAL_CLASS}
    else:
        ranges = store.range_of.get(prop.iri, set()) or {ANY_CLASS}

    domain_ok = any(_agrees_with_class(candidate.subject, d, store) for d in domains)
    range_ok = any(_agrees_with_class(candidate.object, r, store) for r in ranges)
    return domain_ok and range_ok


def resolve(
    candidates: list[CandidateRdfTriple],
    chooser: ChooserContract,
    context: str = "",
) -> CandidateRdfTriple:
    """Pick one valid candidate; several invoke the chooser, none is an error."""
    valid = sorted(
        (c for c in candidates if c.valid), key=CandidateRdfTriple.score_key
    )
    if not valid:
        raise NoValidTriple(f"no valid reading for: {context}" if context else "no valid reading")
    if len(valid) == 1:
        return valid[0]
    index = chooser(context, valid)
    if not 0 <= index < len(valid):
        raise NoValidTriple(f"chooser returned out-of-range index {index}")
    return valid[index]
