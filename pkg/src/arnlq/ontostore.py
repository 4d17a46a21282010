"""Ontology loading, RDFS-style inference, and the Arabic label dictionary.

The ontology arrives as line-oriented N-Triples (CURIEs allowed for the
rdf/rdfs/owl/xsd vocabularies and the ontology-local ``:`` prefix).  After an
inference pass closes subclassing, type propagation, and symmetric/transitive
property statements, every Arabic label is indexed under progressively weaker
comparison forms so that query words written differently from the ontology
text can still reach their terms.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field

from .artext import StopWordList, light_stem, normalize, skeleton, strip_stopwords

CLASS = "CLASS"
OBJECT_PROPERTY = "OBJECT_PROPERTY"
DATATYPE_PROPERTY = "DATATYPE_PROPERTY"
INSTANCE = "INSTANCE"

ANY_CLASS = "⊤"
LITERAL_CLASS = "rdfs:Literal"

_BUILTIN_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

_TERM_RE = re.compile(r'<[^<>]*>|"(?:[^"\\]|\\.)*"(?:@[A-Za-z][A-Za-z0-9-]*|\^\^\S+)?|\S+')


class NTriplesSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownKind(Warning):
    """A term carried labels but no rdf:type; it defaults to INSTANCE."""


@dataclass(frozen=True)
class Literal:
    text: str
    lang: str = ""

    def __str__(self) -> str:
        return f'"{self.text}"@{self.lang}' if self.lang else f'"{self.text}"'


@dataclass(frozen=True)
class Statement:
    subject: str
    predicate: str
    object: "str | Literal"


@dataclass(eq=False)
class Term:
    iri: str
    kind: str
    labels: list[tuple[str, str]] = field(default_factory=list)  # (text, lang)

    def label_for_display(self) -> str:
        for text, lang in self.labels:
            if lang == "ar":
                return text
        return self.labels[0][0] if self.labels else self.iri


@dataclass(eq=False)
class OntologyStore:
    terms: dict[str, Term] = field(default_factory=dict)
    statements: set[Statement] = field(default_factory=set)
    domain_of: dict[str, set[str]] = field(default_factory=dict)
    range_of: dict[str, set[str]] = field(default_factory=dict)
    subclass: dict[str, set[str]] = field(default_factory=dict)
    instances_of: dict[str, set[str]] = field(default_factory=dict)
    symmetric: set[str] = field(default_factory=set)
    transitive: set[str] = field(default_factory=set)

    def classes_of(self, instance_iri: str) -> set[str]:
        return {
            cls for cls, members in self.instances_of.items() if instance_iri in members
        }

    def superclasses(self, class_iri: str) -> set[str]:
        return self.subclass.get(class_iri, set())

    def is_subclass_or_equal(self, sub: str, super_: str) -> bool:
        if super_ == ANY_CLASS or sub == super_:
            return True
        return super_ in self.superclasses(sub)

    def properties(self) -> list[Term]:
        return [
            t
            for t in self.terms.values()
            if t.kind in (OBJECT_PROPERTY, DATATYPE_PROPERTY)
        ]


def _compact(iri: str) -> str:
    for prefix, base in _BUILTIN_PREFIXES.items():
        if iri.startswith(base):
            return f"{prefix}:{iri[len(base):]}"
    return f"<{iri}>"


def _parse_term(raw: str, line_no: int):
    if raw.startswith("<") and raw.endswith(">"):
        return _compact(raw[1:-1])
    if raw.startswith('"'):
        match = re.fullmatch(r'"((?:[^"\\]|\\.)*)"(?:@([A-Za-z][A-Za-z0-9-]*)|\^\^\S+)?', raw)
        if not match:
            raise NTriplesSyntaxError(f"malformed literal {raw!r}", line_no)
        text = match.group(1).replace('\\"', '"').replace("\\\\", "\\")
        return Literal(text, match.group(2) or "")
    if ":" in raw:
        return raw
    raise NTriplesSyntaxError(f"unrecognized term {raw!r}", line_no)


def load_ntriples(text: str) -> OntologyStore:
    """Parse statements and derive term kinds from their rdf:type lines."""
    store = OntologyStore()
    raw_triples: list[tuple[str, str, "str | Literal"]] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = _TERM_RE.findall(stripped)
        if not parts or parts[-1] != ".":
            raise NTriplesSyntaxError("statement must end with '.'", line_no)
        if len(parts) != 4:
            raise NTriplesSyntaxError(
                f"expected subject predicate object '.', found {len(parts)} tokens", line_no
            )
        subject = _parse_term(parts[0], line_no)
        predicate = _parse_term(parts[1], line_no)
        obj = _parse_term(parts[2], line_no)
        if isinstance(subject, Literal) or isinstance(predicate, Literal):
            raise NTriplesSyntaxError("literal in subject or predicate position", line_no)
        raw_triples.append((subject, predicate, obj))

    kind_of: dict[str, str] = {}
    typed_as: dict[str, list[str]] = {}
    for s, p, o in raw_triples:
        if p == "rdf:type" and isinstance(o, str):
            if o == "owl:Class":
                kind_of[s] = CLASS
            elif o == "owl:ObjectProperty":
                kind_of.setdefault(s, OBJECT_PROPERTY)
            elif o == "owl:DatatypeProperty":
                kind_of[s] = DATATYPE_PROPERTY
            elif o == "owl:SymmetricProperty":
                store.symmetric.add(s)
            elif o == "owl:TransitiveProperty":
                store.transitive.add(s)
            else:
                typed_as.setdefault(s, []).append(o)
        elif p == "rdfs:subClassOf" and isinstance(o, str):
            kind_of.setdefault(s, CLASS)
            kind_of.setdefault(o, CLASS)

    def ensure(iri: str) -> Term:
        if iri not in store.terms:
            store.terms[iri] = Term(iri, kind_of.get(iri, ""))
        return store.terms[iri]

    for iri, kind in kind_of.items():
        ensure(iri)

    for s, p, o in raw_triples:
        if p == "rdfs:label" and isinstance(o, Literal):
            ensure(s).labels.append((o.text, o.lang))
        elif p == "rdfs:domain" and isinstance(o, str):
            store.domain_of.setdefault(s, set()).add(o)
            kind_of.setdefault(s, OBJECT_PROPERTY)
            ensure(s)
            ensure(o)
            kind_of.setdefault(o, CLASS)
        elif p == "rdfs:range" and isinstance(o, str):
            kind_of.setdefault(s, OBJECT_PROPERTY)
            ensure(s)
            if o.startswith("xsd:"):
                store.range_of.setdefault(s, set()).add(LITERAL_CLASS)
            else:
                store.range_of.setdefault(s, set()).add(o)
                ensure(o)
                kind_of.setdefault(o, CLASS)
        elif p == "rdfs:subClassOf" and isinstance(o, str):
            store.subclass.setdefault(s, set()).add(o)
        elif p == "rdf:type" and isinstance(o, str):
            if o in ("owl:Class", "owl:ObjectProperty", "owl:DatatypeProperty",
                     "owl:SymmetricProperty", "owl:TransitiveProperty"):
                continue
            ensure(s)
            ensure(o)
            store.instances_of.setdefault(o, set()).add(s)
        store.statements.add(Statement(s, p, o))

    for s, targets in typed_as.items():
        for target in targets:
            if kind_of.get(target) is None:
                kind_of[target] = CLASS
        kind_of.setdefault(s, INSTANCE)

    for iri, term in store.terms.items():
        kind = kind_of.get(iri, "")
        if not kind:
            warnings.warn(
                UnknownKind(f"term {iri} carries labels but no rdf:type; defaulting to INSTANCE"),
                stacklevel=2,
            )
            kind = INSTANCE
        term.kind = kind
    for iri in store.instances_of:
        if store.terms[iri].kind == INSTANCE:
            # an instance was used as a type target; treat it as a class
            store.terms[iri].kind = CLASS

    return store


def infer_closure(store: OntologyStore) -> OntologyStore:
    """Close subclassing, type propagation, and property characteristics.

    Pure saturation: never removes anything, and applying it twice equals
    applying it once.
    """
    closed = OntologyStore(
        terms=store.terms,
        statements=set(store.statements),
        domain_of={k: set(v) for k, v in store.domain_of.items()},
        range_of={k: set(v) for k, v in store.range_of.items()},
        subclass={k: set(v) for k, v in store.subclass.items()},
        instances_of={k: set(v) for k, v in store.instances_of.items()},
        symmetric=set(store.symmetric),
        transitive=set(store.transitive),
    )

    changed = True
    while changed:
        changed = False
        for sub in list(closed.subclass):
            supers = closed.subclass[sub]
            extra = set()
            for mid in list(supers):
                extra |= closed.subclass.get(mid, set()) - supers
            if extra:
                supers |= extra
                changed = True

    changed = True
    while changed:
        changed = False
        for cls in list(closed.instances_of):
            members = closed.instances_of[cls]
            for super_ in closed.subclass.get(cls, set()):
                target = closed.instances_of.setdefault(super_, set())
                if not members <= target:
                    target |= members
                    changed = True

    changed = True
    while changed:
        changed = False
        relations = [
            s for s in closed.statements
            if isinstance(s.object, str) and s.predicate in (closed.symmetric | closed.transitive)
        ]
        for stmt in relations:
            if stmt.predicate in closed.symmetric:
                mirror = Statement(stmt.object, stmt.predicate, stmt.subject)
                if mirror not in closed.statements:
                    closed.statements.add(mirror)
                    changed = True
        by_subject: dict[tuple[str, str], set[str]] = {}
        for stmt in closed.statements:
            if stmt.predicate in closed.transitive and isinstance(stmt.object, str):
                by_subject.setdefault((stmt.subject, stmt.predicate), set()).add(stmt.object)
        for (subj, pred), objs in list(by_subject.items()):
            for mid in list(objs):
                for far in by_subject.get((mid, pred), set()):
                    stmt = Statement(subj, pred, far)
                    if stmt not in closed.statements:
                        closed.statements.add(stmt)
                        changed = True

    return closed


def schema_statements(store: OntologyStore) -> list[Statement]:
    """One abstract (domain, property, range) statement per declared pairing.

    Properties without a declared domain or range get the universal marker;
    datatype properties always range over the literal marker.
    """
    out = []
    for prop in store.properties():
        domains = sorted(store.domain_of.get(prop.iri, set())) or [ANY_CLASS]
        if prop.kind == DATATYPE_PROPERTY:
            ranges = [LITERAL_CLASS]
        else:
            ranges = sorted(store.range_of.get(prop.iri, set())) or [ANY_CLASS]
        for domain in domains:
            for range_ in ranges:
                out.append(Statement(domain, prop.iri, range_))
    out.sort(key=lambda s: (s.predicate, s.subject, str(s.object)))
    return out


class SynonymLexicon:
    """Normalized word -> set of normalized synonyms, symmetric by construction."""

    def __init__(self):
        self._map: dict[str, set[str]] = {}

    def add(self, word: str, synonym: str) -> None:
        word = " ".join(normalize(w) for w in word.split())
        synonym = " ".join(normalize(w) for w in synonym.split())
        if not word or not synonym or word == synonym:
            return
        self._map.setdefault(word, set()).add(synonym)
        self._map.setdefault(synonym, set()).add(word)

    def synonyms(self, word: str) -> set[str]:
        return self._map.get(word, set())

    def __len__(self) -> int:
        return len(self._map)

    @classmethod
    def from_text(cls, text: str) -> "SynonymLexicon":
        lexicon = cls()
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "\t" not in line:
                raise ValueError(f"synonyms line {line_no}: expected 'word<TAB>syn1,syn2,...'")
            word, _, rest = line.partition("\t")
            for synonym in rest.split(","):
                if synonym.strip():
                    lexicon.add(word.strip(), synonym.strip())
        return lexicon

    @classmethod
    def from_file(cls, path) -> "SynonymLexicon":
        with open(path, encoding="utf-8") as handle:
            return cls.from_text(handle.read())


class Tier(enum.IntEnum):
    EXACT = 0
    SYNONYM = 1
    STEM = 2
    SKELETON = 3


@dataclass(frozen=True)
class DictEntry:
    term_iri: str
    tier: Tier
    form: str  # the label form this key was derived from


@dataclass(frozen=True)
class DictMatch:
    term: Term
    tier: Tier
    form: str


def _label_words(text: str) -> list[str]:
    words = []
    for raw in re.split(r"[\s_]+", text):
        norm = normalize(raw)
        if norm:
            words.append(norm)
    return words


def _stem_form(words: list[str]) -> str:
    return " ".join(light_stem(w) for w in words)


def _skeleton_form(words: list[str]) -> str:
    return " ".join(skeleton(light_stem(w)) for w in words)


class OntologicalDictionary:
    """Startup-built index from normalized Arabic label forms to terms."""

    def __init__(self, terms: dict[str, Term] | None = None):
        self.entries: dict[str, set[DictEntry]] = {}
        self.terms: dict[str, Term] = terms if terms is not None else {}

    def _insert(self, key: str, entry: DictEntry) -> None:
        if key:
            self.entries.setdefault(key, set()).add(entry)

    def keys(self) -> set[str]:
        return set(self.entries)


def build_dictionary(
    store: OntologyStore,
    lexicon: SynonymLexicon | None = None,
    stopwords: StopWordList | None = None,
    lang_tags: tuple[str, ...] = ("ar", ""),
) -> OntologicalDictionary:
    """Index every label (and its synonyms) at all comparison tiers.

    Each label is indexed both as written and with stop words removed, so a
    label like "يصاب بـ" is reachable from the bare verb.
    """
    lexicon = lexicon or SynonymLexicon()
    stopwords = stopwords or StopWordList()
    dictionary = OntologicalDictionary(store.terms)

    for iri in sorted(store.terms):
        term = store.terms[iri]
        for text, lang in term.labels:
            if lang not in lang_tags:
                continue
            words = _label_words(text)
            if not words:
                continue
            forms = [words]
            filtered = strip_stopwords(words, stopwords)
            if filtered and filtered != words:
                forms.append(filtered)
            for form_words in forms:
                form = " ".join(form_words)
                dictionary._insert(form, DictEntry(iri, Tier.EXACT, form))
                dictionary._insert(_stem_form(form_words), DictEntry(iri, Tier.STEM, form))
                dictionary._insert(
                    _skeleton_form(form_words), DictEntry(iri, Tier.SKELETON, form)
                )
                for synonym in sorted(lexicon.synonyms(form)):
                    syn_words = synonym.split()
                    dictionary._insert(synonym, DictEntry(iri, Tier.SYNONYM, form))
                    dictionary._insert(
                        _stem_form(syn_words), DictEntry(iri, Tier.SYNONYM, form)
                    )
                    dictionary._insert(
                        _skeleton_form(syn_words), DictEntry(iri, Tier.SYNONYM, form)
                    )
    return dictionary


def lookup(dictionary: OntologicalDictionary, phrase: list[str]) -> list[DictMatch]:
    """Match a normalized (stop-word-filtered) phrase at every tier.

    The reported confidence is the weaker of the key's tier and the transform
    that reached it.  Results are fully ordered: tier, then longer matched
    label first, then IRI.
    """
    words = [w for w in phrase if w]
    if not words:
        return []
    probes = [
        (Tier.EXACT, " ".join(words)),
        (Tier.STEM, _stem_form(words)),
        (Tier.SKELETON, _skeleton_form(words)),
    ]
    best: dict[str, tuple[Tier, str]] = {}
    for transform_tier, key in probes:
        for entry in dictionary.entries.get(key, ()):
            effective = max(entry.tier, transform_tier)
            current = best.get(entry.term_iri)
            if current is None or effective < current[0]:
                best[entry.term_iri] = (effective, entry.form)
    matches = [
        DictMatch(dictionary.terms[iri], tier, form) for iri, (tier, form) in best.items()
    ]
    matches.sort(key=lambda m: (m.tier, -len(m.form), m.term.iri))
    return matches
