"""SPARQL assembly: targets, modifier interpretation, serialization.

The question word (or an order word like أذكر) anchors the target noun
phrase, whose ontology term becomes ?target in the SELECT clause.  Class
terms inside the WHERE clause turn into variables with rdf:type patterns.
Negation triggers produce the OPTIONAL / FILTER(=) / FILTER(!bound) shape,
"أو" produces a UNION, and "و" stays an ordinary conjunction of patterns.

``canonicalize`` parses the emitted subset back and produces an
order-normalized, variable-renamed form; equality of canonical forms is how
generated queries are judged against gold ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .artext import normalize
from .mapper import CandidateRdfTriple
from .npx import NounPhrase
from .ontostore import CLASS, Term
from .ptree import ParseTree, TreeNode

# Tokens the generator refuses to interpret (comparatives/superlatives);
# their presence makes a question untranslatable rather than mistranslated.
UNSUPPORTED_MODIFIER_WORDS = frozenset(
    {"اكثر", "اقل", "اكبر", "اصغر", "اهم", "ابرز", "اعلى", "ادنى", "مشابه"}
)

NEGATION_TOKENS = frozenset({"لا", "غير"})
CONJUNCTION_TOKEN = "و"
DISJUNCTION_TOKEN = "او"

NEGATION = "NEGATION"
CONJUNCTION = "CONJUNCTION"
DISJUNCTION = "DISJUNCTION"


class NoTargetFound(ValueError):
    """The tree has no question word or order word to anchor a target."""


class TargetUnmatched(ValueError):
    """The target noun phrase does not resolve to an ontology term."""


class EmptyBranch(ValueError):
    """A UNION needs two non-empty branches."""


class OutOfSubset(ValueError):
    """The canonicalizer met a construct the generator never emits."""


# --- query AST -------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def render(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Iri:
    curie: str

    def render(self) -> str:
        return self.curie


@dataclass(frozen=True)
class Lit:
    text: str

    def render(self) -> str:
        return f'"{self.text}"'


SparqlTerm = Var | Iri | Lit


@dataclass(frozen=True)
class BasicTriple:
    subject: SparqlTerm
    predicate: SparqlTerm
    object: SparqlTerm


@dataclass(frozen=True)
class Filter:
    # kinds: "eq" (?v = term) and "notbound" (!bound(?v))
    kind: str
    var: Var
    value: SparqlTerm | None = None


@dataclass(frozen=True)
class OptionalBlock:
    patterns: tuple
    filters: tuple[Filter, ...]


@dataclass(frozen=True)
class UnionBlock:
    left: tuple
    right: tuple


Pattern = BasicTriple | Filter | OptionalBlock | UnionBlock


@dataclass
class SparqlQuery:
    select_vars: list[str]
    patterns: list[Pattern] = field(default_factory=list)


@dataclass(eq=False)
class QueryTarget:
    np: NounPhrase
    term: Term | None = None
    variable_name: str = "?target"


@dataclass(frozen=True)
class ModifierDescriptor:
    kind: str  # NEGATION | CONJUNCTION | DISJUNCTION
    trigger_token: str
    position: int  # leaf index


@dataclass(frozen=True)
class UnsupportedModifier:
    token: str
    position: int


# --- extraction ------------------------------------------------------------


def extract_target(
    tree: ParseTree,
    nps: list[NounPhrase],
    question_words: set[str],
    order_words: set[str],
) -> QueryTarget:
    """The first NP inside or right after the question/order word."""
    anchor: TreeNode | None = None
    for leaf in tree.leaves:
        token = normalize(leaf.token or "")
        if leaf.tag == "WP" or token in question_words or token in order_words:
            anchor = leaf
            break
    if anchor is None:
        raise NoTargetFound("no question word (WP) or order word in the tree")
    for np in nps:
        if np.span[0] >= anchor.span[0] and np.node is not anchor:
            return QueryTarget(np)
    raise NoTargetFound("no noun phrase follows the question word")


def extract_modifiers(tree: ParseTree) -> list[ModifierDescriptor]:
    """Negation/conjunction/disjunction triggers in surface order."""
    descriptors = []
    for index, leaf in enumerate(tree.leaves):
        token = normalize(leaf.token or "")
        if token in NEGATION_TOKENS:
            descriptors.append(ModifierDescriptor(NEGATION, leaf.token or "", index))
        elif leaf.tag == "CC" and token == CONJUNCTION_TOKEN:
            descriptors.append(ModifierDescriptor(CONJUNCTION, leaf.token or "", index))
        elif leaf.tag == "CC" and token == DISJUNCTION_TOKEN:
            descriptors.append(ModifierDescriptor(DISJUNCTION, leaf.token or "", index))
    return descriptors


def find_unsupported_modifiers(tree: ParseTree) -> list[UnsupportedModifier]:
    """Comparative/superlative words the generator reports instead of guessing."""
    found = []
    for index, leaf in enumerate(tree.leaves):
        if normalize(leaf.token or "") in UNSUPPORTED_MODIFIER_WORDS:
            found.append(UnsupportedModifier(leaf.token or "", index))
    return found


# --- assembly --------------------------------------------------------------


class _VarAllocator:
    """?var, ?var2, ?var3 ... in first-occurrence order."""

    def __init__(self):
        self.count = 0

    def fresh(self) -> Var:
        self.count += 1
        return Var("var" if self.count == 1 else f"var{self.count}")


def apply_negation(
    triple: BasicTriple, variables: _VarAllocator
) -> tuple[OptionalBlock, Filter]:
    """Negated triple -> OPTIONAL {pattern FILTER(v = term)} FILTER(!bound(v))."""
    if not isinstance(triple.object, (Iri, Lit)):
        raise ValueError("negation needs a known object term to filter against")
    fresh = variables.fresh()
    optional = OptionalBlock(
        patterns=(BasicTriple(triple.subject, triple.predicate, fresh),),
        filters=(Filter("eq", fresh, triple.object),),
    )
    return optional, Filter("notbound", fresh)


def apply_disjunction(left: list[Pattern], right: list[Pattern]) -> UnionBlock:
    if not left or not right:
        raise EmptyBranch("both UNION branches must be non-empty")
    return UnionBlock(tuple(left), tuple(right))


def _is_negated(triple: CandidateRdfTriple, mods: list[ModifierDescriptor]) -> bool:
    source = triple.source
    if source is None:
        return False
    lo = source.subject.span[1]
    hi = source.object.span[0]
    return any(m.kind == NEGATION and lo <= m.position < hi for m in mods)


def build_query(
    triples: list[CandidateRdfTriple],
    target: QueryTarget,
    mods: list[ModifierDescriptor],
) -> SparqlQuery:
    """Substitute variables for the target and for class terms, then assemble."""
    if target.term is None:
        raise TargetUnmatched(f"target {target.np.surface!r} has no ontology term")

    variables = _VarAllocator()
    class_vars: dict[str, Var] = {}
    target_var = Var(target.variable_name.lstrip("?"))
    patterns: list[Pattern] = []

    if target.term.kind == CLASS:
        patterns.append(BasicTriple(target_var, Iri("rdf:type"), Iri(target.term.iri)))

    def substitute(part, introduced: list[Pattern]):
        if part.is_literal:
            return Lit(part.text)
        term = part.term
        if term.iri == target.term.iri:
            return target_var
        if term.kind == CLASS:
            if term.iri not in class_vars:
                class_vars[term.iri] = variables.fresh()
                introduced.append(
                    BasicTriple(class_vars[term.iri], Iri("rdf:type"), Iri(term.iri))
                )
            return class_vars[term.iri]
        return Iri(term.iri)

    union_branches: list[list[Pattern]] = []

    for triple in triples:
        introduced: list[Pattern] = []
        subject = substitute(triple.subject, introduced)
        predicate = Iri(triple.predicate.term.iri)
        if _is_negated(triple, mods):
            obj = (
                Lit(triple.object.text)
                if triple.object.is_literal
                else Iri(triple.object.term.iri)
            )
            optional, not_bound = apply_negation(
                BasicTriple(subject, predicate, obj), variables
            )
            emitted: list[Pattern] = [optional, not_bound]
        else:
            obj = substitute(triple.object, introduced)
            emitted = [BasicTriple(subject, predicate, obj)]
        emitted.extend(introduced)

        origin = triple.source.conjunction_origin if triple.source else None
        if origin == "OR":
            union_branches.append(emitted)
        else:
            patterns.extend(emitted)

    if union_branches:
        block = union_branches[0]
        for branch in union_branches[1:]:
            block = [apply_disjunction(block, branch)]
        patterns.extend(block)

    if not _mentions_var(patterns, target_var):
        raise TargetUnmatched(
            f"target {target.term.iri} never occurs in the WHERE patterns"
        )
    return SparqlQuery(select_vars=[target_var.name], patterns=patterns)


def _mentions_var(patterns, var: Var) -> bool:
    for pattern in patterns:
        if isinstance(pattern, BasicTriple):
            if var in (pattern.subject, pattern.predicate, pattern.object):
                return True
        elif isinstance(pattern, OptionalBlock):
            if _mentions_var(pattern.patterns, var):
                return True
        elif isinstance(pattern, UnionBlock):
            if _mentions_var(pattern.left, var) or _mentions_var(pattern.right, var):
                return True
    return False


# --- serialization ---------------------------------------------------------


def _render_filter(f: Filter) -> str:
    if f.kind == "eq":
        return f"FILTER({f.var.render()} = {f.value.render()})"
    return f"FILTER(!bound({f.var.render()}))"


def _render_patterns(patterns, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    for pattern in patterns:
        if isinstance(pattern, BasicTriple):
            lines.append(
                f"{pad}{pattern.subject.render()} {pattern.predicate.render()} "
                f"{pattern.object.render()} ."
            )
        elif isinstance(pattern, Filter):
            lines.append(f"{pad}{_render_filter(pattern)}")
        elif isinstance(pattern, OptionalBlock):
            lines.append(f"{pad}OPTIONAL {{")
            _render_patterns(pattern.patterns, indent + 1, lines)
            for f in pattern.filters:
                lines.append(f"{pad}  {_render_filter(f)}")
            lines.append(f"{pad}}}")
        elif isinstance(pattern, UnionBlock):
            lines.append(f"{pad}{{")
            _render_patterns(pattern.left, indent + 1, lines)
            lines.append(f"{pad}}} UNION {{")
            _render_patterns(pattern.right, indent + 1, lines)
            lines.append(f"{pad}}}")
        else:
            raise TypeError(f"unknown pattern {pattern!r}")


def serialize(query: SparqlQuery, prefixes: dict[str, str] | None = None) -> str:
    """Deterministic text form; identical queries yield identical bytes."""
    lines = []
    for name in sorted(prefixes or {}):
        lines.append(f"PREFIX {name}: <{prefixes[name]}>")
    select = " ".join(f"?{v}" for v in query.select_vars)
    lines.append(f"SELECT {select} WHERE {{")
    _render_patterns(query.patterns, 1, lines)
    lines.append("}")
    return "\n".join(lines)


# --- canonicalization ------------------------------------------------------

_SPARQL_TOKEN = re.compile(
    r'"[^"]*"'
    r"|\?[A-Za-z_][A-Za-z0-9_]*"
    r"|![A-Za-z]+"
    r"|[A-Za-z][\w-]*:[\w-]+|:[\w-]+"
    r"|<[^<>]*>"
    r"|[{}().=:]"
    r"|[A-Za-z][A-Za-z0-9_]*"
)

_KEYWORDS = {"SELECT", "WHERE", "OPTIONAL", "FILTER", "UNION", "PREFIX", "bound"}


class _CanonParser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        for match in _SPARQL_TOKEN.finditer(text):
            between = text[pos : match.start()]
            if between.strip():
                raise OutOfSubset(f"cannot tokenize {between.strip()!r}")
            self.tokens.append(match.group(0))
            pos = match.end()
        if text[pos:].strip():
            raise OutOfSubset(f"cannot tokenize {text[pos:].strip()!r}")
        self.index = 0

    def peek(self) -> str | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def next(self) -> str:
        token = self.peek()
        if token is None:
            raise OutOfSubset("unexpected end of query")
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        got = self.next()
        if got != token:
            raise OutOfSubset(f"expected {token!r}, found {got!r}")

    def parse(self):
        while self.peek() == "PREFIX":
            self.next()
            if self.next() != ":":  # a named prefix is followed by its colon
                self.expect(":")
            iri = self.next()
            if not iri.startswith("<"):
                raise OutOfSubset("PREFIX declaration needs an <iri>")
        self.expect("SELECT")
        select_vars = []
        while self.peek() and self.peek().startswith("?"):
            select_vars.append(self.next()[1:])
        if not select_vars:
            raise OutOfSubset("SELECT needs at least one variable")
        self.expect("WHERE")
        group = self.parse_group()
        if self.peek() is not None:
            raise OutOfSubset(f"trailing content {self.peek()!r}")
        return select_vars, group

    def parse_term(self):
        token = self.next()
        if token.startswith("?"):
            return Var(token[1:])
        if token.startswith('"'):
            return Lit(token[1:-1])
        if token in _KEYWORDS or (len(token) == 1 and token in "{}().=:"):
            raise OutOfSubset(f"unexpected {token!r} in term position")
        return Iri(token)

    def parse_filter(self) -> Filter:
        self.expect("(")
        token = self.next()
        if token == "!bound":
            self.expect("(")
            var = self.parse_term()
            if not isinstance(var, Var):
                raise OutOfSubset("!bound takes a variable")
            self.expect(")")
            self.expect(")")
            return Filter("notbound", var)
        if token.startswith("?"):
            var = Var(token[1:])
            self.expect("=")
            value = self.parse_term()
            self.expect(")")
            return Filter("eq", var, value)
        raise OutOfSubset(f"unsupported filter on {token!r}")

    def parse_group(self) -> list:
        self.expect("{")
        elements: list = []
        while True:
            token = self.peek()
            if token is None:
                raise OutOfSubset("unclosed group")
            if token == "}":
                self.next()
                break
            if token == "OPTIONAL":
                self.next()
                inner = self.parse_group()
                filters = tuple(e for e in inner if isinstance(e, Filter))
                patterns = tuple(e for e in inner if not isinstance(e, Filter))
                elements.append(OptionalBlock(patterns, filters))
            elif token == "FILTER":
                self.next()
                elements.append(self.parse_filter())
            elif token == "{":
                left = self.parse_group()
                self.expect("UNION")
                right = self.parse_group()
                block = UnionBlock(tuple(left), tuple(right))
                while self.peek() == "UNION":
                    self.next()
                    block = UnionBlock((block,), tuple(self.parse_group()))
                elements.append(block)
            elif token in _KEYWORDS:
                raise OutOfSubset(f"construct {token!r} is outside the subset")
            else:
                subject = self.parse_term()
                predicate = self.parse_term()
                obj = self.parse_term()
                if self.peek() == ".":
                    self.next()
                elements.append(BasicTriple(subject, predicate, obj))
        return elements


def _anon(value) -> str:
    """Structure-only rendering: variable names erased."""
    if isinstance(value, Var):
        return "?"
    if isinstance(value, (Iri, Lit)):
        return value.render()
    if isinstance(value, BasicTriple):
        return f"t({_anon(value.subject)} {_anon(value.predicate)} {_anon(value.object)})"
    if isinstance(value, Filter):
        inner = f" {_anon(value.value)}" if value.value is not None else ""
        return f"f({value.kind}{inner})"
    if isinstance(value, OptionalBlock):
        parts = [_anon(p) for p in value.patterns] + [_anon(f) for f in value.filters]
        return "o(" + " ".join(parts) + ")"
    if isinstance(value, UnionBlock):
        return f"u({' '.join(_anon(p) for p in value.left)} | {' '.join(_anon(p) for p in value.right)})"
    raise TypeError(f"cannot anonymize {value!r}")


_KIND_ORDER = {BasicTriple: 0, OptionalBlock: 1, UnionBlock: 2, Filter: 3}


def _canon_elements(elements) -> list:
    out = []
    for element in elements:
        if isinstance(element, OptionalBlock):
            inner = _canon_elements(list(element.patterns) + list(element.filters))
            filters = tuple(e for e in inner if isinstance(e, Filter))
            patterns = tuple(e for e in inner if not isinstance(e, Filter))
            out.append(OptionalBlock(patterns, filters))
        elif isinstance(element, UnionBlock):
            left = _canon_elements(element.left)
            right = _canon_elements(element.right)
            branches = sorted(
                [left, right], key=lambda b: [_anon(e) for e in b]
            )
            out.append(UnionBlock(tuple(branches[0]), tuple(branches[1])))
        else:
            out.append(element)
    out.sort(key=lambda e: (_KIND_ORDER[type(e)], _anon(e)))
    return out


def _rename_vars(elements, select_vars):
    mapping: dict[str, str] = {}

    def renamed(var: Var) -> Var:
        if var.name not in mapping:
            mapping[var.name] = f"v{len(mapping)}"
        return Var(mapping[var.name])

    for name in select_vars:
        renamed(Var(name))

    def walk(element):
        if isinstance(element, BasicTriple):
            return BasicTriple(
                *(renamed(t) if isinstance(t, Var) else t
                  for t in (element.subject, element.predicate, element.object))
            )
        if isinstance(element, Filter):
            value = element.value
            if isinstance(value, Var):
                value = renamed(value)
            return Filter(element.kind, renamed(element.var), value)
        if isinstance(element, OptionalBlock):
            return OptionalBlock(
                tuple(walk(p) for p in element.patterns),
                tuple(walk(f) for f in element.filters),
            )
        if isinstance(element, UnionBlock):
            return UnionBlock(
                tuple(walk(p) for p in element.left),
                tuple(walk(p) for p in element.right),
            )
        raise TypeError(f"cannot rename in {element!r}")

    return [walk(e) for e in elements], [mapping[v] for v in select_vars]


def _render_canonical(element) -> str:
    if isinstance(element, BasicTriple):
        return f"{element.subject.render()} {element.predicate.render()} {element.object.render()}"
    if isinstance(element, Filter):
        return _render_filter(element)
    if isinstance(element, OptionalBlock):
        inner = [_render_canonical(p) for p in element.patterns]
        inner += [_render_filter(f) for f in element.filters]
        return "OPTIONAL{" + " . ".join(inner) + "}"
    if isinstance(element, UnionBlock):
        left = " . ".join(_render_canonical(p) for p in element.left)
        right = " . ".join(_render_canonical(p) for p in element.right)
        return "{" + left + "}UNION{" + right + "}"
    raise TypeError(f"cannot render {element!r}")


def canonicalize(text: str) -> str:
    """Comparable normal form of a query within the emitted subset.

    Conjunctive elements are sorted structurally, UNION branches are sorted,
    and variables are renamed by first occurrence over the sorted structure,
    so two serializations differing only in variable names or pattern order
    canonicalize identically.
    """
    select_vars, group = _CanonParser(text).parse()
    canon = _canon_elements(group)
    renamed, select = _rename_vars(canon, select_vars)
    body = " . ".join(_render_canonical(e) for e in renamed)
    return f"SELECT {' '.join('?' + v for v in select)} {{ {body} }}"
