"""Noun-phrase extraction and the intermediate <subject, words, object> triples.

A question is read as a chain of noun phrases; consecutive NPs form pairs and
the surface words between a pair (under their lowest common ancestor) become
the candidate relation.  Coordination gets special treatment: the two sides
of a conjunction are never linked to each other but each side is linked to
the nearest noun phrase outside the coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .artext import normalize
from .ptree import ParseTree, TreeNode, lca, path_tokens

NOUN_MARKER = "NN"
NP_TAG = "NP"
CC_TAG = "CC"

# Nouns that quantify or classify the following head rather than naming an
# entity themselves (most/least/number/names/state ...).  Compared after
# normalization.
PREMODIFIER_NOUNS = frozenset(
    {
        "اكثر",
        "اقل",
        "اكبر",
        "اصغر",
        "اهم",
        "ابرز",
        "معظم",
        "كل",
        "بعض",
        "عدد",
        "اسم",
        "اسماء",
        "ولايه",
    }
)

CONJUNCTION_KINDS = {"و": "AND", "او": "OR"}


class NoNounPhrases(ValueError):
    """Raised when a tree yields no noun phrase at all."""


class NoHeadFound(ValueError):
    """Raised when an NP contains no noun-tagged token to serve as head."""


def is_noun_tag(tag: str) -> bool:
    return NOUN_MARKER in tag


@dataclass(eq=False)
class NounPhrase:
    node: TreeNode
    tokens: list[str]
    preorder_pos: int
    premodifiers: list[str] = field(default_factory=list)
    head: str = ""
    postmodifiers: list[str] = field(default_factory=list)

    @property
    def span(self) -> tuple[int, int]:
        return self.node.span

    @property
    def head_tokens(self) -> list[str]:
        return self.head.split() if self.head else []

    @property
    def surface(self) -> str:
        return " ".join(self.tokens)


@dataclass(eq=False)
class IntermediateTriple:
    subject: NounPhrase
    predicate_tokens: list[str]
    object: NounPhrase
    conjunction_origin: str | None = None  # "AND" | "OR"

    def describe(self) -> str:
        pred = " ".join(self.predicate_tokens) if self.predicate_tokens else "null"
        origin = f" [{self.conjunction_origin}]" if self.conjunction_origin else ""
        return f"<{self.subject.surface} | {pred} | {self.object.surface}>{origin}"


@dataclass(eq=False)
class ConjunctiveHead:
    node: TreeNode
    token: str
    kind: str  # "AND" | "OR"


def extract_nps(tree: ParseTree) -> list[NounPhrase]:
    """Noun leaves plus NP constituents whose leaves are all nouns.

    Results contained in another result are dropped, so a multi-word phrase
    wins over the nouns inside it.  Ordered by pre-order position.
    """
    candidates: list[TreeNode] = []
    for node in tree.nodes:
        if node.is_leaf:
            if is_noun_tag(node.tag):
                candidates.append(node)
        elif node.tag == NP_TAG:
            if all(is_noun_tag(leaf.tag) for leaf in node.leaves()):
                candidates.append(node)

    kept: list[TreeNode] = []
    for node in candidates:
        dominated = any(
            other is not node and tree.dominates(other, node) for other in candidates
        )
        if not dominated:
            kept.append(node)

    if not kept:
        raise NoNounPhrases("the tree contains no noun phrase")
    return [NounPhrase(node, node.leaf_tokens(), node.id) for node in kept]


def pair_nps(nps: list[NounPhrase]) -> list[tuple[NounPhrase, NounPhrase]]:
    """Sliding-window pairs; a single NP yields no pair."""
    return [(nps[i], nps[i + 1]) for i in range(len(nps) - 1)]


def find_conjunctive_heads(tree: ParseTree) -> list[ConjunctiveHead]:
    """Internal nodes with a direct CC leaf child, outermost (pre-order) first."""
    heads = []
    for node in tree.nodes:
        if node.is_leaf:
            continue
        for child in node.children:
            if child.is_leaf and child.tag == CC_TAG:
                token = normalize(child.token or "")
                heads.append(ConjunctiveHead(node, child.token or "", CONJUNCTION_KINDS.get(token, "AND")))
                break
    return heads


def _conjunct_branch(tree: ParseTree, head: ConjunctiveHead, np: NounPhrase) -> TreeNode | None:
    for child in head.node.children:
        if child.is_leaf and child.tag == CC_TAG:
            continue
        if tree.dominates(child, np.node):
            return child
    return None


def _branch_tokens(branch: TreeNode, np: NounPhrase) -> list[str]:
    """Tokens inside the conjunct branch that precede the NP itself."""
    return [
        leaf.token  # type: ignore[misc]
        for leaf in branch.leaves()
        if leaf.span[1] <= np.span[0]
    ]


def _upper_level_np(
    tree: ParseTree, nps: list[NounPhrase], pair: tuple[NounPhrase, NounPhrase], head: ConjunctiveHead
) -> NounPhrase | None:
    """Nearest NP outside the conjunction: preceding first, else succeeding."""
    a, b = pair
    before = [np for np in nps if np.preorder_pos < a.preorder_pos]
    for np in reversed(before):
        if not tree.dominates(head.node, np.node):
            return np
    after = [np for np in nps if np.preorder_pos > b.preorder_pos]
    for np in after:
        if not tree.dominates(head.node, np.node):
            return np
    return None


def build_intermediate_triples(tree: ParseTree, nps: list[NounPhrase]) -> list[IntermediateTriple]:
    """Turn NP pairs into intermediate triples, distributing over conjunctions.

    A pair whose LCA is a conjunctive head is dropped; the later conjunct is
    linked to the upper-level NP instead, with the connecting words taken from
    inside its own conjunct branch.  The triple that already links the upper
    NP with the first conjunct is re-tagged with the conjunction kind.
    """
    heads = find_conjunctive_heads(tree)
    by_node = {head.node.id: head for head in heads}
    triples: list[IntermediateTriple] = []

    for a, b in pair_nps(nps):
        top = lca(tree, a.node, b.node)
        head = by_node.get(top.id)
        if head is None:
            triples.append(
                IntermediateTriple(a, path_tokens(tree, a.node, b.node), b)
            )
            continue

        upper = _upper_level_np(tree, nps, (a, b), head)
        if upper is None:
            # No NP outside the coordination to attach to; nothing to emit.
            continue
        for triple in triples:
            if triple.subject is upper and tree.dominates(head.node, triple.object.node):
                triple.conjunction_origin = head.kind
        branch = _conjunct_branch(tree, head, b)
        tokens = _branch_tokens(branch, b) if branch is not None else []
        subject, obj = (upper, b) if upper.preorder_pos < b.preorder_pos else (b, upper)
        triples.append(IntermediateTriple(subject, tokens, obj, head.kind))

    return triples


def split_head_modifiers(np: NounPhrase) -> NounPhrase:
    """Decompose an NP into <pre-modifiers, head, post-modifiers>.

    Leading quantifier/classifier nouns become pre-modifiers; the following
    unbroken run of noun-tagged tokens is the (possibly compound) head; the
    rest, typically definite adjectives or prepositional material, are
    post-modifiers.
    """
    leaves = np.node.leaves()
    tokens = np.tokens
    tags = [leaf.tag for leaf in leaves]
    if len(tokens) != len(tags):
        raise ValueError("NP tokens do not align with its node's leaves")

    noun_positions = [i for i, tag in enumerate(tags) if is_noun_tag(tag)]
    if not noun_positions:
        raise NoHeadFound(f"no noun-tagged token in NP {np.surface!r}")

    i = 0
    while (
        i < len(tokens)
        and is_noun_tag(tags[i])
        and normalize(tokens[i]) in PREMODIFIER_NOUNS
        and any(p > i for p in noun_positions)
    ):
        i += 1
    while i < len(tokens) and not is_noun_tag(tags[i]):
        i += 1

    start = i
    end = start
    while end < len(tokens) and is_noun_tag(tags[end]):
        end += 1
    if start == end:
        raise NoHeadFound(f"no noun-tagged token available as head in {np.surface!r}")

    return replace(
        np,
        premodifiers=tokens[:start],
        head=" ".join(tokens[start:end]),
        postmodifiers=tokens[end:],
    )
