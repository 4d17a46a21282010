"""Bracketed constituency trees and the traversal primitives built on them.

Trees arrive as UTF-8 text in the usual treebank form ``(TAG child ...)``
with leaves written ``(TAG token)``.  After parsing, every node carries a
pre-order id and a half-open span over the leaf-token sequence, which is what
the phrase-extraction layer works with.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class EmptyInput(ValueError):
    """Raised when the input contains no tree at all."""


class UnbalancedBrackets(ValueError):
    """Raised for bracket mismatches; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class LeafWithoutToken(ValueError):
    """Raised for a constituent like ``(NN)`` that has neither token nor children."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NodeNotInTree(ValueError):
    """Raised when an operation receives a node from a different tree."""


class DominanceViolation(ValueError):
    """Raised when a path is requested between a node and its own descendant."""


@dataclass(eq=False)
class TreeNode:
    """One constituent.  ``token`` is present exactly for leaves.

    ``id`` is the 0-based pre-order index; ``span`` is the half-open
    (start, end) interval of leaf positions this node dominates.
    """

    id: int
    tag: str
    token: str | None
    children: tuple["TreeNode", ...]
    span: tuple[int, int]

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["TreeNode"]:
        if self.is_leaf:
            return [self]
        out: list[TreeNode] = []
        stack = list(reversed(self.children))
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaf_tokens(self) -> list[str]:
        return [leaf.token for leaf in self.leaves()]  # type: ignore[misc]

    def to_bracketed(self) -> str:
        if self.is_leaf:
            return f"({self.tag} {self.token})"
        inner = " ".join(child.to_bracketed() for child in self.children)
        return f"({self.tag} {inner})"


@dataclass(eq=False)
class ParseTree:
    root: TreeNode
    nodes: list[TreeNode] = field(default_factory=list)
    leaves: list[TreeNode] = field(default_factory=list)
    _parent: dict[int, TreeNode | None] = field(default_factory=dict)

    def __post_init__(self):
        if not self.nodes:
            self._index()

    def _index(self) -> None:
        self.nodes = []
        self.leaves = []
        self._parent = {}

        def walk(node: TreeNode, parent: TreeNode | None) -> None:
            self.nodes.append(node)
            self._parent[node.id] = parent
            if node.is_leaf:
                self.leaves.append(node)
            for child in node.children:
                walk(child, node)

        walk(self.root, None)

    def node_count(self) -> int:
        return len(self.nodes)

    def contains(self, node: TreeNode) -> bool:
        return 0 <= node.id < len(self.nodes) and self.nodes[node.id] is node

    def parent_of(self, node: TreeNode) -> TreeNode | None:
        if not self.contains(node):
            raise NodeNotInTree(f"node {node.id} ({node.tag}) is not part of this tree")
        return self._parent[node.id]

    def ancestors(self, node: TreeNode) -> list[TreeNode]:
        """Path from ``node`` to the root, inclusive of both."""
        path = [node]
        current = self.parent_of(node)
        while current is not None:
            path.append(current)
            current = self._parent[current.id]
        return path

    def dominates(self, ancestor: TreeNode, descendant: TreeNode) -> bool:
        """Reflexive dominance: every node dominates itself."""
        if not self.contains(ancestor) or not self.contains(descendant):
            raise NodeNotInTree("dominance check with a foreign node")
        node: TreeNode | None = descendant
        while node is not None:
            if node is ancestor:
                return True
            node = self._parent[node.id]
        return False

    def to_bracketed(self) -> str:
        return self.root.to_bracketed()


def _tokenize(text: str):
    """Yield (kind, value, position) with kind in {'(', ')', 'word'}."""
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "(" or ch == ")":
            yield ch, ch, i
            i += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "()":
                i += 1
            yield "word", text[start:i], start


def parse_bracketed(text: str) -> ParseTree:
    """Parse one bracketed tree; assigns pre-order ids and leaf spans."""
    tokens = list(_tokenize(text))
    if not tokens:
        raise EmptyInput("no tree in input")

    pos = 0

    def parse_node():
        nonlocal pos
        kind, value, at = tokens[pos]
        if kind != "(":
            raise UnbalancedBrackets(f"expected '(' but found {value!r}", at)
        open_at = at
        pos += 1
        if pos >= len(tokens):
            raise UnbalancedBrackets("unexpected end of input after '('", open_at)
        kind, tag, at = tokens[pos]
        if kind != "word":
            raise UnbalancedBrackets("constituent is missing its tag", at)
        pos += 1
        children = []
        token = None
        while pos < len(tokens):
            kind, value, at = tokens[pos]
            if kind == ")":
                pos += 1
                if token is None and not children:
                    raise LeafWithoutToken(f"constituent ({tag}) has no token", open_at)
                return tag, token, children
            if kind == "(":
                if token is not None:
                    raise UnbalancedBrackets(
                        f"constituent ({tag} {token} ...) mixes a token with children", at
                    )
                children.append(parse_node())
            else:
                if children:
                    raise UnbalancedBrackets(
                        f"constituent ({tag} ...) mixes children with a bare token", at
                    )
                if token is not None:
                    raise LeafWithoutToken(
                        f"leaf ({tag} {token} {value}) carries more than one token", at
                    )
                token = value
                pos += 1
        raise UnbalancedBrackets("unclosed '('", open_at)

    proto = parse_node()
    if pos != len(tokens):
        _, value, at = tokens[pos]
        raise UnbalancedBrackets(f"trailing content {value!r} after the tree", at)

    next_id = 0
    next_leaf = 0

    def build(node) -> TreeNode:
        nonlocal next_id, next_leaf
        tag, token, children = node
        my_id = next_id
        next_id += 1
        if token is not None:
            span = (next_leaf, next_leaf + 1)
            next_leaf += 1
            return TreeNode(my_id, tag, token, (), span)
        built = tuple(build(c) for c in children)
        span = (built[0].span[0], built[-1].span[1])
        return TreeNode(my_id, tag, None, built, span)

    return ParseTree(root=build(proto))


def preorder(tree: ParseTree) -> list[TreeNode]:
    """Root-first depth-first order; output[k].id == k."""
    out: list[TreeNode] = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(node.children))
    return out


def lca(tree: ParseTree, a: TreeNode, b: TreeNode) -> TreeNode:
    """The shared ancestor of ``a`` and ``b`` farthest from the root."""
    if not tree.contains(a) or not tree.contains(b):
        raise NodeNotInTree("lca arguments must belong to the tree")
    seen = {node.id for node in tree.ancestors(a)}
    node: TreeNode | None = b
    while node is not None:
        if node.id in seen:
            return node
        node = tree.parent_of(node)
    raise NodeNotInTree("nodes share no ancestor")  # unreachable on a real tree


def path_tokens(tree: ParseTree, a: TreeNode, b: TreeNode) -> list[str]:
    """Surface tokens strictly between ``a`` and ``b`` that the LCA dominates.

    ``a`` must precede ``b`` and neither may dominate the other.
    """
    if tree.dominates(a, b) or tree.dominates(b, a):
        raise DominanceViolation(
            f"one of the nodes ({a.tag}#{a.id}, {b.tag}#{b.id}) dominates the other"
        )
    if a.id > b.id:
        raise ValueError("first node must precede the second in pre-order")
    top = lca(tree, a, b)
    lo, hi = a.span[1], b.span[0]
    return [
        leaf.token  # type: ignore[misc]
        for leaf in top.leaves()
        if leaf.span[0] >= lo and leaf.span[1] <= hi
    ]
