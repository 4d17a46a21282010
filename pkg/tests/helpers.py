"""Shared test utilities: tree generators and independent oracles."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from arnlq.ptree import ParseTree, TreeNode, parse_bracketed

TAG_ALPHABET = ("A", "B", "C", "D")  # 4-symbol alphabet for property suites


def preorder_oracle(node: TreeNode) -> list[TreeNode]:
    """Recursive-definition traversal, independent of the stack-based one."""
    out = [node]
    for child in node.children:
        out.extend(preorder_oracle(child))
    return out


def lca_oracle(tree: ParseTree, a: TreeNode, b: TreeNode) -> TreeNode:
    """Root-path intersection: deepest node on both root paths."""
    path_a = list(reversed(tree.ancestors(a)))  # root .. a
    path_b = list(reversed(tree.ancestors(b)))
    last = path_a[0]
    for x, y in zip(path_a, path_b):
        if x is y:
            last = x
        else:
            break
    return last


def all_tree_shapes(n: int) -> list[str]:
    """Every bracketed tree with exactly n nodes (fixed tags/tokens)."""
    if n == 1:
        return ["(A x)"]
    shapes: list[str] = []
    for parts in _compositions(n - 1):
        for combo in _product([all_tree_shapes(p) for p in parts]):
            shapes.append("(B " + " ".join(combo) + ")")
    return shapes


def _compositions(n: int):
    if n == 0:
        yield []
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield [first] + rest


def _product(pools):
    if not pools:
        yield []
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield [head] + tail


@st.composite
def bracketed_trees(draw, max_nodes: int = 15):
    """Random bracketed tree text with tags from the 4-symbol alphabet."""
    budget = draw(st.integers(min_value=1, max_value=max_nodes))

    def grow(nodes_left: int) -> tuple[str, int]:
        tag = draw(st.sampled_from(TAG_ALPHABET))
        if nodes_left <= 1 or draw(st.booleans()):
            token = draw(st.sampled_from(("x", "y", "z", "w")))
            return f"({tag} {token})", 1
        used = 1
        children = []
        while used < nodes_left and (not children or draw(st.booleans())):
            text, spent = grow(nodes_left - used)
            children.append(text)
            used += spent
        if not children:
            token = draw(st.sampled_from(("x", "y", "z", "w")))
            return f"({tag} {token})", 1
        return f"({tag} " + " ".join(children) + ")", used

    text, _ = grow(budget)
    return text


def rename_query_variables(text: str, rng: random.Random) -> str:
    """Consistently rename every ?variable in a query to a random fresh name."""
    import re

    names = sorted(set(re.findall(r"\?[A-Za-z_][A-Za-z0-9_]*", text)))
    fresh = []
    while len(fresh) < len(names):
        candidate = "?" + "".join(rng.choice("abcdefghij") for _ in range(6))
        if candidate not in fresh:
            fresh.append(candidate)
    mapping = dict(zip(names, rng.sample(fresh, len(fresh))))
    return re.sub(
        r"\?[A-Za-z_][A-Za-z0-9_]*", lambda m: mapping[m.group(0)], text
    )


def parse(text: str) -> ParseTree:
    return parse_bracketed(text)
