import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arnlq.npx import (
    NoHeadFound,
    NoNounPhrases,
    build_intermediate_triples,
    extract_nps,
    find_conjunctive_heads,
    pair_nps,
    split_head_modifiers,
)
from arnlq.ptree import parse_bracketed

from helpers import bracketed_trees


def np_surfaces(nps):
    return [np.surface for np in nps]


class TestExtractNps:
    def test_fig3(self, fig3_tree):
        assert np_surfaces(extract_nps(fig3_tree)) == ["علاج", "المرض", "داء الملوك"]

    def test_fig4(self, fig4_tree):
        assert np_surfaces(extract_nps(fig4_tree)) == [
            "الأمراض",
            "القلب",
            "ارتفاع ضغط الدم",
        ]

    def test_single_noun_leaf(self):
        tree = parse_bracketed("(S (VP (VBP قل) (NP (NN مرض))))")
        assert np_surfaces(extract_nps(tree)) == ["مرض"]

    def test_no_nps(self):
        tree = parse_bracketed("(S (VP (VBP قل)))")
        with pytest.raises(NoNounPhrases):
            extract_nps(tree)

    def test_no_result_dominates_another(self, gold_cases):
        for case in gold_cases:
            tree = parse_bracketed(case.tree)
            nps = extract_nps(tree)
            for a in nps:
                for b in nps:
                    if a is b:
                        continue
                    assert not tree.dominates(a.node, b.node)

    def test_bare_noun_leaf_kept_when_sibling_is_adjective(self):
        # the adjective blocks the multi-word NP, the noun leaf survives alone
        tree = parse_bracketed("(S (NP (DTNNS المضادات) (DTJJ الحيوية)))")
        assert np_surfaces(extract_nps(tree)) == ["المضادات"]


class TestPairNps:
    def test_three_nps_two_pairs(self, fig3_tree):
        nps = extract_nps(fig3_tree)
        pairs = pair_nps(nps)
        assert [(a.surface, b.surface) for a, b in pairs] == [
            ("علاج", "المرض"),
            ("المرض", "داء الملوك"),
        ]

    def test_single_np_no_pairs(self):
        tree = parse_bracketed("(S (NP (NN مرض)))")
        assert pair_nps(extract_nps(tree)) == []

    @pytest.mark.parametrize("count,expected", [(1, 0), (2, 1), (4, 3), (7, 6)])
    def test_window_oracle(self, count, expected):
        inner = " ".join(f"(NP (NN w{i}))" for i in range(count))
        tree = parse_bracketed(f"(S {inner})" if count > 1 else f"(S {inner} (VP (VBP x)))")
        nps = extract_nps(tree)
        assert len(nps) == count
        assert len(pair_nps(nps)) == expected


class TestConjunctiveHeads:
    def test_fig4_and(self, fig4_tree):
        heads = find_conjunctive_heads(fig4_tree)
        assert len(heads) == 1
        assert heads[0].kind == "AND"
        assert heads[0].token == "و"

    def test_union_or(self, union_tree):
        heads = find_conjunctive_heads(union_tree)
        assert len(heads) == 1
        assert heads[0].kind == "OR"

    def test_no_cc(self, fig3_tree):
        assert find_conjunctive_heads(fig3_tree) == []

    def test_nested_outermost_first(self):
        tree = parse_bracketed(
            "(S (NP (NP (NN a)) (CC و) (NP (NP (NN b)) (CC أو) (NP (NN c)))))"
        )
        heads = find_conjunctive_heads(tree)
        assert [h.kind for h in heads] == ["AND", "OR"]
        assert heads[0].node.id < heads[1].node.id


class TestIntermediateTriples:
    def test_fig3(self, fig3_tree):
        nps = extract_nps(fig3_tree)
        triples = build_intermediate_triples(fig3_tree, nps)
        assert [t.describe() for t in triples] == [
            "<علاج | null | المرض>",
            "<المرض | الذي يسمى | داء الملوك>",
        ]
        assert all(t.conjunction_origin is None for t in triples)

    def test_fig4_distributes_over_conjunction(self, fig4_tree):
        nps = extract_nps(fig4_tree)
        triples = build_intermediate_triples(fig4_tree, nps)
        assert len(triples) == 2
        assert [t.subject.surface for t in triples] == ["الأمراض", "الأمراض"]
        assert triples[0].predicate_tokens == ["التي", "تصيب"]
        assert triples[0].object.surface == "القلب"
        assert triples[1].predicate_tokens == ["تسبب"]
        assert triples[1].object.surface == "ارتفاع ضغط الدم"
        assert all(t.conjunction_origin == "AND" for t in triples)

    def test_union_tree_or_origin(self, union_tree):
        nps = extract_nps(union_tree)
        triples = build_intermediate_triples(union_tree, nps)
        assert len(triples) == 2
        assert all(t.conjunction_origin == "OR" for t in triples)
        assert triples[1].predicate_tokens == []

    def test_two_nps_no_words(self):
        tree = parse_bracketed("(S (NP (NN علاج)) (VP (NP (NN السكري))))")
        triples = build_intermediate_triples(tree, extract_nps(tree))
        assert len(triples) == 1
        assert triples[0].predicate_tokens == []

    def test_three_conjuncts_share_subject(self):
        tree = parse_bracketed(
            "(S (NP (NN المرض)) (VP (VP (VBP يصيب) (NP (NN القلب))) (CC و)"
            " (VP (VBP يصيب) (NP (NN الرئه))) (CC و) (VP (VBP يصيب) (NP (NN الكبد)))))"
        )
        nps = extract_nps(tree)
        triples = build_intermediate_triples(tree, nps)
        assert len(triples) == 3
        assert all(t.subject.surface == "المرض" for t in triples)

    def test_subject_precedes_object(self, gold_cases):
        for case in gold_cases:
            tree = parse_bracketed(case.tree)
            try:
                nps = extract_nps(tree)
            except NoNounPhrases:
                continue
            for t in build_intermediate_triples(tree, nps):
                assert t.subject.preorder_pos < t.object.preorder_pos

    def test_predicate_is_leaf_subsequence(self, gold_cases):
        for case in gold_cases:
            tree = parse_bracketed(case.tree)
            tokens = [leaf.token for leaf in tree.leaves]
            nps = extract_nps(tree)
            for t in build_intermediate_triples(tree, nps):
                n = len(t.predicate_tokens)
                if n == 0:
                    continue
                assert any(
                    tokens[i : i + n] == t.predicate_tokens
                    for i in range(len(tokens) - n + 1)
                )


class TestSplitHeadModifiers:
    def _np(self, text):
        tree = parse_bracketed(text)
        node = tree.root
        from arnlq.npx import NounPhrase

        return NounPhrase(node, node.leaf_tokens(), node.id)

    def test_premodifier_head_postmodifier(self):
        np = split_head_modifiers(
            self._np("(NP (NN أكثر) (DTNNS الأمراض) (DTJJ المعدية))")
        )
        assert np.premodifiers == ["أكثر"]
        assert np.head == "الأمراض"
        assert np.postmodifiers == ["المعدية"]

    def test_single_word(self):
        np = split_head_modifiers(self._np("(NP (NN علاج))"))
        assert (np.premodifiers, np.head, np.postmodifiers) == ([], "علاج", [])

    def test_definite_noun_then_adjective(self):
        np = split_head_modifiers(self._np("(NP (DTNN المرض) (DTJJ المعدي))"))
        assert (np.premodifiers, np.head, np.postmodifiers) == ([], "المرض", ["المعدي"])

    def test_compound_head(self):
        np = split_head_modifiers(self._np("(NP (NN داء) (DTNN الملوك))"))
        assert np.head == "داء الملوك"
        assert np.premodifiers == [] and np.postmodifiers == []

    def test_no_head(self):
        with pytest.raises(NoHeadFound):
            split_head_modifiers(self._np("(NP (DTJJ المعدي))"))

    def test_quantifier_alone_is_its_own_head(self):
        np = split_head_modifiers(self._np("(NP (NN عدد))"))
        assert np.head == "عدد"

    @settings(max_examples=80)
    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["NN", "DTNN", "DTNNS", "DTJJ", "JJ"]),
                st.sampled_from(["أكثر", "عدد", "المرض", "علاج", "المعدي", "كبير"]),
            ),
            min_size=1,
            max_size=6,
        )
    )
    def test_token_multiset_preserved(self, pairs):
        body = " ".join(f"({tag} {tok})" for tag, tok in pairs)
        np = self._np(f"(NP {body})")
        try:
            split = split_head_modifiers(np)
        except NoHeadFound:
            assert not any("NN" in tag for tag, _ in pairs)
            return
        rebuilt = split.premodifiers + split.head.split() + split.postmodifiers
        assert rebuilt == np.tokens
