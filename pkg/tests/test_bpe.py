import random

import pytest
from hypothesis import given, strategies as st

from prefixmt.bpe import (
    CONT_MARKER,
    DEFAULT_MERGES,
    REFERENCE_MERGES,
    BpeModel,
    bpe_decode,
    bpe_encode,
    train_bpe,
)
from prefixmt.corpus import make_corpus
from prefixmt.text import tokenize


def _brute_force_pair_counts(words: dict[str, int]) -> dict[tuple[str, str], int]:
    counts: dict[tuple[str, str], int] = {}
    for word, freq in words.items():
        chars = list(word)
        for a, b in zip(chars, chars[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + freq
    return counts


class TestTrainBpe:
    def test_first_merge_lexicographic_tie(self):
        # "low low lower": (l,o) and (o,w) both occur 3 times
        words = {"low": 2, "lower": 1}
        counts = _brute_force_pair_counts(words)
        assert counts[("l", "o")] == counts[("o", "w")] == 3
        assert max(counts.values()) == 3
        c = make_corpus([(tokenize("low low lower"), tokenize("low low lower"))])
        model = train_bpe(c, 1)
        assert model.merges == (("l", "o"),)

    def test_zero_merges_is_character_level(self):
        c = make_corpus([(("abc",), ("abc",))])
        model = train_bpe(c, 0)
        assert model.merges == ()
        assert bpe_encode(model, ("abc",)) == ("a", CONT_MARKER + "b", CONT_MARKER + "c")

    def test_reference_merge_count_documented(self):
        assert REFERENCE_MERGES == 32000
        assert DEFAULT_MERGES == 1000

    def test_stops_when_no_pair_repeats(self):
        c = make_corpus([(("ab",), ("cd",))])  # every pair occurs once
        model = train_bpe(c, 10)
        assert model.merges == ()

    def test_deterministic(self):
        c = make_corpus(
            [(tokenize("banana bandana"), tokenize("ananas bandanas"))] * 3
        )
        m1 = train_bpe(c, 25)
        m2 = train_bpe(c, 25)
        assert m1.merges == m2.merges

    def test_sides(self):
        c = make_corpus([(("aa", "aa"), ("bb", "bb"))])
        assert train_bpe(c, 1, side="source").merges == (("a", "a"),)
        assert train_bpe(c, 1, side="target").merges == (("b", "b"),)
        joint = train_bpe(c, 2, side="joint").merges
        assert set(joint) == {("a", "a"), ("b", "b")}

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            train_bpe(make_corpus([]), -1)


class TestEncodeDecode:
    def test_fully_merged_word_is_single_token(self):
        c = make_corpus([(("aaaa",), ("x",))] * 4)
        model = train_bpe(c, 10)
        assert bpe_encode(model, ("aaaa",)) == ("aaaa",)

    def test_unseen_characters_pass_through(self):
        c = make_corpus([(("ab",), ("ab",))] * 2)
        model = train_bpe(c, 5)
        pieces = bpe_encode(model, ("Ωµ",))
        assert bpe_decode(pieces) == ("Ωµ",)
        assert pieces[0] == "Ω"

    def test_decode_empty(self):
        assert bpe_decode(()) == ()

    def test_dangling_marker_at_start(self):
        assert bpe_decode((CONT_MARKER + "x", "y")) == ("x", "y")

    def test_marker_prefixed_word_roundtrips(self):
        model = BpeModel(())
        weird = ("##x", "#", "###")
        assert bpe_decode(bpe_encode(model, weird)) == weird

    def test_roundtrip_fuzz_1000(self):
        sents = [tokenize("la vida es sueño y los sueños sueños son")] * 5
        c = make_corpus([(s, s) for s in sents])
        model = train_bpe(c, 30)
        rng = random.Random(17)
        alphabet = "abcdefghijklmnopqrstuvwxyzáéíñ.,;¡¿?!"
        for _ in range(1000):
            sent = tuple(
                "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 10)))
                for _ in range(rng.randint(0, 8))
            )
            assert bpe_decode(bpe_encode(model, sent)) == sent

    @given(
        st.lists(
            st.text(
                alphabet="abcdeáé#.?!",
                min_size=1,
                max_size=8,
            ),
            max_size=8,
        )
    )
    def test_roundtrip_property(self, words):
        model = BpeModel((("a", "b"), ("ab", "c"), ("#", "#")))
        sent = tuple(words)
        assert bpe_decode(bpe_encode(model, sent)) == sent


class TestModelFile:
    def test_save_load_roundtrip(self, tmp_path):
        c = make_corpus([(tokenize("abab abab caca"), tokenize("abab caca"))] * 2)
        model = train_bpe(c, 8)
        model.save(tmp_path / "bpe.model")
        text = (tmp_path / "bpe.model").read_text(encoding="utf-8")
        assert text.startswith(f"bpe v1 {model.num_merges}\n")
        loaded = BpeModel.load(tmp_path / "bpe.model")
        assert loaded.merges == model.merges

    def test_rejects_bad_header(self, tmp_path):
        (tmp_path / "bad").write_text("nonsense\n", encoding="utf-8")
        with pytest.raises(ValueError):
            BpeModel.load(tmp_path / "bad")
