import pytest
from hypothesis import given, strategies as st

from lingo import Document, corpus_stats, load_jsonl, load_text_dir, segment_words
from lingo.errors import CorpusError

from conftest import make_docs, write_jsonl


class TestLoadJsonl:
    def test_two_lines_in_order(self, tmp_path):
        p = write_jsonl(tmp_path / "c.jsonl", [
            {"id": "a", "text": "first", "lang": "en"},
            {"id": "b", "text": "second", "lang": "en"},
        ])
        docs = list(load_jsonl(p))
        assert [d.id for d in docs] == ["a", "b"]
        assert [d.text for d in docs] == ["first", "second"]

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.jsonl"
        p.write_text("")
        assert list(load_jsonl(p)) == []

    def test_missing_text_names_line(self, tmp_path):
        p = write_jsonl(tmp_path / "c.jsonl", [
            {"text": "x", "lang": "en"},
            {"text": "y", "lang": "en"},
            {"txt": "z"},
        ])
        with pytest.raises(CorpusError, match="line 3"):
            list(load_jsonl(p))

    def test_malformed_json_names_line(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"text": "ok", "lang": "en"}\n{not json\n')
        with pytest.raises(CorpusError, match="line 2"):
            list(load_jsonl(p))

    def test_invalid_utf8_names_offset(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_bytes(b'{"text": "a\xff b", "lang": "en"}\n')
        with pytest.raises(CorpusError, match="byte offset"):
            list(load_jsonl(p))

    def test_synthesized_id_and_default_lang(self, tmp_path):
        p = write_jsonl(tmp_path / "web.jsonl", [{"text": "hi"}])
        (doc,) = load_jsonl(p, default_lang="th")
        assert doc.id == "web.jsonl:1"
        assert doc.lang == "th"

    def test_missing_lang_without_default_is_error(self, tmp_path):
        p = write_jsonl(tmp_path / "c.jsonl", [{"text": "hi"}])
        with pytest.raises(CorpusError, match="lang"):
            list(load_jsonl(p))


class TestLoadTextDir:
    def test_lexicographic_order(self, tmp_path):
        (tmp_path / "b.txt").write_text("bee")
        (tmp_path / "a.txt").write_text("ay")
        docs = list(load_text_dir(tmp_path, "en"))
        assert [d.id for d in docs] == ["a.txt", "b.txt"]

    def test_empty_dir(self, tmp_path):
        assert list(load_text_dir(tmp_path, "en")) == []

    def test_invalid_utf8_names_file(self, tmp_path):
        (tmp_path / "bad.txt").write_bytes(b"\xff\xfe")
        with pytest.raises(CorpusError, match="bad.txt"):
            list(load_text_dir(tmp_path, "en"))

    def test_non_txt_files_ignored(self, tmp_path):
        (tmp_path / "a.txt").write_text("ay")
        (tmp_path / "b.md").write_text("bee")
        assert [d.id for d in load_text_dir(tmp_path, "en")] == ["a.txt"]


class TestSegmentWords:
    def test_whitespace_basic(self):
        assert len(segment_words("a b", "whitespace")) == 2

    def test_empty(self):
        assert segment_words("", "whitespace") == []
        assert segment_words("", "unicode") == []

    # Frozen expectations hand-derived from the default word-boundary rules.
    @pytest.mark.parametrize("text,expected", [
        ("hello world", ["hello", "world"]),
        ("can't stop", ["can't", "stop"]),
        ("3.14 apples", ["3.14", "apples"]),
        ("x_1 = y_2", ["x_1", "y_2"]),
        ("a,b 1,234", ["a", "b", "1,234"]),
        ("foo...bar", ["foo", "bar"]),
        # Thai carries no letter class in the default rules: one segment per
        # base character, combining vowels/tones attached.
        ("ไทย", ["ไ", "ท", "ย"]),
        ("สวัสดี",
         ["ส", "วั", "ส", "ดี"]),
        # CJK likewise segments per character
        ("日本語", ["日", "本", "語"]),
        # katakana runs stay together
        ("カタカナ", ["カタカナ"]),
        ("mixedไabc", ["mixed", "ไ", "abc"]),
    ])
    def test_unicode_mode_oracle(self, text, expected):
        spans = segment_words(text, "unicode")
        assert [text[a:b] for a, b in spans] == expected

    def test_unknown_mode(self):
        with pytest.raises(CorpusError):
            segment_words("x", "chars")

    @given(st.text(max_size=200), st.sampled_from(["whitespace", "unicode"]))
    def test_pure_and_ordered(self, text, mode):
        spans = segment_words(text, mode)
        assert spans == segment_words(text, mode)
        # non-overlapping, increasing
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert a1 < b1 <= a2 < b2
        if spans:
            assert spans[0][0] >= 0 and spans[-1][1] <= len(text)


class TestCorpusStats:
    def test_per_lang_breakdown(self):
        docs = make_docs(["a b", "c"], lang="en") + make_docs(["x"], lang="th", prefix="t")
        stats = corpus_stats(iter(docs), mode="whitespace")
        assert set(stats.per_lang) == {"en", "th"}
        assert stats.per_lang["en"].doc_count == 2
        assert stats.per_lang["th"].doc_count == 1

    def test_word_count_whitespace(self):
        stats = corpus_stats(iter(make_docs(["a b c"])), mode="whitespace")
        assert stats.word_count == 3

    def test_additive_under_concatenation(self):
        part1 = make_docs(["one two", "three"], lang="en")
        part2 = make_docs(["ไทย four"], lang="th", prefix="t")
        whole = corpus_stats(iter(part1 + part2))
        s1 = corpus_stats(iter(part1))
        s2 = corpus_stats(iter(part2))
        assert whole.doc_count == s1.doc_count + s2.doc_count
        assert whole.word_count == s1.word_count + s2.word_count
        assert whole.byte_count == s1.byte_count + s2.byte_count
        for lang in set(whole.per_lang):
            w = whole.per_lang[lang]
            a = s1.per_lang.get(lang)
            b = s2.per_lang.get(lang)
            assert w.word_count == (a.word_count if a else 0) + (b.word_count if b else 0)

    def test_totals_equal_per_lang_sums(self):
        docs = make_docs(["a b", "c d e"], lang="en") + make_docs(["f"], lang="ar", prefix="t")
        stats = corpus_stats(iter(docs))
        assert stats.doc_count == sum(s.doc_count for s in stats.per_lang.values())
        assert stats.word_count == sum(s.word_count for s in stats.per_lang.values())
        assert stats.byte_count == sum(s.byte_count for s in stats.per_lang.values())


def test_empty_lang_rejected():
    with pytest.raises(CorpusError):
        Document(id="x", text="t", lang="")
