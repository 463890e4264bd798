"""Corpus ingestion, word segmentation, and corpus statistics."""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from ._wordbreak import word_spans
from .errors import CorpusError


@dataclass(frozen=True)
class Document:
    """A single text document with a stable identity and language tag."""

    id: str
    text: str
    lang: str

    def __post_init__(self):
        if not self.lang:
            raise CorpusError(f"document {self.id!r} has an empty language tag")


@dataclass
class LangStats:
    doc_count: int = 0
    word_count: int = 0
    byte_count: int = 0


@dataclass
class CorpusStats:
    doc_count: int = 0
    word_count: int = 0
    byte_count: int = 0
    per_lang: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "doc_count": self.doc_count,
            "word_count": self.word_count,
            "byte_count": self.byte_count,
            "per_lang": {
                lang: {"doc_count": s.doc_count, "word_count": s.word_count, "byte_count": s.byte_count}
                for lang, s in sorted(self.per_lang.items())
            },
        }


def load_jsonl(path, default_lang=None):
    """Stream Documents from a JSONL corpus file.

    One JSON object per line with a required "text" field; "id" defaults to
    "<filename>:<line-number>" and "lang" to default_lang.
    """
    path = Path(path)
    name = path.name
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise CorpusError(f"{path}: line {lineno}: invalid UTF-8 at byte offset {e.start}") from e
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON: {e.msg}") from e
            if not isinstance(obj, dict) or "text" not in obj:
                raise CorpusError(f"{path}: line {lineno}: missing required \"text\" field")
            lang = obj.get("lang") or default_lang
            if not lang:
                raise CorpusError(
                    f"{path}: line {lineno}: no \"lang\" field and no default language supplied"
                )
            yield Document(
                id=str(obj.get("id") or f"{name}:{lineno}"),
                text=obj["text"],
                lang=lang,
            )


def load_text_dir(path, lang):
    """Stream Documents from a directory of .txt files, one file per document.

    Files are visited in lexicographic order of their relative paths; the
    relative path is the document id.
    """
    root = Path(path)
    if not root.is_dir():
        raise CorpusError(f"not a directory: {root}")
    files = sorted(
        p.relative_to(root).as_posix()
        for p in root.rglob("*.txt")
        if p.is_file()
    )
    for rel in files:
        full = root / rel
        try:
            text = full.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise CorpusError(f"{full}: invalid UTF-8 at byte offset {e.start}") from e
        except OSError as e:
            raise CorpusError(f"{full}: unreadable: {e.strerror}") from e
        yield Document(id=rel, text=text, lang=lang)


def segment_words(text, mode="unicode"):
    """Split text into word spans, returned as (start, end) character offsets.

    whitespace mode splits on Unicode whitespace runs; unicode mode applies
    default Unicode word boundaries and keeps only segments containing a
    letter or digit.
    """
    if mode == "whitespace":
        spans = []
        start = None
        for i, ch in enumerate(text):
            if ch.isspace():
                if start is not None:
                    spans.append((start, i))
                    start = None
            elif start is None:
                start = i
        if start is not None:
            spans.append((start, len(text)))
        return spans
    if mode == "unicode":
        return [
            (a, b) for a, b in word_spans(text)
            if any(c.isalnum() for c in text[a:b])
        ]
    raise CorpusError(f"unknown segmentation mode: {mode!r}")


def corpus_stats(docs, mode="unicode"):
    """Aggregate document, word, and byte counts in one pass, per language."""
    stats = CorpusStats()
    for doc in docs:
        words = len(segment_words(doc.text, mode))
        nbytes = len(doc.text.encode("utf-8"))
        stats.doc_count += 1
        stats.word_count += words
        stats.byte_count += nbytes
        ls = stats.per_lang.setdefault(doc.lang, LangStats())
        ls.doc_count += 1
        ls.word_count += words
        ls.byte_count += nbytes
    return stats
