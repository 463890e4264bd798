"""Vocabulary extension with target-language tokens, and fertility measurement."""

from dataclasses import dataclass, field

from . import bpe
from .corpus import segment_words
from .errors import VocabExtensionError, TokenizerError


@dataclass(frozen=True)
class AddedToken:
    """A target-language token appended to a base vocabulary.

    subword_ids is the base tokenization of the token's bytes, kept so the
    embedding extension can average the corresponding base rows.
    """

    token: bytes
    id: int
    subword_ids: tuple

    def __init__(self, token, id, subword_ids):
        object.__setattr__(self, "token", bytes(token))
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "subword_ids", tuple(subword_ids))
        if not self.subword_ids:
            raise TokenizerError(f"added token {token!r} has empty subword decomposition")


class ExtendedTokenizer:
    """A base tokenizer plus appended target-language tokens and merges.

    Base token ids are unchanged; added tokens occupy ids V, V+1, ... where
    V is the base vocabulary size. Appended merges apply after all base
    merges, so extension only changes segmentation where they fire.
    """

    def __init__(self, base, added, appended_merges):
        self.base = base
        self.added = list(added)
        self.appended_merges = list(appended_merges)

        self.token_bytes = list(base.token_bytes)
        for pos, tok in enumerate(self.added):
            expected = base.vocab_size + pos
            if tok.id != expected:
                raise TokenizerError(
                    f"added token ids must be contiguous from {base.vocab_size}; "
                    f"got {tok.id} at position {pos}"
                )
            if tok.token in base.vocab:
                raise TokenizerError(f"added token {tok.token!r} already exists in base vocab")
            self.token_bytes.append(tok.token)
        self.vocab = {b: i for i, b in enumerate(self.token_bytes)}
        if len(self.vocab) != len(self.token_bytes):
            raise TokenizerError("added token strings are not pairwise distinct")
        for tok in self.added:
            joined = b"".join(base.token_bytes[i] for i in tok.subword_ids)
            if joined != tok.token:
                raise TokenizerError(
                    f"subword ids of added token {tok.token!r} decode to {joined!r}"
                )
        self.all_merges = list(base.merges) + self.appended_merges
        self._plan = bpe._MergePlan(self.token_bytes, self.all_merges)

    @property
    def vocab_size(self):
        return len(self.token_bytes)

    def encode(self, text):
        return self._plan.apply(list(text.encode("utf-8")))

    def encode_bytes(self, data):
        return self._plan.apply(list(data))

    def decode(self, ids):
        return bpe.decode_ids(self.token_bytes, ids)


def extend_vocabulary(base, target_docs, n_new, target_vocab_budget=None):
    """Extend a base tokenizer with n_new non-overlapping target-language tokens.

    Trains a target tokenizer of size target_vocab_budget (default
    257 + 2*n_new, headroom for overlap with base) on target_docs, then
    accepts its merge-created tokens in creation order, skipping any whose
    string already exists in the base vocabulary. Every target merge whose
    left, right, and result all exist in the extended vocabulary is
    appended, in original order.
    """
    if n_new < 1:
        raise VocabExtensionError(f"n_new must be at least 1, got {n_new}")
    if target_vocab_budget is None:
        target_vocab_budget = 257 + 2 * n_new
    target = bpe.train_bpe(target_docs, target_vocab_budget)

    added = []
    for tok in target.token_bytes[256:]:
        if tok in base.vocab:
            continue
        sub = base._plan.apply(list(tok))
        added.append(AddedToken(token=tok, id=base.vocab_size + len(added), subword_ids=sub))
        if len(added) == n_new:
            break
    if len(added) < n_new:
        raise VocabExtensionError(
            f"only {len(added)} non-overlapping candidates available, {n_new} requested"
        )

    ext_vocab = dict(base.vocab)
    for tok in added:
        ext_vocab[tok.token] = tok.id
    appended = []
    for l, r in target.merges:
        lb = target.token_bytes[l]
        rb = target.token_bytes[r]
        if lb in ext_vocab and rb in ext_vocab and lb + rb in ext_vocab:
            appended.append((ext_vocab[lb], ext_vocab[rb]))
    return ExtendedTokenizer(base=base, added=added, appended_merges=appended)


@dataclass
class FertilityReport:
    """Average number of tokens per word over a corpus."""

    tokens_per_word: float
    token_count: int
    word_count: int
    mode: str

    def to_dict(self):
        return {
            "tokens_per_word": self.tokens_per_word,
            "token_count": self.token_count,
            "word_count": self.word_count,
            "mode": self.mode,
        }


def fertility(model, docs, mode="unicode"):
    """Measure tokenizer fertility (tokens per word) over a document stream."""
    token_count = 0
    word_count = 0
    for doc in docs:
        token_count += len(model.encode(doc.text))
        word_count += len(segment_words(doc.text, mode))
    if word_count == 0:
        raise VocabExtensionError("fertility is undefined on a corpus with zero words")
    return FertilityReport(
        tokens_per_word=token_count / word_count,
        token_count=token_count,
        word_count=word_count,
        mode=mode,
    )


def overlap_report(base, target):
    """Set arithmetic over two models' token strings."""
    a = set(base.token_bytes)
    b = set(target.token_bytes)
    return {
        "shared": len(a & b),
        "base_only": len(a - b),
        "target_only": len(b - a),
    }
