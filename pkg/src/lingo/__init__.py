"""Data preparation toolkit for continual language adaptation.

Everything a language-adaptation run needs before GPU training: a
byte-fallback BPE tokenizer with target-language vocabulary extension,
fertility analytics, embedding-row initialization for new tokens, and
manifest-driven data mixtures packed into fixed-length sequences with
document-attention boundaries.
"""

__version__ = "0.1.0"

from .errors import LingoError
from .corpus import Document, CorpusStats, load_jsonl, load_text_dir, segment_words, corpus_stats
from .bpe import TokenizerModel, train_bpe, save_tokenizer, load_tokenizer
from .vocab import AddedToken, ExtendedTokenizer, FertilityReport, extend_vocabulary, fertility, overlap_report
from .embed import EmbeddingMatrix, InitStrategy, extend_embeddings, save_embeddings, load_embeddings
from .mixture import (
    MixtureManifest,
    ManifestEntry,
    PreferencePair,
    PackedSequence,
    PackedDataset,
    load_pairs_jsonl,
    build_pretrain_mixture,
    build_even_multilingual_mixture,
    build_sft_mixture,
    build_dpo_mixture,
    pack_sequences,
    save_packed,
    load_packed,
    validate_manifest,
)

__all__ = [
    "LingoError",
    "Document", "CorpusStats", "load_jsonl", "load_text_dir", "segment_words", "corpus_stats",
    "TokenizerModel", "train_bpe", "save_tokenizer", "load_tokenizer",
    "AddedToken", "ExtendedTokenizer", "FertilityReport", "extend_vocabulary", "fertility", "overlap_report",
    "EmbeddingMatrix", "InitStrategy", "extend_embeddings", "save_embeddings", "load_embeddings",
    "MixtureManifest", "ManifestEntry", "PreferencePair", "PackedSequence", "PackedDataset",
    "load_pairs_jsonl", "build_pretrain_mixture", "build_even_multilingual_mixture",
    "build_sft_mixture", "build_dpo_mixture", "pack_sequences", "save_packed", "load_packed",
    "validate_manifest",
]
