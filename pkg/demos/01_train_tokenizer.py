"""Train a byte-fallback BPE tokenizer on a tiny corpus and poke at it.

Run from the repository root:

    python3 demos/01_train_tokenizer.py
"""

import tempfile
from pathlib import Path

from lingo import Document, load_tokenizer, save_tokenizer, train_bpe

CORPUS = [
    "the cat sat on the mat and the dog sat on the log",
    "a cat and a dog and a frog walked into the fog",
    "the frog on the log saw the dog by the bog",
]


def main():
    docs = [Document(id=f"doc{i}", text=t, lang="en") for i, t in enumerate(CORPUS)]
    model = train_bpe(docs, vocab_size=300)
    print(f"trained vocab size: {model.vocab_size} ({len(model.merges)} merges)")

    # the first merges are the most frequent pairs in the corpus
    for left, right in model.merges[:5]:
        print(f"  merge: {model.token_bytes[left]!r} + {model.token_bytes[right]!r}")

    text = "the dog sat on the fog"
    ids = model.encode(text)
    print(f"\nencode({text!r}) -> {ids}")
    print(f"decode round-trips: {model.decode(ids) == text}")

    # byte fallback means anything encodes, even scripts never seen in training
    for s in ("สวัสดี", "naïve café", "🐸 on a log"):
        assert model.decode(model.encode(s)) == s
        print(f"round-trip ok: {s!r} -> {len(model.encode(s))} tokens")

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "tokenizer.json"
        save_tokenizer(model, path)
        reloaded = load_tokenizer(path)
        print(f"\nsaved and reloaded: models equal = {reloaded == model}")


if __name__ == "__main__":
    main()
