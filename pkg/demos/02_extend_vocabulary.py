"""Extend an English-trained tokenizer with Thai tokens and watch fertility drop.

Fertility is tokens per word; an English BPE tokenizer falls back to raw
bytes on Thai, so each Thai character costs ~3 tokens until the vocabulary
learns Thai sequences.

    python3 demos/02_extend_vocabulary.py
"""

import random

from lingo import Document, extend_vocabulary, fertility, overlap_report, train_bpe

THAI_WORDS = ["สวัสดี", "ครับ", "ชอบ", "กิน", "ข้าว", "แมว", "หมา", "บ้าน", "ไป", "มา"]


def make_docs(lang, texts):
    return [Document(id=f"{lang}{i}", text=t, lang=lang) for i, t in enumerate(texts)]


def main():
    rng = random.Random(0)
    en_docs = make_docs("en", [
        " ".join(rng.choice("the cat dog sat mat log fog ran big red".split())
                 for _ in range(200))
        for _ in range(10)
    ])
    # Thai is written without spaces between words
    th_docs = make_docs("th", [
        "".join(rng.choice(THAI_WORDS) for _ in range(150)) for _ in range(10)
    ])

    base = train_bpe(en_docs, vocab_size=400)
    before = fertility(base, th_docs, mode="unicode")
    print(f"base tokenizer on Thai: {before.tokens_per_word:.2f} tokens/word")

    ext = extend_vocabulary(base, th_docs, n_new=40)
    after = fertility(ext, th_docs, mode="unicode")
    print(f"after adding 40 tokens: {after.tokens_per_word:.2f} tokens/word")

    # every base id survives the extension, so existing model weights stay valid
    assert all(ext.vocab[tok] == i for tok, i in base.vocab.items())
    print(f"base ids preserved: {base.vocab_size} of {base.vocab_size}")

    # added tokens are byte strings and may stop mid-codepoint
    first = ext.added[0]
    print(f"\nfirst added token: {first.token!r} "
          f"({first.token.decode('utf-8', errors='replace')!r}, id {first.id})")
    print(f"  base decomposition: {[base.token_bytes[i] for i in first.subword_ids]}")

    target = train_bpe(th_docs, vocab_size=400)
    rep = overlap_report(base, target)
    print(f"\nvocab overlap base vs Thai-trained: {rep}")


if __name__ == "__main__":
    main()
