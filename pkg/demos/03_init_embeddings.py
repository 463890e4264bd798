"""Compare the four strategies for initializing embeddings of added tokens.

    python3 demos/03_init_embeddings.py
"""

import random

import numpy as np

from lingo import (
    Document,
    EmbeddingMatrix,
    InitStrategy,
    extend_embeddings,
    extend_vocabulary,
    train_bpe,
)
from lingo.embed import xavier_bound


def main():
    rng = random.Random(1)
    en = [Document(id=f"e{i}",
                   text=" ".join(rng.choice("red green blue cat dog".split())
                                 for _ in range(150)),
                   lang="en") for i in range(8)]
    th = [Document(id=f"t{i}", text="สวัสดีครับผมชอบกินข้าว" * 30, lang="th")
          for i in range(8)]

    base = train_bpe(en, 300)
    ext = extend_vocabulary(base, th, n_new=10)

    dim = 64
    nprng = np.random.Generator(np.random.PCG64(7))
    matrix = EmbeddingMatrix(nprng.normal(0, 1, (base.vocab_size, dim)).astype(np.float32))

    for kind in ("gaussian", "xavier_uniform", "avg_all", "avg_subwords"):
        out = extend_embeddings(matrix, ext, InitStrategy(kind, seed=42))
        new = out.data[base.vocab_size:]
        print(f"{kind:>15}: new rows mean={new.mean():+.4f} std={new.std():.4f} "
              f"|max|={np.abs(new).max():.4f}")
        # the pre-existing rows are never touched, whatever the strategy
        assert out.data[: base.vocab_size].tobytes() == matrix.data.tobytes()

    print(f"\nxavier bound for this shape: "
          f"{xavier_bound(ext.vocab_size, dim):.4f}")

    # avg_subwords puts a new token where its pieces already live
    tok = ext.added[0]
    out = extend_embeddings(matrix, ext, InitStrategy("avg_subwords"))
    pieces = matrix.data[list(tok.subword_ids)]
    print(f"avg_subwords row for {tok.token!r} equals mean of "
          f"{len(tok.subword_ids)} base rows: "
          f"{np.allclose(out.data[tok.id], pieces.mean(axis=0), atol=1e-6)}")


if __name__ == "__main__":
    main()
