import numpy as np
import pytest

from lingo import (
    EmbeddingMatrix,
    InitStrategy,
    extend_embeddings,
    load_embeddings,
    save_embeddings,
    train_bpe,
    extend_vocabulary,
)
from lingo.embed import xavier_bound
from lingo.errors import EmbeddingError

from conftest import make_docs


@pytest.fixture(scope="module")
def ext():
    base = train_bpe(make_docs(["the cat sat on the mat " * 20]), 300)
    thai = make_docs(["ไทยแลนด์สวัสดี" * 40], lang="th")
    return extend_vocabulary(base, thai, n_new=8, target_vocab_budget=300)


def _base_matrix(ext, dim=16, seed=123):
    rng = np.random.Generator(np.random.PCG64(seed))
    return EmbeddingMatrix(rng.normal(0, 1, size=(ext.base.vocab_size, dim)).astype(np.float32))


class TestStrategies:
    def test_avg_subwords_two_row_example(self, ext):
        base = _base_matrix(ext, dim=4)
        tok = ext.added[0]
        out = extend_embeddings(base, ext, InitStrategy("avg_subwords"))
        expected = base.data[list(tok.subword_ids)].astype(np.float64).mean(axis=0)
        np.testing.assert_allclose(out.data[tok.id], expected.astype(np.float32), rtol=0, atol=0)

    def test_avg_all_is_mean_of_all_rows(self, ext):
        base = _base_matrix(ext, dim=4)
        out = extend_embeddings(base, ext, InitStrategy("avg_all"))
        expected = base.data.astype(np.float64).mean(axis=0).astype(np.float32)
        for tok in ext.added:
            np.testing.assert_array_equal(out.data[tok.id], expected)

    def test_avg_all_rows_identical_across_added(self, ext):
        base = _base_matrix(ext)
        out = extend_embeddings(base, ext, InitStrategy("avg_all"))
        first = out.data[ext.base.vocab_size]
        for tok in ext.added:
            np.testing.assert_array_equal(out.data[tok.id], first)

    def test_xavier_bound_value(self):
        # 57,000-token table with width 4096
        assert xavier_bound(57000, 4096) == pytest.approx(0.009910, abs=5e-7)

    def test_xavier_values_within_bound(self, ext):
        base = _base_matrix(ext, dim=32)
        out = extend_embeddings(base, ext, InitStrategy("xavier_uniform", seed=5))
        bound = xavier_bound(ext.vocab_size, 32)
        new = out.data[ext.base.vocab_size:]
        assert np.all(np.abs(new) < bound)

    def test_xavier_fan_override(self, ext):
        base = _base_matrix(ext, dim=32)
        s = InitStrategy("xavier_uniform", seed=5, fan_in=100, fan_out=28)
        out = extend_embeddings(base, ext, s)
        new = out.data[ext.base.vocab_size:]
        assert np.all(np.abs(new) < xavier_bound(100, 28))

    def test_gaussian_statistics(self, ext):
        base = _base_matrix(ext, dim=2048)
        out = extend_embeddings(base, ext, InitStrategy("gaussian", seed=7))
        new = out.data[ext.base.vocab_size:].ravel()
        assert abs(new.mean()) < 1e-2
        assert 0.018 < new.std() < 0.022

    def test_unknown_strategy(self):
        with pytest.raises(EmbeddingError):
            InitStrategy("random")

    def test_nonpositive_std(self):
        with pytest.raises(EmbeddingError):
            InitStrategy("gaussian", gaussian_std=0.0)


class TestExtendContract:
    def test_base_rows_bitwise_preserved(self, ext):
        base = _base_matrix(ext)
        for kind in ("gaussian", "xavier_uniform", "avg_all", "avg_subwords"):
            out = extend_embeddings(base, ext, InitStrategy(kind, seed=3))
            assert out.data[: base.rows].tobytes() == base.data.tobytes()

    def test_row_count(self, ext):
        base = _base_matrix(ext)
        out = extend_embeddings(base, ext, InitStrategy("avg_all"))
        assert out.rows == base.rows + len(ext.added)
        assert out.dim == base.dim

    def test_deterministic(self, ext):
        base = _base_matrix(ext)
        a = extend_embeddings(base, ext, InitStrategy("gaussian", seed=11))
        b = extend_embeddings(base, ext, InitStrategy("gaussian", seed=11))
        assert a.data.tobytes() == b.data.tobytes()
        c = extend_embeddings(base, ext, InitStrategy("gaussian", seed=12))
        assert a.data.tobytes() != c.data.tobytes()

    def test_row_count_mismatch_rejected(self, ext):
        rng = np.random.Generator(np.random.PCG64(1))
        wrong = EmbeddingMatrix(rng.normal(size=(ext.base.vocab_size - 1, 8)).astype(np.float32))
        with pytest.raises(EmbeddingError, match="rows"):
            extend_embeddings(wrong, ext, InitStrategy("avg_all"))

    def test_nonfinite_base_rejected(self, ext):
        data = np.zeros((ext.base.vocab_size, 4), dtype=np.float32)
        data[0, 0] = np.nan
        with pytest.raises(EmbeddingError, match="finite"):
            EmbeddingMatrix(data)


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.Generator(np.random.PCG64(9))
        m = EmbeddingMatrix(rng.normal(size=(10, 8)).astype(np.float32))
        p = tmp_path / "m.lemb"
        save_embeddings(m, p, tokenizer_sha256="ab" * 32)
        loaded = load_embeddings(p)
        assert loaded.data.tobytes() == m.data.tobytes()
        assert (loaded.rows, loaded.dim) == (10, 8)

    def test_sidecar_written(self, tmp_path):
        import json

        m = EmbeddingMatrix(np.zeros((3, 2), dtype=np.float32))
        p = tmp_path / "m.lemb"
        save_embeddings(m, p, tokenizer_sha256="00" * 32)
        side = json.loads((tmp_path / "m.lemb.json").read_text())
        assert side == {"rows": 3, "dim": 2, "tokenizer_sha256": "00" * 32}

    def test_truncated_payload_reports_byte_counts(self, tmp_path):
        m = EmbeddingMatrix(np.ones((4, 4), dtype=np.float32))
        p = tmp_path / "m.lemb"
        save_embeddings(m, p)
        blob = p.read_bytes()
        p.write_bytes(blob[:-6])
        with pytest.raises(EmbeddingError, match=r"\d+ bytes"):
            load_embeddings(p)

    def test_header_payload_mismatch(self, tmp_path):
        # header claims 10x8 but payload holds 9 rows
        m = EmbeddingMatrix(np.ones((10, 8), dtype=np.float32))
        p = tmp_path / "m.lemb"
        save_embeddings(m, p)
        blob = p.read_bytes()
        p.write_bytes(blob[: 24 + 9 * 8 * 4])
        with pytest.raises(EmbeddingError, match="header implies"):
            load_embeddings(p)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "m.lemb"
        p.write_bytes(b"NOPE" + b"\x00" * 20)
        with pytest.raises(EmbeddingError, match="magic"):
            load_embeddings(p)
