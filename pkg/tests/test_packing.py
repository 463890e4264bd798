import random

import pytest

from lingo import (
    Document,
    ManifestEntry,
    MixtureManifest,
    load_packed,
    pack_sequences,
    save_packed,
)
from lingo.bpe import TokenizerModel
from lingo.errors import MixtureError

from oracles import brute_pack, reconstruct_documents


BYTE_TOKENIZER = TokenizerModel([bytes([i]) for i in range(256)], [])


def _manifest_for(docs):
    return MixtureManifest(
        seed=0,
        kind="pretrain",
        entries=[
            ManifestEntry(
                pool="target",
                documents=[d.id for d in docs],
                epochs=1.0,
                token_count=sum(len(d.text) for d in docs),
            )
        ],
    )


def _docs(sizes):
    rng = random.Random(99)
    return [
        Document(
            id=f"d{i}",
            text="".join(rng.choice("abcdefgh") for _ in range(n)),
            lang="xx",
        )
        for i, n in enumerate(sizes)
    ]


class TestPackSequences:
    def test_hand_simulated_example(self):
        # 3000 + 3000 + 2000 tokens, seq_len 4096 -> one block, boundary at 3000
        docs = _docs([3000, 3000, 2000])
        ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                            BYTE_TOKENIZER, seq_len=4096)
        assert len(ds.sequences) == 1
        seq = ds.sequences[0]
        assert seq.boundaries == [3000]
        assert seq.carry_in is False
        assert len(seq.ids) == 4096

    def test_exact_fit_no_boundaries(self):
        docs = _docs([4096])
        ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                            BYTE_TOKENIZER, seq_len=4096)
        assert len(ds.sequences) == 1
        assert ds.sequences[0].boundaries == []
        assert ds.sequences[0].carry_in is False

    def test_too_short_warns_and_emits_nothing(self):
        docs = _docs([100])
        with pytest.warns(UserWarning, match="no sequences"):
            ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                                BYTE_TOKENIZER, seq_len=4096)
        assert ds.sequences == []

    def test_carry_in_on_spanning_document(self):
        docs = _docs([150, 80])
        ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                            BYTE_TOKENIZER, seq_len=100)
        assert [s.carry_in for s in ds.sequences] == [False, True]
        assert ds.sequences[1].boundaries == [50]

    def test_unknown_document_rejected(self):
        docs = _docs([10])
        with pytest.raises(MixtureError, match="d0"):
            pack_sequences(_manifest_for(docs), {}, BYTE_TOKENIZER, seq_len=8)

    def test_non_pretrain_manifest_rejected(self):
        m = MixtureManifest(seed=0, kind="sft", entries=[])
        with pytest.raises(MixtureError, match="pretrain"):
            pack_sequences(m, {}, BYTE_TOKENIZER)

    def test_empty_manifest_rejected(self):
        m = MixtureManifest(seed=0, kind="pretrain", entries=[])
        with pytest.raises(MixtureError, match="no documents"):
            pack_sequences(m, {}, BYTE_TOKENIZER)

    def test_seeded_interleave_is_deterministic(self):
        docs = _docs([50] * 40)
        by_id = {d.id: d for d in docs}
        a = pack_sequences(_manifest_for(docs), by_id, BYTE_TOKENIZER, seq_len=64, seed=4)
        b = pack_sequences(_manifest_for(docs), by_id, BYTE_TOKENIZER, seq_len=64, seed=4)
        assert [s.ids for s in a.sequences] == [s.ids for s in b.sequences]

    @pytest.mark.parametrize("trial", range(20))
    def test_matches_brute_oracle(self, trial):
        rng = random.Random(1000 + trial)
        sizes = [rng.randint(1, 400) for _ in range(rng.randint(1, 25))]
        seq_len = rng.choice([16, 64, 128, 333])
        docs = _docs(sizes)
        ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                            BYTE_TOKENIZER, seq_len=seq_len)
        blocks, carries, bounds, dropped = brute_pack(
            [list(d.text.encode()) for d in docs], seq_len
        )
        assert [s.ids for s in ds.sequences] == blocks
        assert [s.carry_in for s in ds.sequences] == carries
        assert [s.boundaries for s in ds.sequences] == bounds
        # conservation
        total = sum(sizes)
        assert seq_len * len(ds.sequences) + dropped == total

    def test_reconstruction_oracle(self):
        rng = random.Random(5)
        sizes = [rng.randint(1, 300) for _ in range(30)]
        seq_len = 128
        docs = _docs(sizes)
        ds = pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                            BYTE_TOKENIZER, seq_len=seq_len)
        runs = reconstruct_documents(
            [s.ids for s in ds.sequences],
            [s.carry_in for s in ds.sequences],
            [s.boundaries for s in ds.sequences],
            seq_len,
        )
        packed_total = seq_len * len(ds.sequences)
        expected = []
        used = 0
        for d in docs:
            toks = list(d.text.encode())
            if used + len(toks) <= packed_total:
                expected.append(toks)
                used += len(toks)
            else:
                if packed_total - used > 0:
                    expected.append(toks[: packed_total - used])
                break
        assert runs == expected


class TestBinaryFormat:
    def _dataset(self, sizes, seq_len):
        docs = _docs(sizes)
        return pack_sequences(_manifest_for(docs), {d.id: d for d in docs},
                              BYTE_TOKENIZER, seq_len=seq_len)

    def test_round_trip(self, tmp_path):
        ds = self._dataset([100, 200, 50], 64)
        p = tmp_path / "d.lpak"
        save_packed(ds, p, manifest_path="m.json")
        loaded = load_packed(p)
        assert loaded.seq_len == ds.seq_len
        assert [s.ids for s in loaded.sequences] == [s.ids for s in ds.sequences]
        assert [s.boundaries for s in loaded.sequences] == [s.boundaries for s in ds.sequences]
        assert [s.carry_in for s in loaded.sequences] == [s.carry_in for s in ds.sequences]

    def test_sidecar_checksum(self, tmp_path):
        import hashlib
        import json

        ds = self._dataset([100], 32)
        p = tmp_path / "d.lpak"
        save_packed(ds, p, manifest_path="mix.json")
        side = json.loads((tmp_path / "d.lpak.json").read_text())
        assert side["sha256"] == hashlib.sha256(p.read_bytes()).hexdigest()
        assert side["seq_len"] == 32
        assert side["manifest_path"] == "mix.json"

    def test_truncated_file(self, tmp_path):
        ds = self._dataset([300], 64)
        p = tmp_path / "d.lpak"
        save_packed(ds, p)
        p.write_bytes(p.read_bytes()[:-10])
        with pytest.raises(MixtureError, match="truncated"):
            load_packed(p)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "d.lpak"
        p.write_bytes(b"XXXX" + b"\x00" * 16)
        with pytest.raises(MixtureError, match="magic"):
            load_packed(p)

    def test_trailing_garbage(self, tmp_path):
        ds = self._dataset([300], 64)
        p = tmp_path / "d.lpak"
        save_packed(ds, p)
        p.write_bytes(p.read_bytes() + b"\x00")
        with pytest.raises(MixtureError, match="trailing"):
            load_packed(p)
