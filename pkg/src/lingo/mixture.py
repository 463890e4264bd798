"""Seeded data mixtures and fixed-length sequence packing.

Pretraining mixtures anchor on the target pool (consumed exactly once) and
scale the English side to the requested token ratio, cycling the English
pool into extra epochs up to a hard cap of 4. Alignment mixtures count
example pairs instead of tokens. Every build is a deterministic function
of its inputs and seed, and is recorded in a manifest that can be
re-validated later.
"""

import hashlib
import json
import math
import os
import random
import struct
import time
import warnings
from dataclasses import dataclass, field

from . import __version__ as _tool_version
from .errors import CorpusError, MixtureError

DEFAULT_EPOCH_CAP = 4
DEFAULT_SEQ_LEN = 4096
DEFAULT_TOLERANCE = 0.01

PACK_MAGIC = b"LPAK"
PACK_VERSION = 1


def _utc_now():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _rng(seed, label):
    # string seeding is stable across processes and platforms
    return random.Random(f"{seed}:{label}")


@dataclass
class ManifestEntry:
    pool: str
    documents: list
    epochs: float
    token_count: int | None = None
    pair_count: int | None = None

    def to_dict(self):
        d = {"pool": self.pool, "documents": list(self.documents), "epochs": self.epochs}
        if self.token_count is not None:
            d["token_count"] = self.token_count
        if self.pair_count is not None:
            d["pair_count"] = self.pair_count
        return d


@dataclass
class MixtureManifest:
    seed: int
    kind: str  # pretrain | sft | dpo
    entries: list
    ratio: tuple | None = None
    tolerance: float = DEFAULT_TOLERANCE
    tokenizer_sha256: str = ""
    created_utc: str = field(default_factory=_utc_now)
    tool_version: str = _tool_version

    def entry(self, pool):
        for e in self.entries:
            if e.pool == pool:
                return e
        raise MixtureError(f"manifest has no pool named {pool!r}")

    def to_dict(self):
        return {
            "seed": self.seed,
            "kind": self.kind,
            "entries": [e.to_dict() for e in self.entries],
            "ratio": list(self.ratio) if self.ratio else None,
            "tolerance": self.tolerance,
            "tokenizer_sha256": self.tokenizer_sha256,
            "created_utc": self.created_utc,
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            entries = [
                ManifestEntry(
                    pool=e["pool"],
                    documents=list(e["documents"]),
                    epochs=float(e["epochs"]),
                    token_count=e.get("token_count"),
                    pair_count=e.get("pair_count"),
                )
                for e in d["entries"]
            ]
            return cls(
                seed=d["seed"],
                kind=d["kind"],
                entries=entries,
                ratio=tuple(d["ratio"]) if d.get("ratio") else None,
                tolerance=d.get("tolerance", DEFAULT_TOLERANCE),
                tokenizer_sha256=d.get("tokenizer_sha256", ""),
                created_utc=d.get("created_utc", ""),
                tool_version=d.get("tool_version", ""),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise MixtureError(f"malformed manifest: {e}") from e

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return cls.from_dict(json.load(fh))
        except json.JSONDecodeError as e:
            raise MixtureError(f"{path}: malformed manifest JSON: {e.msg}") from e


@dataclass(frozen=True)
class PreferencePair:
    """One alignment example: a prompt with a preferred and rejected reply."""

    id: str
    prompt: str
    chosen: str
    rejected: str
    lang: str
    origin: str  # human | machine_translated

    def __post_init__(self):
        if not self.prompt or not self.chosen or not self.rejected:
            raise CorpusError(f"preference pair {self.id!r} has an empty field")
        if self.chosen == self.rejected:
            raise CorpusError(f"preference pair {self.id!r} has chosen == rejected")


def load_pairs_jsonl(path):
    """Load preference pairs from JSONL; missing ids become <filename>:<line>."""
    from pathlib import Path

    name = Path(path).name
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON: {e.msg}") from e
            missing = [k for k in ("prompt", "chosen", "rejected", "lang", "origin") if k not in obj]
            if missing:
                raise CorpusError(f"{path}: line {lineno}: missing fields {missing}")
            pairs.append(
                PreferencePair(
                    id=str(obj.get("id") or f"{name}:{lineno}"),
                    prompt=obj["prompt"],
                    chosen=obj["chosen"],
                    rejected=obj["rejected"],
                    lang=obj["lang"],
                    origin=obj["origin"],
                )
            )
    return pairs


def _doc_tokens(docs, tokenizer):
    """Materialize (doc, token_count) preserving order; rejects duplicate ids."""
    out = []
    seen = set()
    for doc in docs:
        if doc.id in seen:
            raise MixtureError(f"duplicate document id {doc.id!r} in pool")
        seen.add(doc.id)
        out.append((doc, len(tokenizer.encode(doc.text))))
    return out


def build_pretrain_mixture(
    english_docs,
    target_docs,
    ratio,
    tokenizer,
    seed,
    epoch_cap=DEFAULT_EPOCH_CAP,
    allow_cap_clamp=False,
    tolerance=DEFAULT_TOLERANCE,
    tokenizer_sha256="",
):
    """Build a token-ratio pretraining mixture anchored on the target pool.

    The target pool is consumed exactly once; English documents are sampled
    without replacement (reshuffling each epoch) until the requested
    english:target token ratio is met. Exceeding epoch_cap on the English
    pool is an error unless allow_cap_clamp is set.
    """
    en_units, target_units = ratio
    if en_units <= 0 or target_units <= 0:
        raise MixtureError(f"ratio units must be positive, got {ratio}")
    target = _doc_tokens(target_docs, tokenizer)
    if not target:
        raise MixtureError("target pool is empty")
    english = _doc_tokens(english_docs, tokenizer)
    if not english:
        raise MixtureError("english pool is empty")

    target_order = list(range(len(target)))
    _rng(seed, "target").shuffle(target_order)
    target_tokens = sum(n for _, n in target)

    required = target_tokens * en_units / target_units
    en_pool_tokens = sum(n for _, n in english)
    required_epochs = required / en_pool_tokens
    if required_epochs > epoch_cap:
        if not allow_cap_clamp:
            raise MixtureError(
                f"english pool requires {required_epochs:.2f} epochs, cap is {epoch_cap}"
            )
        warnings.warn(
            f"english requirement of {required_epochs:.2f} epochs clamped to cap {epoch_cap}"
        )
        required = epoch_cap * en_pool_tokens

    en_ids = []
    en_used = 0
    epoch = 0
    rng = _rng(seed, "english")
    while en_used < required and not math.isclose(en_used, required):
        order = list(range(len(english)))
        rng.shuffle(order)
        for idx in order:
            doc, n = english[idx]
            if en_used + n >= required:
                # take the final document only if that lands closer to the budget
                if (en_used + n - required) <= (required - en_used):
                    en_ids.append(doc.id)
                    en_used += n
                break
            en_ids.append(doc.id)
            en_used += n
        epoch += 1
        if epoch > epoch_cap + 1:
            break

    entries = [
        ManifestEntry(
            pool="english",
            documents=en_ids,
            epochs=en_used / en_pool_tokens,
            token_count=en_used,
        ),
        ManifestEntry(
            pool="target",
            documents=[target[i][0].id for i in target_order],
            epochs=1.0,
            token_count=target_tokens,
        ),
    ]
    return MixtureManifest(
        seed=seed,
        kind="pretrain",
        entries=entries,
        ratio=(en_units, target_units),
        tolerance=tolerance,
        tokenizer_sha256=tokenizer_sha256,
    )


def build_even_multilingual_mixture(pools, tokenizer, seed, tokenizer_sha256=""):
    """Build a mixture where every language contributes the same token count.

    The per-language budget is the smallest pool's total token count; each
    pool is seeded-shuffled and subsampled to that budget (single epoch).
    """
    if len(pools) < 2:
        raise MixtureError(f"need at least 2 language pools, got {len(pools)}")
    counted = []
    for lang, docs in pools:
        dt = _doc_tokens(docs, tokenizer)
        if not dt:
            raise MixtureError(f"pool for language {lang!r} is empty")
        counted.append((lang, dt))
    budget = min(sum(n for _, n in dt) for _, dt in counted)

    entries = []
    for lang, dt in counted:
        order = list(range(len(dt)))
        _rng(seed, f"even:{lang}").shuffle(order)
        ids = []
        used = 0
        total = sum(n for _, n in dt)
        for idx in order:
            doc, n = dt[idx]
            ids.append(doc.id)
            used += n
            if used >= budget:
                break
        entries.append(
            ManifestEntry(pool=lang, documents=ids, epochs=used / total, token_count=used)
        )
    return MixtureManifest(
        seed=seed,
        kind="pretrain",
        entries=entries,
        ratio=None,
        tokenizer_sha256=tokenizer_sha256,
    )


def build_sft_mixture(english_pairs, translated_pairs, seed):
    """Build a 1:1 instruction-tuning mixture of English and translated pairs."""
    if not english_pairs:
        raise MixtureError("english pair pool is empty")
    if not translated_pairs:
        raise MixtureError("translated pair pool is empty")
    n = min(len(english_pairs), len(translated_pairs))
    en_sample = _rng(seed, "sft:english").sample(list(english_pairs), n)
    tr_sample = _rng(seed, "sft:translated").sample(list(translated_pairs), n)
    entries = [
        ManifestEntry(pool="english", documents=[p.id for p in en_sample], epochs=1.0,
                      pair_count=n),
        ManifestEntry(pool="translated", documents=[p.id for p in tr_sample], epochs=1.0,
                      pair_count=n),
    ]
    return MixtureManifest(seed=seed, kind="sft", entries=entries, ratio=(1, 1))


def build_dpo_mixture(english_pairs, target_pairs, ratio, seed):
    """Build a preference-pair mixture keeping all English data.

    The target pool is downsampled without replacement to
    floor(|english| * target_units / en_units); upsampling is never done,
    so an undersized target pool is an error.
    """
    en_units, target_units = ratio
    if en_units <= 0 or target_units <= 0:
        raise MixtureError(f"ratio units must be positive, got {ratio}")
    if not english_pairs:
        raise MixtureError("english pair pool is empty")
    if not target_pairs:
        raise MixtureError("target pair pool is empty")
    need = (len(english_pairs) * target_units) // en_units
    if need > len(target_pairs):
        raise MixtureError(
            f"ratio {en_units}:{target_units} needs {need} target pairs, "
            f"pool has only {len(target_pairs)}"
        )
    en_order = list(english_pairs)
    _rng(seed, "dpo:english").shuffle(en_order)
    tgt_sample = _rng(seed, "dpo:target").sample(list(target_pairs), need)
    entries = [
        ManifestEntry(pool="english", documents=[p.id for p in en_order], epochs=1.0,
                      pair_count=len(en_order)),
        ManifestEntry(pool="target", documents=[p.id for p in tgt_sample], epochs=1.0,
                      pair_count=need),
    ]
    return MixtureManifest(seed=seed, kind="dpo", entries=entries, ratio=(en_units, target_units))


# --- packing ---------------------------------------------------------------


@dataclass
class PackedSequence:
    ids: list
    boundaries: list  # offsets in [1, seq_len-1] where a new document starts
    carry_in: bool  # first token continues a document from the previous block


@dataclass
class PackedDataset:
    seq_len: int
    sequences: list


def pack_sequences(manifest, docs_by_id, tokenizer, seq_len=DEFAULT_SEQ_LEN, seed=None):
    """Pack a pretraining mixture into fixed-length blocks with document boundaries.

    Documents are tokenized in the manifest's sampled order (entries
    concatenated), then chunked into consecutive seq_len blocks; a seed, if
    given, first interleaves the pools with one deterministic global
    shuffle. Documents may span blocks; the final incomplete block is
    dropped.
    """
    if manifest.kind != "pretrain":
        raise MixtureError(f"can only pack pretrain manifests, got kind {manifest.kind!r}")
    if seq_len < 2:
        raise MixtureError(f"seq_len must be at least 2, got {seq_len}")
    instances = [doc_id for e in manifest.entries for doc_id in e.documents]
    if not instances:
        raise MixtureError("manifest contains no documents")
    if seed is not None:
        _rng(seed, "pack").shuffle(instances)

    stream = []
    doc_starts = []  # offsets into stream where a document begins
    for doc_id in instances:
        doc = docs_by_id.get(doc_id)
        if doc is None:
            raise MixtureError(f"manifest references unknown document {doc_id!r}")
        ids = tokenizer.encode(doc.text)
        if not ids:
            continue
        doc_starts.append(len(stream))
        stream.extend(ids)

    n_blocks = len(stream) // seq_len
    if n_blocks == 0:
        warnings.warn(
            f"total of {len(stream)} tokens is shorter than one {seq_len}-token block; "
            "no sequences emitted"
        )
    sequences = []
    starts = set(doc_starts)
    for b in range(n_blocks):
        lo = b * seq_len
        ids = stream[lo:lo + seq_len]
        boundaries = [off - lo for off in range(lo + 1, lo + seq_len) if off in starts]
        carry_in = lo not in starts
        sequences.append(PackedSequence(ids=ids, boundaries=boundaries, carry_in=carry_in))
    return PackedDataset(seq_len=seq_len, sequences=sequences)


def save_packed(ds, path, manifest_path=""):
    """Write the binary packed-dataset file and its JSON sidecar."""
    buf = bytearray()
    buf += PACK_MAGIC
    buf += struct.pack("<IIQ", PACK_VERSION, ds.seq_len, len(ds.sequences))
    for seq in ds.sequences:
        if len(seq.ids) != ds.seq_len:
            raise MixtureError(
                f"sequence has {len(seq.ids)} tokens, expected {ds.seq_len}"
            )
        if len(seq.boundaries) > 0xFFFF:
            raise MixtureError("too many document boundaries for one sequence")
        buf += struct.pack("<BH", 1 if seq.carry_in else 0, len(seq.boundaries))
        buf += struct.pack(f"<{len(seq.boundaries)}I", *seq.boundaries)
        buf += struct.pack(f"<{ds.seq_len}I", *seq.ids)
    blob = bytes(buf)
    with open(path, "wb") as fh:
        fh.write(blob)
    sidecar = {
        "magic": PACK_MAGIC.decode("ascii"),
        "version": PACK_VERSION,
        "seq_len": ds.seq_len,
        "n_seqs": len(ds.sequences),
        "manifest_path": str(manifest_path),
        "sha256": hashlib.sha256(blob).hexdigest(),
    }
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_packed(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != PACK_MAGIC:
        raise MixtureError(f"{path}: bad magic {blob[:4]!r}, expected {PACK_MAGIC!r}")
    if len(blob) < 20:
        raise MixtureError(f"{path}: truncated header")
    version, seq_len, n_seqs = struct.unpack("<IIQ", blob[4:20])
    if version != PACK_VERSION:
        raise MixtureError(f"{path}: unsupported packed format version {version}")
    off = 20
    sequences = []
    for _ in range(n_seqs):
        if off + 3 > len(blob):
            raise MixtureError(f"{path}: truncated at sequence header (offset {off})")
        carry_in, n_bounds = struct.unpack_from("<BH", blob, off)
        off += 3
        need = 4 * n_bounds + 4 * seq_len
        if off + need > len(blob):
            raise MixtureError(
                f"{path}: truncated sequence payload, need {need} bytes at offset {off}"
            )
        boundaries = list(struct.unpack_from(f"<{n_bounds}I", blob, off))
        off += 4 * n_bounds
        ids = list(struct.unpack_from(f"<{seq_len}I", blob, off))
        off += 4 * seq_len
        sequences.append(PackedSequence(ids=ids, boundaries=boundaries, carry_in=bool(carry_in)))
    if off != len(blob):
        raise MixtureError(f"{path}: {len(blob) - off} trailing bytes after last sequence")
    return PackedDataset(seq_len=seq_len, sequences=sequences)


def validate_manifest(manifest, docs_by_id=None, pairs_by_id=None, epoch_cap=DEFAULT_EPOCH_CAP):
    """Re-check manifest invariants; returns a report instead of raising."""
    failures = []
    epochs = {e.pool: e.epochs for e in manifest.entries}
    if manifest.kind == "pretrain":
        for e in manifest.entries:
            if e.epochs > epoch_cap:
                failures.append(
                    f"pool {e.pool!r} uses {e.epochs:.2f} epochs, cap is {epoch_cap}"
                )
    known = docs_by_id if manifest.kind == "pretrain" else pairs_by_id
    if known is not None:
        for e in manifest.entries:
            for doc_id in e.documents:
                if doc_id not in known:
                    failures.append(f"pool {e.pool!r} references missing document {doc_id!r}")
    realized = None
    if manifest.ratio and manifest.kind in ("pretrain", "dpo"):
        en = manifest.entry("english")
        other = manifest.entry("target" if manifest.kind in ("pretrain", "dpo") else "translated")
        en_n = en.token_count if manifest.kind == "pretrain" else en.pair_count
        ot_n = other.token_count if manifest.kind == "pretrain" else other.pair_count
        if ot_n:
            realized = en_n / ot_n
            requested = manifest.ratio[0] / manifest.ratio[1]
            if manifest.kind == "pretrain" and abs(realized - requested) > manifest.tolerance * requested:
                failures.append(
                    f"realized english:target ratio {realized:.4f} deviates more than "
                    f"{manifest.tolerance:.0%} from requested {requested:.4f}"
                )
    return {
        "ok": not failures,
        "failures": failures,
        "kind": manifest.kind,
        "epochs": epochs,
        "realized_ratio": realized,
    }
