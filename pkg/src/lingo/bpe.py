"""Byte-fallback BPE: training, encoding/decoding, and canonical serialization.

The base alphabet is the 256 single bytes (ids 0..255), so every byte
string is encodable and decode(encode(s)) == s for any UTF-8 input.
Merges are applied in creation order: each rule is exhausted left to
right before the next rule is considered.
"""

import heapq
import json
from bisect import bisect_right
from collections import defaultdict

from .errors import TokenizerError

FORMAT_VERSION = 1
MODEL_TYPE = "bpe-bytefallback"


class TokenizerModel:
    """A trained byte-fallback BPE model.

    token_bytes maps id -> byte string; merges is the ordered list of
    (left_id, right_id) pairs; merge i creates token id 256 + i.
    """

    def __init__(self, token_bytes, merges):
        self.token_bytes = list(token_bytes)
        self.merges = list(merges)
        self.vocab = {b: i for i, b in enumerate(self.token_bytes)}
        if len(self.vocab) != len(self.token_bytes):
            raise TokenizerError("duplicate token strings in vocabulary")
        self._plan = _MergePlan(self.token_bytes, self.merges)

    @property
    def vocab_size(self):
        return len(self.token_bytes)

    def encode(self, text):
        """Tokenize a string into a list of token ids."""
        return self._plan.apply(list(text.encode("utf-8")))

    def encode_bytes(self, data):
        """Tokenize a raw byte string (need not be valid UTF-8)."""
        return self._plan.apply(list(data))

    def decode(self, ids):
        """Reconstruct a string from token ids."""
        return decode_ids(self.token_bytes, ids)

    def __eq__(self, other):
        return (
            isinstance(other, TokenizerModel)
            and self.token_bytes == other.token_bytes
            and self.merges == other.merges
        )


class _MergePlan:
    """Preprocessed merge rules for fast sequential application."""

    def __init__(self, token_bytes, merges):
        vocab = {b: i for i, b in enumerate(token_bytes)}
        self.ops = []
        self.ranks = defaultdict(list)  # (l, r) -> ranks of rules for this pair
        for rank, (l, r) in enumerate(merges):
            if l >= len(token_bytes) or r >= len(token_bytes):
                raise TokenizerError(f"merge {rank} references unknown token id")
            merged = token_bytes[l] + token_bytes[r]
            new_id = vocab.get(merged)
            if new_id is None:
                raise TokenizerError(
                    f"merge {rank} produces {merged!r} which is not in the vocabulary"
                )
            self.ops.append((l, r, new_id))
            self.ranks[(l, r)].append(rank)

    def _first_rank_after(self, pair, after):
        ranks = self.ranks.get(pair)
        if not ranks:
            return None
        i = bisect_right(ranks, after)
        return ranks[i] if i < len(ranks) else None

    def apply(self, ids):
        n = len(ids)
        if n < 2:
            return ids
        pending = {}  # rank -> candidate left positions
        for i in range(n - 1):
            rk = self._first_rank_after((ids[i], ids[i + 1]), -1)
            if rk is not None:
                pending.setdefault(rk, []).append(i)
        heap = list(pending)
        heapq.heapify(heap)
        nxt = list(range(1, n + 1))
        prv = list(range(-1, n - 1))
        alive = bytearray(b"\x01" * n)
        while heap:
            rk = heapq.heappop(heap)
            l, r, new = self.ops[rk]
            positions = pending.pop(rk, [])
            positions.sort()
            for i in positions:
                if not alive[i] or ids[i] != l:
                    continue
                j = nxt[i]
                if j >= n or not alive[j] or ids[j] != r:
                    continue
                ids[i] = new
                alive[j] = 0
                k = nxt[j]
                nxt[i] = k
                if k < n:
                    prv[k] = i
                p = prv[i]
                if p >= 0:
                    rk2 = self._first_rank_after((ids[p], new), rk)
                    if rk2 is not None:
                        if rk2 not in pending:
                            pending[rk2] = []
                            heapq.heappush(heap, rk2)
                        pending[rk2].append(p)
                if k < n:
                    rk3 = self._first_rank_after((new, ids[k]), rk)
                    if rk3 is not None:
                        if rk3 not in pending:
                            pending[rk3] = []
                            heapq.heappush(heap, rk3)
                        pending[rk3].append(i)
        return [ids[i] for i in range(n) if alive[i]]


def decode_ids(token_bytes, ids):
    parts = []
    for pos, tid in enumerate(ids):
        if not 0 <= tid < len(token_bytes):
            raise TokenizerError(f"unknown token id {tid} at position {pos}")
        parts.append(token_bytes[tid])
    return b"".join(parts).decode("utf-8", errors="replace")


def train_bpe(docs, vocab_size):
    """Train a byte-fallback BPE model.

    Starts from the 256 byte tokens and repeatedly merges the most frequent
    adjacent pair (ties broken by lexicographically smaller byte-sequence
    pair) until vocab_size tokens exist or no pair occurs at least twice.
    Pairs never cross document boundaries.
    """
    if vocab_size < 257:
        raise TokenizerError(f"vocab_size must be at least 257, got {vocab_size}")
    seqs = [list(doc.text.encode("utf-8")) for doc in docs]
    if not any(seqs):
        raise TokenizerError("cannot train on an empty corpus")

    token_bytes = [bytes([i]) for i in range(256)]
    vocab = {b: i for i, b in enumerate(token_bytes)}

    counts = {}
    occ = defaultdict(list)  # pair -> candidate (seq, pos) sites; may hold stale entries
    for si, seq in enumerate(seqs):
        for i in range(len(seq) - 1):
            p = (seq[i], seq[i + 1])
            counts[p] = counts.get(p, 0) + 1
            occ[p].append((si, i))

    heap = [(-c, token_bytes[l], token_bytes[r], l, r) for (l, r), c in counts.items()]
    heapq.heapify(heap)
    nxts = [list(range(1, len(s) + 1)) for s in seqs]
    prvs = [list(range(-1, len(s) - 1)) for s in seqs]
    alives = [bytearray(b"\x01" * len(s)) for s in seqs]
    merges = []

    def bump(pair, si, pos):
        c = counts.get(pair, 0) + 1
        counts[pair] = c
        occ[pair].append((si, pos))
        heapq.heappush(heap, (-c, token_bytes[pair[0]], token_bytes[pair[1]], pair[0], pair[1]))

    def drop(pair):
        c = counts.get(pair)
        if c:
            counts[pair] = c - 1

    while len(token_bytes) < vocab_size:
        best = None
        while heap:
            negc, lb, rb, l, r = heapq.heappop(heap)
            c = counts.get((l, r), 0)
            if c < 2:
                continue
            if c == -negc:
                best = (l, r)
                break
            # stale entry: re-enter with the current count
            heapq.heappush(heap, (-c, lb, rb, l, r))
        if best is None:
            break
        l, r = best
        new_id = len(token_bytes)
        merged = token_bytes[l] + token_bytes[r]
        token_bytes.append(merged)
        vocab[merged] = new_id
        merges.append((l, r))
        counts.pop((l, r), None)
        positions = sorted(occ.pop((l, r), ()))
        for si, i in positions:
            seq, nxt, prv, alive = seqs[si], nxts[si], prvs[si], alives[si]
            if not alive[i] or seq[i] != l:
                continue
            j = nxt[i]
            if j >= len(seq) or not alive[j] or seq[j] != r:
                continue
            p = prv[i]
            if p >= 0:
                drop((seq[p], l))
            k = nxt[j]
            if k < len(seq):
                drop((r, seq[k]))
            seq[i] = new_id
            alive[j] = 0
            nxt[i] = k
            if k < len(seq):
                prv[k] = i
                bump((new_id, seq[k]), si, i)
            if p >= 0:
                bump((seq[p], new_id), si, p)

    return TokenizerModel(token_bytes, merges)


# --- serialization ---------------------------------------------------------

_PRINTABLE = set(range(0x21, 0x7F)) - {0x3C}  # visible ASCII except "<"


def escape_token(b):
    """Escape a token byte string for the JSON tokenizer format.

    Bytes outside visible ASCII (and "<" itself, to keep escapes
    unambiguous) are written as <0xHH>.
    """
    return "".join(chr(x) if x in _PRINTABLE else f"<0x{x:02X}>" for x in b)


def unescape_token(s):
    out = bytearray()
    i = 0
    while i < len(s):
        if s[i] == "<":
            if i + 5 >= len(s) or s[i + 1:i + 3] != "0x" or s[i + 5] != ">":
                raise TokenizerError(f"malformed byte escape in token {s!r}")
            try:
                out.append(int(s[i + 3:i + 5], 16))
            except ValueError:
                raise TokenizerError(f"malformed byte escape in token {s!r}") from None
            i += 6
        else:
            cp = ord(s[i])
            if cp > 0x7E:
                raise TokenizerError(f"non-ASCII character in serialized token {s!r}")
            out.append(cp)
            i += 1
    return bytes(out)


def _model_to_dict(model):
    from .vocab import ExtendedTokenizer

    if isinstance(model, ExtendedTokenizer):
        token_bytes = model.token_bytes
        merges = model.all_merges
        added = [
            {"token": escape_token(t.token), "id": t.id, "subword_ids": list(t.subword_ids)}
            for t in model.added
        ]
    else:
        token_bytes = model.token_bytes
        merges = model.merges
        added = []
    vocab = {escape_token(b): i for i, b in enumerate(token_bytes)}
    return {
        "version": FORMAT_VERSION,
        "model_type": MODEL_TYPE,
        "vocab": dict(sorted(vocab.items())),
        "merges": [
            f"{escape_token(token_bytes[l])} {escape_token(token_bytes[r])}" for l, r in merges
        ],
        "added_tokens": added,
    }


def dumps_tokenizer(model):
    """Canonical JSON text for a model; identical models yield identical bytes."""
    return json.dumps(_model_to_dict(model), ensure_ascii=True, indent=1) + "\n"


def save_tokenizer(model, path):
    data = dumps_tokenizer(model)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(data)


def load_tokenizer(path):
    """Load a TokenizerModel or ExtendedTokenizer, validating all invariants."""
    from .vocab import AddedToken, ExtendedTokenizer

    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise TokenizerError(f"{path}: malformed tokenizer file: {e.msg}") from e
    if not isinstance(obj, dict):
        raise TokenizerError(f"{path}: tokenizer file must be a JSON object")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise TokenizerError(f"{path}: unsupported tokenizer format version {version!r}")
    if obj.get("model_type") != MODEL_TYPE:
        raise TokenizerError(f"{path}: unsupported model_type {obj.get('model_type')!r}")

    raw_vocab = obj.get("vocab")
    if not isinstance(raw_vocab, dict):
        raise TokenizerError(f"{path}: missing vocab table")
    total = len(raw_vocab)
    token_bytes = [None] * total
    for tok, tid in raw_vocab.items():
        if not isinstance(tid, int) or not 0 <= tid < total:
            raise TokenizerError(f"{path}: token {tok!r} has non-dense id {tid!r}")
        if token_bytes[tid] is not None:
            raise TokenizerError(f"{path}: duplicate token id {tid}")
        token_bytes[tid] = unescape_token(tok)
    for i in range(256):
        if i >= total or token_bytes[i] != bytes([i]):
            raise TokenizerError(f"{path}: byte token for id {i} is missing or misplaced")
    vocab = {b: i for i, b in enumerate(token_bytes)}
    if len(vocab) != total:
        raise TokenizerError(f"{path}: duplicate token strings in vocab")

    merges = []
    for mi, entry in enumerate(obj.get("merges", [])):
        parts = entry.split(" ")
        if len(parts) != 2:
            raise TokenizerError(f"{path}: merge {mi} is not a 'left right' pair: {entry!r}")
        lb, rb = unescape_token(parts[0]), unescape_token(parts[1])
        for b in (lb, rb, lb + rb):
            if b not in vocab:
                raise TokenizerError(
                    f"{path}: merge {mi} references token {escape_token(b)!r} not in vocab"
                )
        merges.append((vocab[lb], vocab[rb]))

    added_raw = obj.get("added_tokens", [])
    if not added_raw:
        return TokenizerModel(token_bytes, merges)

    n_added = len(added_raw)
    base_size = total - n_added
    if base_size < 256:
        raise TokenizerError(f"{path}: more added tokens than vocabulary entries")
    n_base_merges = base_size - 256
    if n_base_merges > len(merges):
        raise TokenizerError(f"{path}: fewer merges than base vocabulary implies")
    base = TokenizerModel(token_bytes[:base_size], merges[:n_base_merges])
    added = []
    for ai, entry in enumerate(added_raw):
        try:
            tok = unescape_token(entry["token"])
            tid = entry["id"]
            sub = list(entry["subword_ids"])
        except (KeyError, TypeError) as e:
            raise TokenizerError(f"{path}: malformed added_tokens entry {ai}") from e
        if tid != base_size + ai:
            raise TokenizerError(f"{path}: added token {ai} has non-contiguous id {tid}")
        if token_bytes[tid] != tok:
            raise TokenizerError(f"{path}: added token {ai} disagrees with vocab entry")
        added.append(AddedToken(token=tok, id=tid, subword_ids=sub))
    ext = ExtendedTokenizer(base=base, added=added, appended_merges=merges[n_base_merges:])
    return ext
