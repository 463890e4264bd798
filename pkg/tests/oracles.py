"""Independent brute-force oracles the fast implementations are checked against.

Everything here recomputes from first principles (full rescans, no
incremental state) and must stay independent of the library's code paths.
"""


def apply_one_merge(seq, a, b, new_id):
    """One exhaustive left-to-right pass of a single merge rule."""
    out = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and seq[i] == a and seq[i + 1] == b:
            out.append(new_id)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def brute_train_bpe(texts, vocab_size):
    """Reference BPE trainer: recount all pairs from scratch every step."""
    seqs = [list(t.encode("utf-8")) for t in texts]
    token_bytes = [bytes([i]) for i in range(256)]
    merges = []
    while len(token_bytes) < vocab_size:
        counts = {}
        for seq in seqs:
            for pair in zip(seq, seq[1:]):
                counts[pair] = counts.get(pair, 0) + 1
        best_key = None
        best_pair = None
        for (a, b), c in counts.items():
            if c < 2:
                continue
            key = (-c, token_bytes[a], token_bytes[b])
            if best_key is None or key < best_key:
                best_key = key
                best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair
        new_id = len(token_bytes)
        token_bytes.append(token_bytes[a] + token_bytes[b])
        merges.append((a, b))
        seqs = [apply_one_merge(seq, a, b, new_id) for seq in seqs]
    return token_bytes, merges


def brute_encode(data, token_bytes, merges):
    """Reference encoder: apply each rule with a full pass, in rule order."""
    vocab = {t: i for i, t in enumerate(token_bytes)}
    seq = list(data)
    for a, b in merges:
        new_id = vocab[token_bytes[a] + token_bytes[b]]
        seq = apply_one_merge(seq, a, b, new_id)
    return seq


def brute_pack(doc_token_lists, seq_len):
    """Reference packer: returns (blocks, carries, boundaries, dropped_tail).

    Each block is a list of seq_len token ids; boundaries are in-block
    offsets where a new document starts; carries flag blocks whose first
    token continues the previous document.
    """
    stream = []
    starts = []
    for toks in doc_token_lists:
        if not toks:
            continue
        starts.append(len(stream))
        stream.extend(toks)
    start_set = set(starts)
    n_blocks = len(stream) // seq_len
    blocks, carries, bounds = [], [], []
    for b in range(n_blocks):
        lo = b * seq_len
        blocks.append(stream[lo:lo + seq_len])
        carries.append(lo not in start_set)
        bounds.append([o - lo for o in starts if lo < o < lo + seq_len])
    return blocks, carries, bounds, len(stream) - n_blocks * seq_len


def reconstruct_documents(blocks, carries, bounds, seq_len):
    """Rebuild per-document token runs from packed blocks and boundary metadata."""
    docs = []
    current = None
    for block, carry, bs in zip(blocks, carries, bounds):
        cuts = ([] if carry else [0]) + list(bs)
        pos = 0
        for cut in cuts:
            if cut > pos and current is not None:
                current.extend(block[pos:cut])
            if current is not None:
                docs.append(current)
            current = []
            pos = cut
        if current is not None:
            current.extend(block[pos:])
        else:
            # carry-in with no open document means the very first block
            # starts mid-stream, which pack never produces
            raise AssertionError("carry_in set on a block with no open document")
    if current is not None:
        docs.append(current)
    return docs
