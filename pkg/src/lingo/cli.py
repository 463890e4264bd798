"""Command-line entry point exposing the pipeline as composable subcommands.

Machine-readable JSON goes to stdout, progress lines to stderr. Exit codes:
0 success, 1 usage error, 2 data error. Artifacts are written atomically
(temp file + rename), so a failed run never leaves a partial file behind.
"""

import argparse
import hashlib
import itertools
import json
import os
import sys
import tempfile

from . import __version__
from .bpe import dumps_tokenizer, load_tokenizer, train_bpe
from .corpus import corpus_stats, load_jsonl, load_text_dir
from .embed import (
    EmbeddingMatrix,
    InitStrategy,
    STRATEGIES,
    extend_embeddings,
    load_embeddings,
    save_embeddings,
)
from .errors import LingoError
from .mixture import (
    DEFAULT_EPOCH_CAP,
    DEFAULT_SEQ_LEN,
    MixtureManifest,
    build_dpo_mixture,
    build_even_multilingual_mixture,
    build_pretrain_mixture,
    build_sft_mixture,
    load_pairs_jsonl,
    pack_sequences,
    save_packed,
    validate_manifest,
)
from .vocab import ExtendedTokenizer, extend_vocabulary, fertility


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _log(msg):
    print(msg, file=sys.stderr)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _atomic_write_text(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_writer(path, writer):
    """Run writer(tmp_path) (which may also create tmp_path + '.json'), then rename."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    tmp = tempfile.mktemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        writer(tmp)
        if os.path.exists(tmp + ".json"):
            os.replace(tmp + ".json", path + ".json")
        os.replace(tmp, path)
    except BaseException:
        for p in (tmp, tmp + ".json"):
            if os.path.exists(p):
                os.unlink(p)
        raise


def _sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _parse_ratio(s):
    parts = s.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"ratio must look like A:B, got {s!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"ratio units must be integers, got {s!r}")
    if a <= 0 or b <= 0:
        raise argparse.ArgumentTypeError(f"ratio units must be positive, got {s!r}")
    return (a, b)


def _parse_pool(s):
    if "=" not in s:
        raise argparse.ArgumentTypeError(f"pool must look like LANG=PATH, got {s!r}")
    lang, path = s.split("=", 1)
    if not lang or not path:
        raise argparse.ArgumentTypeError(f"pool must look like LANG=PATH, got {s!r}")
    return (lang, path)


def _add_corpus_args(p, required=True):
    p.add_argument("--corpus", action="append", default=[], metavar="JSONL",
                   help="JSONL corpus file (repeatable)")
    p.add_argument("--text-dir", action="append", default=[], metavar="LANG=DIR",
                   type=_parse_pool, help="directory of .txt files (repeatable)")
    p.add_argument("--default-lang", default=None,
                   help="language tag for JSONL lines without one")
    p.required_corpus = required


def _iter_corpus(args):
    streams = [load_jsonl(path, default_lang=args.default_lang) for path in args.corpus]
    streams += [load_text_dir(d, lang) for lang, d in args.text_dir]
    return itertools.chain.from_iterable(streams)


def build_parser():
    parser = _Parser(prog="lingo", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("LINGO_THREADS", "1")),
                        help="worker threads (output is identical for any value)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("train-bpe", help="train a byte-fallback BPE tokenizer")
    _add_corpus_args(p)
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("extend-vocab", help="add target-language tokens to a base tokenizer")
    p.add_argument("--base", required=True, help="base tokenizer JSON")
    _add_corpus_args(p)
    p.add_argument("--n-new", type=int, default=25000)
    p.add_argument("--budget", type=int, default=None,
                   help="target tokenizer vocab size (default 257 + 2*n_new)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("fertility", help="measure tokens per word over a corpus")
    p.add_argument("--tokenizer", required=True)
    _add_corpus_args(p)
    p.add_argument("--mode", choices=("unicode", "whitespace"), default="unicode")

    p = sub.add_parser("init-embeddings", help="initialize embedding rows for added tokens")
    p.add_argument("--tokenizer", required=True, help="extended tokenizer JSON")
    p.add_argument("--base-embeddings", default=None,
                   help="existing LEMB file for the base vocabulary")
    p.add_argument("--dim", type=int, default=None,
                   help="embedding width when synthesizing a base matrix")
    p.add_argument("--strategy", choices=STRATEGIES, default="avg_subwords")
    p.add_argument("--std", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fan-in", type=int, default=None)
    p.add_argument("--fan-out", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("mix-pretrain", help="build a token-ratio pretraining mixture")
    p.add_argument("--english", action="append", required=True, metavar="JSONL")
    p.add_argument("--target", action="append", required=True, metavar="JSONL")
    p.add_argument("--english-lang", default="en")
    p.add_argument("--target-lang", default=None, help="required when JSONL lines lack lang")
    p.add_argument("--ratio", type=_parse_ratio, default=(1, 3))
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epoch-cap", type=float, default=DEFAULT_EPOCH_CAP)
    p.add_argument("--allow-cap-clamp", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("mix-even", help="build an equal-token multilingual mixture")
    p.add_argument("--pool", action="append", required=True, type=_parse_pool,
                   metavar="LANG=JSONL")
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pack", help="pack a pretraining mixture into fixed-length sequences")
    p.add_argument("--manifest", required=True)
    _add_corpus_args(p)
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--seq-len", type=int, default=DEFAULT_SEQ_LEN)
    p.add_argument("--seed", type=int, default=None,
                   help="interleave pools with a seeded shuffle; default keeps manifest order")
    p.add_argument("--out", required=True)

    p = sub.add_parser("mix-sft", help="build a 1:1 SFT mixture")
    p.add_argument("--english", required=True, metavar="PAIRS_JSONL")
    p.add_argument("--translated", required=True, metavar="PAIRS_JSONL")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("mix-dpo", help="build an English-anchored DPO mixture")
    p.add_argument("--english", required=True, metavar="PAIRS_JSONL")
    p.add_argument("--target", required=True, metavar="PAIRS_JSONL")
    p.add_argument("--ratio", type=_parse_ratio, default=(10, 1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="re-check a manifest against its corpora")
    p.add_argument("--manifest", required=True)
    _add_corpus_args(p, required=False)
    p.add_argument("--pairs", action="append", default=[], metavar="PAIRS_JSONL")
    p.add_argument("--epoch-cap", type=float, default=DEFAULT_EPOCH_CAP)

    p = sub.add_parser("inspect", help="inspect a tokenizer or encode/decode text")
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--encode", default=None, metavar="TEXT")
    p.add_argument("--decode", default=None, metavar="IDS",
                   help="comma-separated token ids")
    p.add_argument("--stats-corpus", default=None, metavar="JSONL",
                   help="also report corpus stats for this file")
    p.add_argument("--default-lang", default=None)

    return parser


def _tokenizer_sha(path):
    return _sha256_file(path)


def _cmd_train_bpe(args):
    docs = list(_iter_corpus(args))
    _log(f"training BPE on {len(docs)} documents to vocab size {args.vocab_size}")
    model = train_bpe(docs, args.vocab_size)
    _atomic_write_text(args.out, dumps_tokenizer(model))
    return {"out": args.out, "vocab_size": model.vocab_size, "merges": len(model.merges)}


def _cmd_extend_vocab(args):
    base = load_tokenizer(args.base)
    if isinstance(base, ExtendedTokenizer):
        raise LingoError("base tokenizer is already extended; multi-stage extension is unsupported")
    docs = list(_iter_corpus(args))
    _log(f"extending {args.base} with {args.n_new} tokens from {len(docs)} documents")
    ext = extend_vocabulary(base, docs, args.n_new, target_vocab_budget=args.budget)
    _atomic_write_text(args.out, dumps_tokenizer(ext))
    return {
        "out": args.out,
        "base_vocab_size": base.vocab_size,
        "added": len(ext.added),
        "appended_merges": len(ext.appended_merges),
        "vocab_size": ext.vocab_size,
    }


def _cmd_fertility(args):
    model = load_tokenizer(args.tokenizer)
    report = fertility(model, _iter_corpus(args), mode=args.mode)
    return report.to_dict()


def _cmd_init_embeddings(args):
    ext = load_tokenizer(args.tokenizer)
    if not isinstance(ext, ExtendedTokenizer):
        raise LingoError(f"{args.tokenizer} has no added tokens; nothing to initialize")
    if args.base_embeddings:
        base = load_embeddings(args.base_embeddings)
    elif args.dim:
        import numpy as np

        rng = np.random.Generator(np.random.PCG64(args.seed + 1))
        base = EmbeddingMatrix(
            rng.normal(0.0, args.std, size=(ext.base.vocab_size, args.dim)).astype(np.float32)
        )
        _log(f"synthesized gaussian base matrix {base.rows}x{base.dim}")
    else:
        raise LingoError("provide --base-embeddings or --dim")
    strategy = InitStrategy(
        kind=args.strategy,
        gaussian_std=args.std,
        seed=args.seed,
        fan_in=args.fan_in,
        fan_out=args.fan_out,
    )
    out = extend_embeddings(base, ext, strategy)
    sha = _tokenizer_sha(args.tokenizer)
    _atomic_writer(args.out, lambda tmp: save_embeddings(out, tmp, tokenizer_sha256=sha))
    return {
        "out": args.out,
        "rows": out.rows,
        "dim": out.dim,
        "added_rows": out.rows - base.rows,
        "strategy": args.strategy,
    }


def _manifest_summary(manifest, out):
    return {
        "out": out,
        "kind": manifest.kind,
        "ratio": list(manifest.ratio) if manifest.ratio else None,
        "entries": [
            {
                "pool": e.pool,
                "documents": len(e.documents),
                "epochs": e.epochs,
                **({"token_count": e.token_count} if e.token_count is not None else {}),
                **({"pair_count": e.pair_count} if e.pair_count is not None else {}),
            }
            for e in manifest.entries
        ],
    }


def _cmd_mix_pretrain(args):
    tokenizer = load_tokenizer(args.tokenizer)
    english = itertools.chain.from_iterable(
        load_jsonl(p, default_lang=args.english_lang) for p in args.english
    )
    target = itertools.chain.from_iterable(
        load_jsonl(p, default_lang=args.target_lang) for p in args.target
    )
    manifest = build_pretrain_mixture(
        english,
        target,
        args.ratio,
        tokenizer,
        args.seed,
        epoch_cap=args.epoch_cap,
        allow_cap_clamp=args.allow_cap_clamp,
        tokenizer_sha256=_tokenizer_sha(args.tokenizer),
    )
    _atomic_write_text(args.out, json.dumps(manifest.to_dict(), indent=1) + "\n")
    return _manifest_summary(manifest, args.out)


def _cmd_mix_even(args):
    tokenizer = load_tokenizer(args.tokenizer)
    pools = [(lang, list(load_jsonl(path, default_lang=lang))) for lang, path in args.pool]
    manifest = build_even_multilingual_mixture(
        pools, tokenizer, args.seed, tokenizer_sha256=_tokenizer_sha(args.tokenizer)
    )
    _atomic_write_text(args.out, json.dumps(manifest.to_dict(), indent=1) + "\n")
    return _manifest_summary(manifest, args.out)


def _cmd_pack(args):
    manifest = MixtureManifest.load(args.manifest)
    tokenizer = load_tokenizer(args.tokenizer)
    docs_by_id = {doc.id: doc for doc in _iter_corpus(args)}
    ds = pack_sequences(manifest, docs_by_id, tokenizer, seq_len=args.seq_len, seed=args.seed)
    _atomic_writer(args.out, lambda tmp: save_packed(ds, tmp, manifest_path=args.manifest))
    total = sum(e.token_count or 0 for e in manifest.entries)
    packed = ds.seq_len * len(ds.sequences)
    return {
        "out": args.out,
        "seq_len": ds.seq_len,
        "n_seqs": len(ds.sequences),
        "packed_tokens": packed,
        "dropped_tail": total - packed,
    }


def _cmd_mix_sft(args):
    manifest = build_sft_mixture(
        load_pairs_jsonl(args.english), load_pairs_jsonl(args.translated), args.seed
    )
    _atomic_write_text(args.out, json.dumps(manifest.to_dict(), indent=1) + "\n")
    return _manifest_summary(manifest, args.out)


def _cmd_mix_dpo(args):
    manifest = build_dpo_mixture(
        load_pairs_jsonl(args.english), load_pairs_jsonl(args.target), args.ratio, args.seed
    )
    _atomic_write_text(args.out, json.dumps(manifest.to_dict(), indent=1) + "\n")
    return _manifest_summary(manifest, args.out)


def _cmd_validate(args):
    manifest = MixtureManifest.load(args.manifest)
    docs_by_id = None
    if args.corpus or args.text_dir:
        docs_by_id = {doc.id: doc for doc in _iter_corpus(args)}
    pairs_by_id = None
    if args.pairs:
        pairs_by_id = {
            p.id: p for path in args.pairs for p in load_pairs_jsonl(path)
        }
    return validate_manifest(
        manifest, docs_by_id=docs_by_id, pairs_by_id=pairs_by_id, epoch_cap=args.epoch_cap
    )


def _cmd_inspect(args):
    model = load_tokenizer(args.tokenizer)
    result = {
        "vocab_size": model.vocab_size,
        "merges": len(model.all_merges if isinstance(model, ExtendedTokenizer) else model.merges),
        "added_tokens": len(model.added) if isinstance(model, ExtendedTokenizer) else 0,
    }
    if args.encode is not None:
        result["ids"] = model.encode(args.encode)
    if args.decode is not None:
        ids = [int(x) for x in args.decode.split(",") if x.strip()]
        result["text"] = model.decode(ids)
    if args.stats_corpus:
        stats = corpus_stats(load_jsonl(args.stats_corpus, default_lang=args.default_lang))
        result["corpus_stats"] = stats.to_dict()
    return result


_COMMANDS = {
    "train-bpe": _cmd_train_bpe,
    "extend-vocab": _cmd_extend_vocab,
    "fertility": _cmd_fertility,
    "init-embeddings": _cmd_init_embeddings,
    "mix-pretrain": _cmd_mix_pretrain,
    "mix-even": _cmd_mix_even,
    "pack": _cmd_pack,
    "mix-sft": _cmd_mix_sft,
    "mix-dpo": _cmd_mix_dpo,
    "validate": _cmd_validate,
    "inspect": _cmd_inspect,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        result = _COMMANDS[args.command](args)
    except LingoError as e:
        _emit({"error": str(e)})
        return 2
    except (ValueError, OSError) as e:
        _emit({"error": str(e)})
        return 2
    _emit(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
