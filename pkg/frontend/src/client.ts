// High-level client: one method per lingo subcommand, typed results.

import { runLingo, RunOptions } from "./cli.js";

export interface TrainResult {
  out: string;
  vocab_size: number;
  merges: number;
}

export interface ExtendResult {
  out: string;
  base_vocab_size: number;
  added: number;
  appended_merges: number;
  vocab_size: number;
}

export interface FertilityResult {
  tokens_per_word: number;
  token_count: number;
  word_count: number;
  mode: "unicode" | "whitespace";
}

export interface InitEmbeddingsResult {
  out: string;
  rows: number;
  dim: number;
  added_rows: number;
  strategy: string;
}

export interface MixtureEntrySummary {
  pool: string;
  documents: number;
  epochs: number;
  token_count?: number;
  pair_count?: number;
}

export interface MixtureResult {
  out: string;
  kind: "pretrain" | "even" | "sft" | "dpo";
  ratio: [number, number] | null;
  entries: MixtureEntrySummary[];
}

export interface PackResult {
  out: string;
  seq_len: number;
  n_seqs: number;
  packed_tokens: number;
  dropped_tail: number;
}

export interface ValidateResult {
  ok: boolean;
  failures: string[];
  kind: string;
  epochs: Record<string, number>;
  realized_ratio: number | null;
}

export interface InspectResult {
  vocab_size: number;
  merges: number;
  added_tokens: number;
  ids?: number[];
  text?: string;
}

export type InitStrategyName = "gaussian" | "xavier_uniform" | "avg_all" | "avg_subwords";

export class LingoClient {
  constructor(private readonly opts: RunOptions = {}) {}

  private run<T>(args: string[]): Promise<T> {
    return runLingo<T>(args, this.opts);
  }

  trainBpe(params: { corpus: string[]; vocabSize: number; out: string }): Promise<TrainResult> {
    const args = ["train-bpe", "--vocab-size", String(params.vocabSize), "--out", params.out];
    for (const c of params.corpus) args.push("--corpus", c);
    return this.run(args);
  }

  extendVocab(params: {
    base: string;
    corpus: string[];
    nNew: number;
    out: string;
    budget?: number;
  }): Promise<ExtendResult> {
    const args = ["extend-vocab", "--base", params.base, "--n-new", String(params.nNew), "--out", params.out];
    for (const c of params.corpus) args.push("--corpus", c);
    if (params.budget !== undefined) args.push("--budget", String(params.budget));
    return this.run(args);
  }

  fertility(params: {
    tokenizer: string;
    corpus: string[];
    mode?: "unicode" | "whitespace";
  }): Promise<FertilityResult> {
    const args = ["fertility", "--tokenizer", params.tokenizer];
    for (const c of params.corpus) args.push("--corpus", c);
    if (params.mode) args.push("--mode", params.mode);
    return this.run(args);
  }

  initEmbeddings(params: {
    tokenizer: string;
    out: string;
    strategy?: InitStrategyName;
    baseEmbeddings?: string;
    dim?: number;
    seed?: number;
  }): Promise<InitEmbeddingsResult> {
    const args = ["init-embeddings", "--tokenizer", params.tokenizer, "--out", params.out];
    if (params.strategy) args.push("--strategy", params.strategy);
    if (params.baseEmbeddings) args.push("--base-embeddings", params.baseEmbeddings);
    if (params.dim !== undefined) args.push("--dim", String(params.dim));
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    return this.run(args);
  }

  mixPretrain(params: {
    english: string;
    target: string;
    tokenizer: string;
    out: string;
    ratio?: [number, number];
    seed?: number;
    allowCapClamp?: boolean;
  }): Promise<MixtureResult> {
    const args = [
      "mix-pretrain",
      "--english", params.english,
      "--target", params.target,
      "--tokenizer", params.tokenizer,
      "--out", params.out,
    ];
    if (params.ratio) args.push("--ratio", params.ratio.join(":"));
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    if (params.allowCapClamp) args.push("--allow-cap-clamp");
    return this.run(args);
  }

  mixEven(params: {
    pools: Record<string, string>;
    tokenizer: string;
    out: string;
    seed?: number;
  }): Promise<MixtureResult> {
    const args = ["mix-even", "--tokenizer", params.tokenizer, "--out", params.out];
    for (const [lang, path] of Object.entries(params.pools)) args.push("--pool", `${lang}=${path}`);
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    return this.run(args);
  }

  mixDpo(params: {
    english: string;
    target: string;
    out: string;
    ratio?: [number, number];
    seed?: number;
  }): Promise<MixtureResult> {
    const args = ["mix-dpo", "--english", params.english, "--target", params.target, "--out", params.out];
    if (params.ratio) args.push("--ratio", params.ratio.join(":"));
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    return this.run(args);
  }

  mixSft(params: {
    english: string;
    translated: string;
    out: string;
    seed?: number;
  }): Promise<MixtureResult> {
    const args = ["mix-sft", "--english", params.english, "--translated", params.translated, "--out", params.out];
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    return this.run(args);
  }

  pack(params: {
    manifest: string;
    corpus: string[];
    tokenizer: string;
    out: string;
    seqLen?: number;
    seed?: number;
  }): Promise<PackResult> {
    const args = ["pack", "--manifest", params.manifest, "--tokenizer", params.tokenizer, "--out", params.out];
    for (const c of params.corpus) args.push("--corpus", c);
    if (params.seqLen !== undefined) args.push("--seq-len", String(params.seqLen));
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    return this.run(args);
  }

  validate(params: { manifest: string; corpus?: string[]; pairs?: string[] }): Promise<ValidateResult> {
    const args = ["validate", "--manifest", params.manifest];
    for (const c of params.corpus ?? []) args.push("--corpus", c);
    for (const p of params.pairs ?? []) args.push("--pairs", p);
    return this.run(args);
  }

  inspect(params: { tokenizer: string; encode?: string; decode?: number[] }): Promise<InspectResult> {
    const args = ["inspect", "--tokenizer", params.tokenizer];
    if (params.encode !== undefined) args.push("--encode", params.encode);
    if (params.decode !== undefined) args.push("--decode", params.decode.join(","));
    return this.run(args);
  }

  /** Convert text to token ids through the named tokenizer file. */
  async encode(tokenizer: string, text: string): Promise<number[]> {
    const res = await this.inspect({ tokenizer, encode: text });
    return res.ids ?? [];
  }

  /** Convert token ids back to text through the named tokenizer file. */
  async decode(tokenizer: string, ids: number[]): Promise<string> {
    const res = await this.inspect({ tokenizer, decode: ids });
    return res.text ?? "";
  }
}
