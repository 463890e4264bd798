// Readers for the on-disk artifact formats: tokenizer JSON, LEMB embedding
// matrices and LPAK packed datasets. All binary fields are little-endian.

import { readFileSync } from "node:fs";

export interface AddedTokenJson {
  token: string;
  id: number;
  subword_ids: number[];
}

export interface TokenizerFile {
  version: number;
  model_type: string;
  vocab: Record<string, number>;
  merges: string[];
  added_tokens: AddedTokenJson[];
}

/**
 * Decode an escaped token string back to raw bytes. Printable ASCII except
 * `<` is literal; everything else appears as `<0xHH>`.
 */
export function unescapeToken(token: string): Uint8Array {
  const out: number[] = [];
  let i = 0;
  while (i < token.length) {
    if (token.startsWith("<0x", i) && token[i + 5] === ">") {
      out.push(parseInt(token.slice(i + 3, i + 5), 16));
      i += 6;
    } else {
      const code = token.charCodeAt(i);
      if (code > 0x7e) {
        throw new Error(`unescaped non-ASCII character in token: ${token}`);
      }
      out.push(code);
      i += 1;
    }
  }
  return Uint8Array.from(out);
}

export function readTokenizerFile(path: string): TokenizerFile {
  const data = JSON.parse(readFileSync(path, "utf8")) as TokenizerFile;
  if (data.model_type !== "bpe-bytefallback") {
    throw new Error(`unsupported model_type ${data.model_type}`);
  }
  return data;
}

export interface EmbeddingFile {
  rows: number;
  dim: number;
  /** Row-major float32 payload, rows * dim entries. */
  data: Float32Array;
}

export function readEmbeddings(path: string): EmbeddingFile {
  const buf = readFileSync(path);
  if (buf.toString("latin1", 0, 4) !== "LEMB") {
    throw new Error(`bad magic in ${path}`);
  }
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const version = view.getUint32(4, true);
  if (version !== 1) throw new Error(`unsupported LEMB version ${version}`);
  const rows = Number(view.getBigUint64(8, true));
  const dim = Number(view.getBigUint64(16, true));
  const expected = 24 + rows * dim * 4;
  if (buf.byteLength !== expected) {
    throw new Error(`LEMB payload holds ${buf.byteLength - 24} bytes, header implies ${expected - 24}`);
  }
  const data = new Float32Array(rows * dim);
  for (let i = 0; i < data.length; i++) {
    data[i] = view.getFloat32(24 + i * 4, true);
  }
  return { rows, dim, data };
}

export interface PackedSequenceData {
  carryIn: boolean;
  /** In-block offsets where a new document starts. */
  boundaries: number[];
  ids: Uint32Array;
}

export interface PackedFile {
  seqLen: number;
  sequences: PackedSequenceData[];
}

export function readPacked(path: string): PackedFile {
  const buf = readFileSync(path);
  if (buf.toString("latin1", 0, 4) !== "LPAK") {
    throw new Error(`bad magic in ${path}`);
  }
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const version = view.getUint32(4, true);
  if (version !== 1) throw new Error(`unsupported LPAK version ${version}`);
  const seqLen = view.getUint32(8, true);
  const nSeqs = Number(view.getBigUint64(12, true));
  let off = 20;
  const sequences: PackedSequenceData[] = [];
  for (let s = 0; s < nSeqs; s++) {
    const carryIn = view.getUint8(off) === 1;
    const nBounds = view.getUint16(off + 1, true);
    off += 3;
    const boundaries: number[] = [];
    for (let b = 0; b < nBounds; b++) {
      boundaries.push(view.getUint32(off, true));
      off += 4;
    }
    const ids = new Uint32Array(seqLen);
    for (let t = 0; t < seqLen; t++) {
      ids[t] = view.getUint32(off, true);
      off += 4;
    }
    sequences.push({ carryIn, boundaries, ids });
  }
  if (off !== buf.byteLength) {
    throw new Error(`trailing bytes in ${path}`);
  }
  return { seqLen, sequences };
}

export interface ManifestEntryJson {
  pool: string;
  documents: string[];
  epochs: number;
  token_count?: number;
  pair_count?: number;
}

export interface ManifestFile {
  seed: number;
  kind: string;
  ratio: [number, number] | null;
  tolerance: number;
  tokenizer_sha256: string;
  created_utc: string;
  tool_version: string;
  entries: ManifestEntryJson[];
}

export function readManifest(path: string): ManifestFile {
  return JSON.parse(readFileSync(path, "utf8")) as ManifestFile;
}
