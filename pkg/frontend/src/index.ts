export { runLingo, LingoUsageError, LingoDataError } from "./cli.js";
export type { RunOptions } from "./cli.js";
export { LingoClient } from "./client.js";
export type {
  TrainResult,
  ExtendResult,
  FertilityResult,
  InitEmbeddingsResult,
  MixtureResult,
  MixtureEntrySummary,
  PackResult,
  ValidateResult,
  InspectResult,
  InitStrategyName,
} from "./client.js";
export {
  readTokenizerFile,
  readEmbeddings,
  readPacked,
  readManifest,
  unescapeToken,
} from "./formats.js";
export type {
  TokenizerFile,
  AddedTokenJson,
  EmbeddingFile,
  PackedFile,
  PackedSequenceData,
  ManifestFile,
  ManifestEntryJson,
} from "./formats.js";
