import { readFile, writeFile } from "node:fs/promises";

import { loadEncoder, type SentenceEncoder } from "./encoders.js";
import { formatVector, parseTweetFile } from "./format.js";

export interface ExportJob {
  inputPath: string;
  outputPath: string;
  batchSize: number;
  encoderId: string;
}

export interface ExportSummary {
  count: number;
  dim: number;
  encoderId: string;
}

export function validateJob(job: ExportJob): void {
  if (!Number.isInteger(job.batchSize) || job.batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${job.batchSize}`);
  }
}

/**
 * Read the tweet file, embed every row in input order (batched), and write
 * the embedding TSV. Every input id appears exactly once in the output.
 */
export async function runExportJob(
  job: ExportJob,
  encoder?: SentenceEncoder,
): Promise<ExportSummary> {
  validateJob(job);
  const enc = encoder ?? (await loadEncoder(job.encoderId));
  const rows = parseTweetFile(await readFile(job.inputPath, "utf-8"), job.inputPath);

  const lines: string[] = [`dim\t${enc.dim}`];
  for (let start = 0; start < rows.length; start += job.batchSize) {
    const batch = rows.slice(start, start + job.batchSize);
    const vectors = await enc.embedBatch(batch.map((r) => r.text));
    if (vectors.length !== batch.length) {
      throw new Error(
        `encoder returned ${vectors.length} vectors for a batch of ${batch.length}`,
      );
    }
    for (let i = 0; i < batch.length; i++) {
      if (vectors[i].length !== enc.dim) {
        throw new Error(
          `encoder '${enc.id}' returned dimension ${vectors[i].length}, expected ${enc.dim}; aborting`,
        );
      }
      lines.push(`${batch[i].id}\t${formatVector(vectors[i])}`);
    }
  }
  await writeFile(job.outputPath, lines.join("\n") + "\n", "utf-8");
  return { count: rows.length, dim: enc.dim, encoderId: enc.id };
}
