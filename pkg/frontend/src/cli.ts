#!/usr/bin/env node
/**
 * embed-export: batch-compute 512-d sentence embeddings for a tweet TSV.
 *
 *   embed-export --input tokens.tsv --output sent.tsv [--encoder use|hash-v1]
 *                [--batch-size 32]
 *
 * The input is the `id\ttext` TSV the classifier's `featurize --emit tokens`
 * command produces (preprocessed text). The output is the sentence-embedding
 * TSV the classifier ingests: `dim\t512` then one `id\tf1 ... f512` row per
 * tweet, floats at 8 significant digits, input order preserved.
 */

import { resolve } from "node:path";
import { pathToFileURL } from "node:url";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { runExportJob } from "./exportJob.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("embed-export")
    .option("input", { type: "string", demandOption: true, describe: "tweet TSV (id\\ttext)" })
    .option("output", { type: "string", demandOption: true, describe: "embedding TSV to write" })
    .option("encoder", {
      type: "string",
      default: "use",
      choices: ["use", "hash-v1"] as const,
      describe: "sentence encoder: the pretrained model, or the offline deterministic fallback",
    })
    .option("batch-size", { type: "number", default: 32 })
    .strict()
    .help()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parse();

  const summary = await runExportJob({
    inputPath: args.input,
    outputPath: args.output,
    batchSize: args["batch-size"],
    encoderId: args.encoder,
  });
  console.log(
    `exported ${summary.count} embeddings (dim ${summary.dim}, encoder ${summary.encoderId}) to ${args.output}`,
  );
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(resolve(process.argv[1])).href;

if (invokedDirectly) {
  main(hideBin(process.argv))
    .then((code) => {
      process.exitCode = code;
    })
    .catch((err) => {
      console.error(`embed-export: error: ${(err as Error).message}`);
      process.exitCode = 1;
    });
}
