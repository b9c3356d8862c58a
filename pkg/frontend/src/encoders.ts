/**
 * Sentence encoders. Two implementations:
 *
 * - "use": the pretrained universal sentence encoder via TensorFlow.js.
 *   Loading downloads model weights on first use, so it needs network
 *   access; failures abort with a clear message.
 * - "hash-v1": a fully offline, deterministic fallback that maps each
 *   whitespace token to a counter-based pseudo-random 512-d direction and
 *   L2-normalizes the token average. No semantics, but byte-stable across
 *   runs and machines, which is what tests and fixtures need.
 */

export const EMBEDDING_DIM = 512;

export interface SentenceEncoder {
  readonly id: string;
  readonly dim: number;
  embedBatch(texts: string[]): Promise<number[][]>;
}

const M64 = (1n << 64n) - 1n;
const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const COUNTER_SALT = 0xd6e8feb86659fd93n;

function fnv1a64(text: string): bigint {
  let hash = FNV_OFFSET;
  const bytes = Buffer.from(text, "utf-8");
  for (const b of bytes) {
    hash ^= BigInt(b);
    hash = (hash * FNV_PRIME) & M64;
  }
  return hash;
}

function splitmix64(state: bigint): bigint {
  let z = (state + 0x9e3779b97f4a7c15n) & M64;
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & M64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & M64;
  return (z ^ (z >> 31n)) & M64;
}

/** Uniform value in (-1, 1) for (seed, dimension), order-independent. */
function hashUnit(seed: bigint, dim: number): number {
  const mixed = splitmix64(seed ^ ((BigInt(dim) * COUNTER_SALT) & M64));
  const unit = Number(mixed >> 11n) / 2 ** 53; // 53-bit mantissa in [0, 1)
  return 2 * unit - 1;
}

export class HashEncoder implements SentenceEncoder {
  readonly id = "hash-v1";
  readonly dim = EMBEDDING_DIM;

  embedOne(text: string): number[] {
    const tokens = text.split(/\s+/).filter((t) => t.length > 0);
    if (tokens.length === 0) {
      tokens.push(""); // empty tweets still get a (fixed) vector
    }
    const acc = new Float64Array(this.dim);
    for (const token of tokens) {
      const seed = fnv1a64(token);
      for (let j = 0; j < this.dim; j++) {
        acc[j] += hashUnit(seed, j);
      }
    }
    let norm = 0;
    for (let j = 0; j < this.dim; j++) {
      acc[j] /= tokens.length;
      norm += acc[j] * acc[j];
    }
    norm = Math.sqrt(norm);
    const out = new Array<number>(this.dim);
    for (let j = 0; j < this.dim; j++) {
      out[j] = norm > 0 ? acc[j] / norm : 0;
    }
    return out;
  }

  async embedBatch(texts: string[]): Promise<number[][]> {
    return texts.map((t) => this.embedOne(t));
  }
}

class UseEncoder implements SentenceEncoder {
  readonly id = "use";
  readonly dim = EMBEDDING_DIM;

  // model type comes from a dynamic import, so stay loose here
  constructor(private readonly model: { embed(texts: string[]): Promise<unknown> }) {}

  async embedBatch(texts: string[]): Promise<number[][]> {
    const tensor = (await this.model.embed(texts)) as {
      arraySync(): number[][];
      dispose(): void;
    };
    const vectors = tensor.arraySync();
    tensor.dispose();
    for (const v of vectors) {
      if (v.length !== this.dim) {
        throw new Error(
          `encoder 'use' returned dimension ${v.length}, expected ${this.dim}; aborting`,
        );
      }
    }
    return vectors;
  }
}

async function loadUseEncoder(): Promise<SentenceEncoder> {
  let use;
  try {
    await import("@tensorflow/tfjs");
    use = await import("@tensorflow-models/universal-sentence-encoder");
  } catch (err) {
    throw new Error(
      "encoder 'use' is unavailable: @tensorflow/tfjs and " +
        "@tensorflow-models/universal-sentence-encoder must be installed " +
        `(${(err as Error).message})`,
    );
  }
  try {
    const model = await use.load();
    return new UseEncoder(model);
  } catch (err) {
    throw new Error(
      `failed to load the universal sentence encoder (network access to the ` +
        `model host is required on first use): ${(err as Error).message}`,
    );
  }
}

export async function loadEncoder(id: string): Promise<SentenceEncoder> {
  switch (id) {
    case "hash-v1":
      return new HashEncoder();
    case "use":
      return loadUseEncoder();
    default:
      throw new Error(`unknown encoder ${JSON.stringify(id)}; known: use, hash-v1`);
  }
}
