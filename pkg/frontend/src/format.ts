/**
 * TSV formats shared with the Python side.
 *
 * Input:  header `id\ttext`, one tweet per row (text may be empty).
 * Output: header `dim\t<dim>`, then `id\tf1 f2 ... f<dim>` per row with
 * floats at 8 significant digits. UTF-8, LF endings, trailing newline.
 */

export interface TweetRow {
  id: string;
  text: string;
}

export const INPUT_HEADER = "id\ttext";

export function parseTweetFile(content: string, path = "<input>"): TweetRow[] {
  const lines = content.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error(`${path}: empty input file`);
  }
  const header = lines[0].replace(/\r$/, "");
  if (header !== INPUT_HEADER) {
    throw new Error(
      `${path}: expected header ${JSON.stringify(INPUT_HEADER)}, got ${JSON.stringify(header)}`,
    );
  }
  const rows: TweetRow[] = [];
  const seen = new Set<string>();
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].replace(/\r$/, "");
    if (line === "") {
      continue;
    }
    const fields = line.split("\t");
    if (fields.length !== 2) {
      throw new Error(`${path}: line ${i + 1}: expected 2 fields, got ${fields.length}`);
    }
    const [id, text] = fields;
    if (seen.has(id)) {
      throw new Error(`${path}: line ${i + 1}: duplicate id ${JSON.stringify(id)}`);
    }
    seen.add(id);
    rows.push({ id, text });
  }
  if (rows.length === 0) {
    throw new Error(`${path}: no tweet rows`);
  }
  return rows;
}

export function formatVector(values: number[] | Float64Array): string {
  const parts = new Array<string>(values.length);
  for (let i = 0; i < values.length; i++) {
    parts[i] = values[i].toPrecision(8);
  }
  return parts.join(" ");
}

export function formatOutput(
  dim: number,
  rows: Iterable<{ id: string; vector: number[] | Float64Array }>,
): string {
  const out: string[] = [`dim\t${dim}`];
  for (const { id, vector } of rows) {
    if (vector.length !== dim) {
      throw new Error(`vector for id ${JSON.stringify(id)} has length ${vector.length}, expected ${dim}`);
    }
    out.push(`${id}\t${formatVector(vector)}`);
  }
  return out.join("\n") + "\n";
}

/** Parse an output file back (used by tests to ensure round-trips). */
export function parseOutput(content: string): { dim: number; rows: Map<string, number[]> } {
  const lines = content.split("\n").filter((l) => l !== "");
  const header = lines[0]?.split("\t");
  if (!header || header.length !== 2 || header[0] !== "dim") {
    throw new Error(`bad output header: ${JSON.stringify(lines[0])}`);
  }
  const dim = Number(header[1]);
  const rows = new Map<string, number[]>();
  for (const line of lines.slice(1)) {
    const [id, raw] = line.split("\t");
    const values = raw.split(" ").map(Number);
    if (values.length !== dim || values.some((v) => Number.isNaN(v))) {
      throw new Error(`bad vector line for id ${JSON.stringify(id)}`);
    }
    if (rows.has(id)) {
      throw new Error(`duplicate id ${JSON.stringify(id)} in output`);
    }
    rows.set(id, values);
  }
  return { dim, rows };
}
