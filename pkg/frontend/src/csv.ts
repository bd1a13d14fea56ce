/** CSV artifact loading with strict column checking. */

import Papa from "papaparse";

export class ArtifactError extends Error {}

export interface Table {
  columns: string[];
  rows: Record<string, number>[];
}

/**
 * Parse a robindce CSV artifact: '#' comment lines, a header row, then
 * numeric data rows. Missing required columns are reported by name; an
 * artifact with no data rows is an error.
 */
export function parseArtifact(text: string, required: string[]): Table {
  const result = Papa.parse<string[]>(text.trim(), {
    comments: "#",
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new ArtifactError(`CSV parse error: ${result.errors[0].message}`);
  }
  const data = result.data;
  if (data.length === 0) {
    throw new ArtifactError("CSV has no header row");
  }
  const columns = data[0].map((c) => c.trim());
  const missing = required.filter((name) => !columns.includes(name));
  if (missing.length > 0) {
    throw new ArtifactError(`missing required columns: ${missing.join(", ")}`);
  }
  if (data.length === 1) {
    throw new ArtifactError("CSV has no data rows");
  }
  const rows = data.slice(1).map((cells, i) => {
    const row: Record<string, number> = {};
    columns.forEach((name, j) => {
      row[name] = Number(cells[j]);
    });
    for (const name of required) {
      if (Number.isNaN(row[name])) {
        throw new ArtifactError(
          `row ${i + 1}: column '${name}' is not numeric`,
        );
      }
    }
    return row;
  });
  return { columns, rows };
}

export interface Manifest {
  command?: string;
  version?: string;
  parameters?: string[];
  [key: string]: unknown;
}

export function parseManifest(text: string): Manifest {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch (err) {
    throw new ArtifactError(`manifest is not valid JSON: ${String(err)}`);
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ArtifactError("manifest must be a JSON object");
  }
  return value as Manifest;
}

/** Pull a named scalar out of the manifest's parameter echo lines. */
export function manifestParameter(
  manifest: Manifest,
  name: string,
): number | undefined {
  for (const line of manifest.parameters ?? []) {
    const [key, raw] = line.split("=", 2).map((s) => s.trim());
    if (key === name) {
      const v = Number(raw);
      return Number.isNaN(v) ? undefined : v;
    }
  }
  return undefined;
}
