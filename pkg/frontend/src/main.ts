#!/usr/bin/env node
/** Command line entry: render <kind> <csv> <manifest> <out.svg>. */

import { readFileSync, writeFileSync } from "node:fs";

import { ArtifactError, parseArtifact, parseManifest } from "./csv.js";
import { render, requiredColumns } from "./render.js";

const USAGE =
  "usage: robindce-figures render <flux|negativity> <csv> <manifest.json> <out.svg>";

export function main(argv: string[]): number {
  if (argv.length !== 5 || argv[0] !== "render") {
    process.stderr.write(USAGE + "\n");
    return 2;
  }
  const [, kind, csvPath, manifestPath, outPath] = argv;
  try {
    const required = requiredColumns(kind);
    const table = parseArtifact(readFileSync(csvPath, "utf8"), required);
    const manifest = parseManifest(readFileSync(manifestPath, "utf8"));
    const svg = render(kind, table, manifest);
    writeFileSync(outPath, svg + "\n");
  } catch (err) {
    if (err instanceof ArtifactError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
