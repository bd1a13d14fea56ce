import { describe, expect, it } from "vitest";

import {
  ArtifactError,
  manifestParameter,
  parseArtifact,
  parseManifest,
} from "../src/csv.js";

const FLUX_CSV = `# robindce 0.1.0
# regime.lambda = 0.44
kbar,n_robin,n_mirror,ratio,inner_error
0.25,0.001,0.0011,0.909,1e-9
0.5,0.004,0.0042,0.952,1e-9
`;

describe("parseArtifact", () => {
  it("reads comments, header and numeric rows", () => {
    const t = parseArtifact(FLUX_CSV, ["kbar", "n_robin", "n_mirror"]);
    expect(t.columns).toEqual([
      "kbar",
      "n_robin",
      "n_mirror",
      "ratio",
      "inner_error",
    ]);
    expect(t.rows).toHaveLength(2);
    expect(t.rows[1].n_mirror).toBeCloseTo(0.0042);
  });

  it("names every missing column", () => {
    expect(() => parseArtifact(FLUX_CSV, ["kbar", "negativity_robin", "negativity_mirror"]))
      .toThrowError(/negativity_robin, negativity_mirror/);
  });

  it("rejects an empty artifact", () => {
    expect(() => parseArtifact("", ["kbar"])).toThrowError(ArtifactError);
  });

  it("rejects a header-only artifact", () => {
    expect(() =>
      parseArtifact("kbar,n_robin,n_mirror\n", ["kbar"]),
    ).toThrowError(/no data rows/);
  });

  it("rejects non-numeric values in required columns", () => {
    const bad = "kbar,n_robin\n0.5,oops\n";
    expect(() => parseArtifact(bad, ["kbar", "n_robin"])).toThrowError(
      /column 'n_robin' is not numeric/,
    );
  });
});

describe("manifest", () => {
  it("parses and exposes echoed parameters", () => {
    const m = parseManifest(
      JSON.stringify({
        command: "flux",
        parameters: ["regime.lambda = 0.44", "drive.epsilon = 0.25"],
      }),
    );
    expect(manifestParameter(m, "regime.lambda")).toBeCloseTo(0.44);
    expect(manifestParameter(m, "drive.epsilon")).toBeCloseTo(0.25);
    expect(manifestParameter(m, "absent.key")).toBeUndefined();
  });

  it("rejects non-object JSON", () => {
    expect(() => parseManifest("[1, 2]")).toThrowError(ArtifactError);
    expect(() => parseManifest("not json")).toThrowError(ArtifactError);
  });
});
