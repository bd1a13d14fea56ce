import { describe, expect, it } from "vitest";

import { parseArtifact, parseManifest } from "../src/csv.js";
import {
  FLUX_COLUMNS,
  NEGATIVITY_COLUMNS,
  render,
  renderFlux,
  renderNegativity,
  requiredColumns,
} from "../src/render.js";

const MANIFEST = parseManifest(
  JSON.stringify({
    command: "flux",
    parameters: [
      "regime.lambda = 0.44",
      "drive.epsilon = 0.25",
      "drive.omega_d = 0.155",
    ],
  }),
);

function fluxTable(n = 20) {
  const lines = ["kbar,n_robin,n_mirror,ratio,inner_error"];
  for (let i = 1; i <= n; i++) {
    const k = i / (n / 2);
    const y = Math.exp(-((k - 0.5) ** 2) / 0.05) * 1e-3;
    lines.push(`${k},${y},${y * 1.1},0.9,1e-9`);
  }
  return parseArtifact(lines.join("\n"), FLUX_COLUMNS);
}

function negativityTable(n = 15) {
  const lines = [
    "delta_omega_over_omega_d,Bhat_robin,Bhat_mirror,negativity_robin,negativity_mirror",
  ];
  for (let i = 1; i <= n; i++) {
    const x = (0.4 * i) / n;
    lines.push(`${x},${1e-3 / (1 + x)},${1.2e-3 / (1 + x)},${8e-7},${9e-7}`);
  }
  return parseArtifact(lines.join("\n"), NEGATIVITY_COLUMNS);
}

describe("renderFlux", () => {
  it("produces an SVG with solid and dashed curves and axis labels", () => {
    const svg = renderFlux(fluxTable(), MANIFEST);
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    const polylines = svg.match(/<polyline/g) ?? [];
    expect(polylines.length).toBe(2); // one solid, one dashed curve
    expect(svg).toContain('stroke-dasharray="7 5"');
    expect(svg).toContain("reduced frequency");
    expect(svg).toContain("lambda = 0.44 mm");
    expect(svg).toContain(">Robin<");
    expect(svg).toContain(">mirror<");
  });

  it("handles a manifest without parameters", () => {
    const svg = renderFlux(fluxTable(), parseManifest("{}"));
    expect(svg).toContain("Photon flux density");
    expect(svg).not.toContain("lambda =");
  });
});

describe("renderNegativity", () => {
  it("plots the negativity columns with a dashed mirror curve", () => {
    const svg = renderNegativity(negativityTable(), MANIFEST);
    expect(svg).toContain("Entanglement negativity");
    expect(svg).toContain("detuning");
    expect(svg).toContain('stroke-dasharray="7 5"');
  });
});

describe("render dispatch", () => {
  it("routes by kind and rejects unknown kinds", () => {
    expect(render("flux", fluxTable(), MANIFEST)).toContain("flux density");
    expect(requiredColumns("negativity")).toEqual(NEGATIVITY_COLUMNS);
    expect(() => render("spectrogram", fluxTable(), MANIFEST)).toThrowError(
      /unknown figure kind/,
    );
    expect(() => requiredColumns("spectrogram")).toThrowError(
      /unknown figure kind/,
    );
  });
});
