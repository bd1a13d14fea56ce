/** SVG renderers for the flux and negativity artifacts. */

import { ArtifactError, Manifest, Table, manifestParameter } from "./csv.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };

interface Scale {
  (x: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const span = hi - lo || 1;
  const f = (x: number) => rLo + ((x - lo) / span) * (rHi - rLo);
  const step = niceStep(span / 6);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return Object.assign(f, { ticks });
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / mag;
  const nice = frac < 1.5 ? 1 : frac < 3.5 ? 2 : frac < 7.5 ? 5 : 10;
  return nice * mag;
}

function fmt(x: number): string {
  if (x === 0) return "0";
  const a = Math.abs(x);
  if (a >= 1e4 || a < 1e-3) return x.toExponential(1);
  return String(Number(x.toPrecision(4)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function polyline(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale,
): string {
  return xs
    .map((x, i) => `${sx(x).toFixed(2)},${sy(ys[i]).toFixed(2)}`)
    .join(" ");
}

interface Curve {
  label: string;
  ys: number[];
  dashed: boolean;
}

function chart(
  title: string,
  xLabel: string,
  yLabel: string,
  xs: number[],
  curves: Curve[],
): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const allY = curves.flatMap((c) => c.ys);
  const sx = linearScale(Math.min(...xs), Math.max(...xs), x0, x1);
  const sy = linearScale(0, Math.max(...allY, 1e-300) * 1.05, y0, y1);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="13">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`,
  );
  for (const t of sx.ticks) {
    const px = sx(t).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#eee"/>`,
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const py = sy(t).toFixed(2);
    parts.push(
      `<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#eee"/>`,
      `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
      `<text x="${x0 - 9}" y="${py}" dy="4" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(xLabel)}</text>`,
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(yLabel)}</text>`,
  );
  curves.forEach((c, i) => {
    const dash = c.dashed ? ` stroke-dasharray="7 5"` : "";
    parts.push(
      `<polyline points="${polyline(xs, c.ys, sx, sy)}" fill="none" stroke="black" stroke-width="1.6"${dash}/>`,
    );
    const ly = y1 + 10 + 20 * i;
    parts.push(
      `<line x1="${x1 - 150}" y1="${ly}" x2="${x1 - 110}" y2="${ly}" stroke="black" stroke-width="1.6"${dash}/>`,
      `<text x="${x1 - 102}" y="${ly}" dy="4">${esc(c.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}

function subtitle(manifest: Manifest): string {
  const lam = manifestParameter(manifest, "regime.lambda");
  const eps = manifestParameter(manifest, "drive.epsilon");
  const wd = manifestParameter(manifest, "drive.omega_d");
  const bits: string[] = [];
  if (lam !== undefined) bits.push(`lambda = ${lam} mm`);
  if (eps !== undefined) bits.push(`epsilon = ${eps}`);
  if (wd !== undefined) bits.push(`omega_d = ${wd} mm^-1`);
  return bits.join(", ");
}

export const FLUX_COLUMNS = ["kbar", "n_robin", "n_mirror"];
export const NEGATIVITY_COLUMNS = [
  "delta_omega_over_omega_d",
  "negativity_robin",
  "negativity_mirror",
];

export function renderFlux(table: Table, manifest: Manifest): string {
  const xs = table.rows.map((r) => r.kbar);
  const sub = subtitle(manifest);
  return chart(
    sub ? `Photon flux density (${sub})` : "Photon flux density",
    "reduced frequency k / omega_d",
    "n(k / omega_d)",
    xs,
    [
      { label: "Robin", ys: table.rows.map((r) => r.n_robin), dashed: false },
      { label: "mirror", ys: table.rows.map((r) => r.n_mirror), dashed: true },
    ],
  );
}

export function renderNegativity(table: Table, manifest: Manifest): string {
  const xs = table.rows.map((r) => r.delta_omega_over_omega_d);
  const sub = subtitle(manifest);
  return chart(
    sub ? `Entanglement negativity (${sub})` : "Entanglement negativity",
    "detuning delta_omega / omega_d",
    "negativity",
    xs,
    [
      {
        label: "Robin",
        ys: table.rows.map((r) => r.negativity_robin),
        dashed: false,
      },
      {
        label: "mirror",
        ys: table.rows.map((r) => r.negativity_mirror),
        dashed: true,
      },
    ],
  );
}

export function render(
  kind: string,
  table: Table,
  manifest: Manifest,
): string {
  if (kind === "flux") return renderFlux(table, manifest);
  if (kind === "negativity") return renderNegativity(table, manifest);
  throw new ArtifactError(
    `unknown figure kind '${kind}' (expected flux or negativity)`,
  );
}

export function requiredColumns(kind: string): string[] {
  if (kind === "flux") return FLUX_COLUMNS;
  if (kind === "negativity") return NEGATIVITY_COLUMNS;
  throw new ArtifactError(
    `unknown figure kind '${kind}' (expected flux or negativity)`,
  );
}
