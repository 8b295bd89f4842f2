import { column, readCsv, Table } from "./csv.js";

export interface FigureSpec {
  csvPaths: string[];
  labels: string[];
  variable: string;
  zoom?: [number, number];
}

/** Paper color coding per scheme; unknown labels fall back to a fixed cycle. */
const SCHEME_COLORS: Record<string, string> = {
  fks: "red",
  rfks: "blue",
  "r-fks": "blue",
  sl_upwind: "magenta",
  "sl-upwind": "magenta",
  sl_muscl: "green",
  "sl-muscl": "green",
};
const FALLBACK_COLORS = ["black", "darkorange", "teal", "purple", "brown"];

const PANEL_W = 390;
const PANEL_H = 290;
const MARGIN = { left: 60, right: 15, top: 30, bottom: 45 };

function colorFor(label: string, index: number): string {
  return SCHEME_COLORS[label.toLowerCase()] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function fmt(v: number): string {
  return v.toFixed(2);
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
}

interface Series {
  label: string;
  color: string;
  x: number[];
  y: number[];
}

function dataRange(series: Series[], lo: number, hi: number): [number, number] {
  let ymin = Infinity;
  let ymax = -Infinity;
  for (const s of series) {
    for (let i = 0; i < s.x.length; i++) {
      if (s.x[i] >= lo && s.x[i] <= hi) {
        if (s.y[i] < ymin) ymin = s.y[i];
        if (s.y[i] > ymax) ymax = s.y[i];
      }
    }
  }
  if (!(ymin < ymax)) {
    ymax = ymin + 1;
  }
  const pad = 0.05 * (ymax - ymin);
  return [ymin - pad, ymax + pad];
}

function panel(
  series: Series[],
  originX: number,
  xLo: number,
  xHi: number,
  title: string,
  clipId: string,
  withLegend: boolean,
): string {
  const [yLo, yHi] = dataRange(series, xLo, xHi);
  const x0 = originX + MARGIN.left;
  const y0 = MARGIN.top;
  const sx = (x: number) => x0 + ((x - xLo) / (xHi - xLo)) * PANEL_W;
  const sy = (y: number) => y0 + PANEL_H - ((y - yLo) / (yHi - yLo)) * PANEL_H;

  const parts: string[] = [];
  parts.push(
    `<clipPath id="${clipId}"><rect x="${fmt(x0)}" y="${fmt(y0)}" width="${PANEL_W}" height="${PANEL_H}"/></clipPath>`,
  );
  parts.push(
    `<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${PANEL_W}" height="${PANEL_H}" fill="none" stroke="black"/>`,
  );
  parts.push(
    `<text x="${fmt(x0 + PANEL_W / 2)}" y="${fmt(y0 - 10)}" text-anchor="middle" font-size="13">${title}</text>`,
  );
  for (let t = 0; t <= 4; t++) {
    const xv = xLo + (t / 4) * (xHi - xLo);
    const px = sx(xv);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0 + PANEL_H)}" x2="${fmt(px)}" y2="${fmt(y0 + PANEL_H + 5)}" stroke="black"/>`);
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(y0 + PANEL_H + 18)}" text-anchor="middle" font-size="11">${fmtTick(xv)}</text>`,
    );
    const yv = yLo + (t / 4) * (yHi - yLo);
    const py = sy(yv);
    parts.push(`<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="black"/>`);
    parts.push(
      `<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${fmtTick(yv)}</text>`,
    );
  }
  for (const s of series) {
    const pts = s.x.map((x, i) => `${fmt(sx(x))},${fmt(sy(s.y[i]))}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.2" clip-path="url(#${clipId})"/>`,
    );
  }
  if (withLegend) {
    let ly = y0 + 14;
    for (const s of series) {
      const lx = x0 + PANEL_W - 120;
      parts.push(`<line x1="${fmt(lx)}" y1="${fmt(ly - 4)}" x2="${fmt(lx + 24)}" y2="${fmt(ly - 4)}" stroke="${s.color}" stroke-width="2"/>`);
      parts.push(`<text x="${fmt(lx + 30)}" y="${fmt(ly)}" font-size="12">${s.label}</text>`);
      ly += 16;
    }
  }
  return parts.join("\n");
}

/** Render final-time profiles: full-domain panel plus an optional zoom panel. */
export function plotProfiles(spec: FigureSpec): string {
  if (spec.csvPaths.length === 0) {
    throw new Error("at least one input CSV is required");
  }
  if (spec.labels.length !== spec.csvPaths.length) {
    throw new Error("need exactly one label per input CSV");
  }
  const series: Series[] = spec.csvPaths.map((path, i) => {
    const table: Table = readCsv(path);
    return {
      label: spec.labels[i],
      color: colorFor(spec.labels[i], i),
      x: column(table, "x"),
      y: column(table, spec.variable),
    };
  });
  let xLo = Infinity;
  let xHi = -Infinity;
  for (const s of series) {
    xLo = Math.min(xLo, ...s.x);
    xHi = Math.max(xHi, ...s.x);
  }
  const panels = spec.zoom === undefined ? 1 : 2;
  const width = panels * (MARGIN.left + PANEL_W + MARGIN.right);
  const height = MARGIN.top + PANEL_H + MARGIN.bottom;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<title>${spec.variable} profiles</title>`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    panel(series, 0, xLo, xHi, spec.variable, "clip-full", true),
  ];
  if (spec.zoom !== undefined) {
    const [lo, hi] = spec.zoom;
    if (!(lo < hi)) {
      throw new Error(`zoom window [${lo}, ${hi}] is empty`);
    }
    parts.push(
      panel(
        series,
        MARGIN.left + PANEL_W + MARGIN.right,
        lo,
        hi,
        `${spec.variable} (zoom)`,
        "clip-zoom",
        false,
      ),
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
