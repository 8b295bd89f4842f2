import { column, readCsv } from "./csv.js";

interface OrderRow {
  meshes: string;
  nu: number;
  p: number;
}

function fmtNu(nu: number): string {
  return Number.isInteger(nu) ? String(nu) : nu.toExponential(2);
}

/** Render convergence-order CSVs as a mesh-triple x frequency text table. */
export function tabulateOrders(paths: string[]): string {
  if (paths.length === 0) {
    throw new Error("at least one orders CSV is required");
  }
  const rows: OrderRow[] = [];
  let nuSet: string | null = null;
  for (const path of paths) {
    const table = readCsv(path);
    const m0 = column(table, "m_coarse");
    const m1 = column(table, "m_mid");
    const m2 = column(table, "m_fine");
    const nu = column(table, "nu");
    const p = column(table, "p");
    const fileNus = [...new Set(nu)].sort((a, b) => a - b).map(fmtNu).join(",");
    if (nuSet === null) {
      nuSet = fileNus;
    } else if (nuSet !== fileNus) {
      throw new Error(`inconsistent collision-frequency sets across files (at ${path})`);
    }
    for (let i = 0; i < table.rows; i++) {
      rows.push({ meshes: `${m0[i]},${m1[i]},${m2[i]}`, nu: nu[i], p: p[i] });
    }
  }

  const nus = [...new Set(rows.map((r) => r.nu))].sort((a, b) => a - b);
  const triples: string[] = [];
  for (const r of rows) {
    if (!triples.includes(r.meshes)) {
      triples.push(r.meshes);
    }
  }
  const cell = new Map<string, number>();
  for (const r of rows) {
    const key = `${r.meshes}|${r.nu}`;
    if (cell.has(key) && cell.get(key) !== r.p) {
      throw new Error(`conflicting order values for meshes ${r.meshes} at nu=${fmtNu(r.nu)}`);
    }
    cell.set(key, r.p);
  }

  const meshWidth = Math.max("Meshes".length, ...triples.map((t) => t.length)) + 2;
  const colWidth = Math.max(10, ...nus.map((nu) => fmtNu(nu).length + 5));
  const pad = (s: string, w: number) => s.padStart(w);
  const lines: string[] = [];
  lines.push("Meshes".padEnd(meshWidth) + "| Order of convergence");
  lines.push(
    " ".repeat(meshWidth) + "|" + nus.map((nu) => pad(`nu=${fmtNu(nu)}`, colWidth)).join(" |"),
  );
  lines.push("-".repeat(meshWidth) + "+" + nus.map(() => "-".repeat(colWidth + 1)).join("+"));
  for (const t of triples) {
    const cells = nus.map((nu) => {
      const p = cell.get(`${t}|${nu}`);
      if (p === undefined) {
        throw new Error(`missing order for meshes ${t} at nu=${fmtNu(nu)}`);
      }
      return pad(p.toFixed(3), colWidth);
    });
    lines.push(t.padEnd(meshWidth) + "|" + cells.join(" |"));
  }
  return lines.join("\n") + "\n";
}
