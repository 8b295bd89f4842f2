import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { column, readCsv } from "../src/csv.js";

function tempCsv(text: string): string {
  const dir = mkdtempSync(join(tmpdir(), "kfks-csv-"));
  const path = join(dir, "t.csv");
  writeFileSync(path, text);
  return path;
}

describe("readCsv", () => {
  it("parses the solver profile format", () => {
    const path = tempCsv("x,rho,u\n0.25,1.5,0.0\n0.75,0.5,-1.0\n");
    const t = readCsv(path);
    expect(t.rows).toBe(2);
    expect(column(t, "rho")).toEqual([1.5, 0.5]);
    expect(column(t, "u")).toEqual([0.0, -1.0]);
  });

  it("round-trips repr-formatted doubles exactly", () => {
    const v = 0.1234567890123456789;
    const path = tempCsv(`x,rho\n0.1,${v}\n`);
    expect(column(readCsv(path), "rho")[0]).toBe(v);
  });

  it("rejects empty files and header-only files", () => {
    expect(() => readCsv(tempCsv(""))).toThrow(/empty CSV/);
    expect(() => readCsv(tempCsv("x,rho\n"))).toThrow(/no data rows/);
  });

  it("names the missing column", () => {
    const t = readCsv(tempCsv("x,rho\n0,1\n"));
    expect(() => column(t, "T")).toThrow(/column "T" not found/);
  });

  it("rejects ragged and non-numeric rows", () => {
    expect(() => readCsv(tempCsv("x,rho\n1\n"))).toThrow(/expected 2 fields/);
    expect(() => readCsv(tempCsv("x,rho\n1,abc\n"))).toThrow(/non-numeric/);
  });
});
