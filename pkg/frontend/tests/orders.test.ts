import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { tabulateOrders } from "../src/orders.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const DATA = join(HERE, "..", "testdata");

function tempCsv(text: string): string {
  const dir = mkdtempSync(join(tmpdir(), "kfks-orders-"));
  const path = join(dir, "orders.csv");
  writeFileSync(path, text);
  return path;
}

describe("tabulateOrders", () => {
  it("matches the golden five-triple, three-frequency table", () => {
    const text = tabulateOrders([join(DATA, "orders_synthetic.csv")]);
    const golden = readFileSync(join(DATA, "orders_golden.txt"), "utf8");
    expect(text).toBe(golden);
    const rows = text.trim().split("\n");
    expect(rows).toHaveLength(3 + 5); // two header lines + rule + 5 triples
    expect((rows[1].match(/nu=/g) ?? []).length).toBe(3);
  });

  it("renders a single-triple single-frequency table", () => {
    const path = tempCsv("m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine\n16,32,64,100.0,1.98,1,1\n");
    const text = tabulateOrders([path]);
    expect(text).toContain("16,32,64");
    expect(text).toContain("1.980");
  });

  it("formats the real solver output", () => {
    const text = tabulateOrders([join(DATA, "orders_rfks.csv")]);
    expect(text.trim().split("\n")).toHaveLength(3 + 3);
  });

  it("rejects inconsistent frequency sets across files", () => {
    const a = tempCsv("m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine\n16,32,64,10.0,2,1,1\n");
    const b = tempCsv("m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine\n16,32,64,100.0,2,1,1\n");
    expect(() => tabulateOrders([a, b])).toThrow(/inconsistent collision-frequency sets/);
  });

  it("rejects a missing mesh triple entry", () => {
    const path = tempCsv(
      "m_coarse,m_mid,m_fine,nu,p,err_coarse,err_fine\n" +
        "16,32,64,10.0,2,1,1\n16,32,64,100.0,2,1,1\n32,64,128,10.0,2,1,1\n",
    );
    expect(() => tabulateOrders([path])).toThrow(/missing order for meshes 32,64,128/);
  });

  it("is deterministic", () => {
    const path = join(DATA, "orders_synthetic.csv");
    expect(tabulateOrders([path])).toBe(tabulateOrders([path]));
  });
});
