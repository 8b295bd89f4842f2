import { writeFileSync } from "node:fs";

import { plotProfiles } from "./plot.js";
import { tabulateOrders } from "./orders.js";

const USAGE = `usage:
  plot-profiles --csv a.csv,b.csv --labels A,B --variable rho [--zoom lo,hi] -o fig.svg
  tabulate-orders --csv orders.csv[,more.csv] -o table.txt`;

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("-") || i + 1 >= argv.length) {
      throw new UsageError(`bad argument: ${key}`);
    }
    flags.set(key.replace(/^--?/, ""), argv[i + 1]);
  }
  return flags;
}

class UsageError extends Error {}

function required(flags: Map<string, string>, name: string): string {
  const v = flags.get(name);
  if (v === undefined) {
    throw new UsageError(`--${name} is required`);
  }
  return v;
}

export function main(argv: string[]): number {
  try {
    const [command, ...rest] = argv;
    if (command === "plot-profiles") {
      const flags = parseFlags(rest);
      const csvPaths = required(flags, "csv").split(",");
      const labels = required(flags, "labels").split(",");
      const variable = required(flags, "variable");
      const out = flags.get("o") ?? flags.get("output");
      if (out === undefined) {
        throw new UsageError("-o output path is required");
      }
      let zoom: [number, number] | undefined;
      const zoomRaw = flags.get("zoom");
      if (zoomRaw !== undefined) {
        const parts = zoomRaw.split(",").map(Number);
        if (parts.length !== 2 || parts.some(Number.isNaN)) {
          throw new UsageError(`bad --zoom window: ${zoomRaw}`);
        }
        zoom = [parts[0], parts[1]];
      }
      writeFileSync(out, plotProfiles({ csvPaths, labels, variable, zoom }));
      console.log(out);
      return 0;
    }
    if (command === "tabulate-orders") {
      const flags = parseFlags(rest);
      const csvPaths = required(flags, "csv").split(",");
      const out = flags.get("o") ?? flags.get("output");
      const text = tabulateOrders(csvPaths);
      if (out !== undefined) {
        writeFileSync(out, text);
        console.log(out);
      } else {
        process.stdout.write(text);
      }
      return 0;
    }
    throw new UsageError(USAGE);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      return 2;
    }
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
