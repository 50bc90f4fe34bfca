#!/usr/bin/env node
/** plotkit render --panel <name> --csv <path> --out <path.svg>
 *
 * Reads a sweep CSV and writes a deterministic SVG panel.  No file is
 * written when rendering fails. */

import * as fs from "node:fs";
import * as process from "node:process";

import { panelByName, PANELS } from "./panels.js";
import { renderPanel } from "./render.js";

function usage(): string {
  return (
    "usage: plotkit render --panel <name> --csv <path> --out <path>\n" +
    `panels: ${Object.keys(PANELS).join(", ")}`
  );
}

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(usage());
    }
    out.set(key.slice(2), value);
  }
  return out;
}

export function main(argv: string[]): number {
  try {
    if (argv[0] !== "render") {
      throw new Error(usage());
    }
    const args = parseArgs(argv.slice(1));
    const panelName = args.get("panel");
    const csvPath = args.get("csv");
    const outPath = args.get("out");
    if (!panelName || !csvPath || !outPath) {
      throw new Error(usage());
    }
    const panel = panelByName(panelName);
    const csvText = fs.readFileSync(csvPath, "utf-8");
    const svg = renderPanel(panel, csvText);
    fs.writeFileSync(outPath, svg, "utf-8");
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
