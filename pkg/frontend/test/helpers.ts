// Shared fixtures: temp dirs, synthetic feature CSVs in the exact shape the
// streaming exporter writes (14 raw columns, feature columns, Label), and a
// planted netflow capture whose malicious sources draw payload sizes from a
// shifted distribution.

import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { BASE_COLUMNS } from "../src/csv.js";
import { Rng, mulberry32, randInt } from "../src/rng.js";

export function makeTmpDir(prefix: string): { dir: string; cleanup: () => void } {
  const dir = mkdtempSync(join(tmpdir(), `${prefix}-`));
  return { dir, cleanup: () => rmSync(dir, { recursive: true, force: true }) };
}

export interface FeatureRow {
  features: (number | "")[];
  label: "benign" | "malicious";
}

/** Write a feature CSV; raw columns are filled with valid filler values. */
export function writeFeatureCsv(path: string, featureNames: string[], rows: FeatureRow[]): void {
  const lines = [[...BASE_COLUMNS, ...featureNames, "Label"].join(",")];
  rows.forEach((row, i) => {
    const base = [
      (1364774400 + i).toString(),
      "2013-04-01",
      "6",
      "10.0.0.1",
      "192.0.0.1",
      "1234",
      "80",
      "0.5",
      "100",
      "100",
      "140",
      "140",
      "2",
      "2",
    ];
    const cells = row.features.map((v) => (v === "" ? "" : String(v)));
    lines.push([...base, ...cells, row.label].join(","));
  });
  writeFileSync(path, lines.join("\n") + "\n");
}

export interface PlantedOptions {
  rows: number;
  seed: number;
  sources?: number; // default 48, first quarter malicious
  dests?: number; // default 16
}

/**
 * Labeled capture where a fixed quarter of the sources send payloads about
 * three times larger than the rest; everything else is class-independent.
 */
export function writePlantedCapture(path: string, opts: PlantedOptions): void {
  const rng: Rng = mulberry32(opts.seed);
  const nSrc = opts.sources ?? 48;
  const nMal = Math.floor(nSrc / 4);
  const nDst = opts.dests ?? 16;
  const lines = [[...BASE_COLUMNS, "Label"].join(",")];
  for (let i = 0; i < opts.rows; i++) {
    const src = randInt(rng, nSrc);
    const malicious = src < nMal;
    const meanPayload = malicious ? 900 : 280;
    const srcPayload = Math.round(meanPayload * (0.5 + rng()));
    const dstPayload = Math.round(meanPayload * (0.5 + rng()));
    const srcPackets = 1 + randInt(rng, 50);
    const dstPackets = 1 + randInt(rng, 50);
    const t = 1364774400 + i * 0.05 + rng() * 0.01;
    const cells = [
      t.toFixed(6),
      "2013-04-01",
      "6",
      `10.0.${src >> 8}.${src & 255}`,
      `192.0.${randInt(rng, nDst) >> 8}.${randInt(rng, nDst) & 255}`,
      String(1024 + randInt(rng, 60000)),
      String([80, 443, 8080, 53, 22][randInt(rng, 5)]),
      (rng() * 2).toFixed(4),
      String(srcPayload),
      String(dstPayload),
      String(srcPayload + 40 * srcPackets),
      String(dstPayload + 40 * dstPackets),
      String(srcPackets),
      String(dstPackets),
      malicious ? "malicious" : "benign",
    ];
    lines.push(cells.join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n");
}
