/**
 * Feature-CSV ingestion.
 *
 * Input files are the per-tuple exports of the streaming side: the 14 raw
 * netflow columns, then one column per derived feature, then a trailing
 * Label column. Cells never contain commas or quotes (the writer joins
 * plain formatted values), so a straight comma split is the whole grammar.
 *
 * Column alignment is schema-driven: features are located by header name,
 * and a requested feature missing from a file is an error, never a silent
 * reorder. Empty feature cells mean the window was not warm yet and are
 * imputed as 0.
 */

import { readFileSync } from "node:fs";

// raw tuple columns, in their frozen order; never used as model features
export const BASE_COLUMNS = [
  "TimeSeconds",
  "ParseDate",
  "IpLayerProtocol",
  "SourceIp",
  "DestIp",
  "SourcePort",
  "DestPort",
  "DurationSeconds",
  "SrcPayloadBytes",
  "DestPayloadBytes",
  "SrcTotalBytes",
  "DestTotalBytes",
  "SrcPacketCount",
  "DestPacketCount",
] as const;

export const LABEL_COLUMN = "Label";

export class CsvSchemaError extends Error {}

export interface FeatureTable {
  /** one Float64Array per feature, column-major, rows aligned with labels */
  columns: Float64Array[];
  featureNames: string[];
  /** 1 = malicious, 0 = benign */
  labels: Uint8Array;
  rows: number;
}

/** Features a file offers for modelling: header minus raw columns and Label. */
export function featureColumnsOf(path: string): string[] {
  const header = readHeader(path);
  const base = new Set<string>(BASE_COLUMNS);
  return header.filter((h) => !base.has(h) && h !== LABEL_COLUMN);
}

function readHeader(path: string): string[] {
  const text = readFileSync(path, "utf-8");
  const nl = text.indexOf("\n");
  const line = nl < 0 ? text : text.slice(0, nl);
  return line.replace(/\r$/, "").split(",");
}

export function readFeatureCsv(path: string, featureNames?: string[]): FeatureTable {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new CsvSchemaError(`${path}: empty file`);

  const header = lines[0].split(",");
  const col = new Map<string, number>();
  header.forEach((name, i) => col.set(name, i));

  const names = featureNames ?? featureColumnsOf(path);
  const featureIdx = names.map((name) => {
    const i = col.get(name);
    if (i === undefined) throw new CsvSchemaError(`${path}: feature "${name}" not in header`);
    return i;
  });
  const labelIdx = col.get(LABEL_COLUMN);
  if (labelIdx === undefined) throw new CsvSchemaError(`${path}: no ${LABEL_COLUMN} column`);

  const rows = lines.length - 1;
  const columns = names.map(() => new Float64Array(rows));
  const labels = new Uint8Array(rows);

  for (let r = 0; r < rows; r++) {
    const cells = lines[r + 1].split(",");
    if (cells.length !== header.length) {
      throw new CsvSchemaError(`${path}:${r + 2}: ${cells.length} cells, header has ${header.length}`);
    }
    for (let f = 0; f < featureIdx.length; f++) {
      const cell = cells[featureIdx[f]];
      if (cell === "") continue; // cold window, imputed as 0
      const v = Number(cell);
      if (Number.isNaN(v)) {
        throw new CsvSchemaError(`${path}:${r + 2}: non-numeric cell "${cell}" in ${names[f]}`);
      }
      columns[f][r] = v;
    }
    const label = cells[labelIdx];
    if (label === "malicious") labels[r] = 1;
    else if (label !== "benign") {
      throw new CsvSchemaError(`${path}:${r + 2}: label "${label}" is not benign/malicious`);
    }
  }
  return { columns, featureNames: names, labels, rows };
}
