/** Boundary validation: malformed batches never reach the CLI. */

import type { ArrayGraspBatch } from "./types.js";

const ORTHO_TOL = 1e-6;

/** Number of grasps in the batch; throws when the arrays disagree. */
export function batchSize(batch: ArrayGraspBatch): number {
  const m = batch.widths.length;
  if (batch.confidences.length !== m) {
    throw new Error(
      `confidences length ${batch.confidences.length} does not match widths length ${m}`,
    );
  }
  if (batch.rotations.length !== 9 * m) {
    throw new Error(
      `rotations length ${batch.rotations.length} must be 9 * ${m}`,
    );
  }
  if (batch.translations.length !== 3 * m) {
    throw new Error(
      `translations length ${batch.translations.length} must be 3 * ${m}`,
    );
  }
  return m;
}

function rotationError(r: Float64Array, off: number): number {
  // max |R^T R - I| entry plus the determinant defect
  let worst = 0;
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      let dot = 0;
      for (let k = 0; k < 3; k++) {
        dot += r[off + 3 * k + i] * r[off + 3 * k + j];
      }
      worst = Math.max(worst, Math.abs(dot - (i === j ? 1 : 0)));
    }
  }
  const det =
    r[off] * (r[off + 4] * r[off + 8] - r[off + 5] * r[off + 7]) -
    r[off + 1] * (r[off + 3] * r[off + 8] - r[off + 5] * r[off + 6]) +
    r[off + 2] * (r[off + 3] * r[off + 7] - r[off + 4] * r[off + 6]);
  return Math.max(worst, Math.abs(det - 1));
}

/** Validates every rotation row; the error names the offending index. */
export function validateBatch(batch: ArrayGraspBatch): number {
  const m = batchSize(batch);
  for (let i = 0; i < m; i++) {
    for (let k = 0; k < 9; k++) {
      if (!Number.isFinite(batch.rotations[9 * i + k])) {
        throw new Error(`rotation ${i} contains a non-finite entry`);
      }
    }
    if (rotationError(batch.rotations, 9 * i) > ORTHO_TOL) {
      throw new Error(`rotation ${i} is not a proper rotation matrix`);
    }
    if (!Number.isFinite(batch.widths[i]) || !Number.isFinite(batch.confidences[i])) {
      throw new Error(`grasp ${i} has non-finite width or confidence`);
    }
  }
  return m;
}

/** Serialize a batch into the CLI's prediction-record JSON. */
export function batchToRecords(batch: ArrayGraspBatch): string {
  const m = validateBatch(batch);
  const records = [];
  for (let i = 0; i < m; i++) {
    records.push({
      rotation: Array.from(batch.rotations.subarray(9 * i, 9 * i + 9)),
      translation: Array.from(batch.translations.subarray(3 * i, 3 * i + 3)),
      width: batch.widths[i],
      confidence: batch.confidences[i],
    });
  }
  return JSON.stringify(records);
}

interface PredictionRecord {
  rotation: number[];
  translation: number[];
  width: number;
  confidence: number;
}

/** Parse a CLI prediction file back into a flat batch. */
export function recordsToBatch(jsonText: string): ArrayGraspBatch {
  const records = JSON.parse(jsonText) as PredictionRecord[];
  const m = records.length;
  const batch: ArrayGraspBatch = {
    rotations: new Float64Array(9 * m),
    translations: new Float64Array(3 * m),
    widths: new Float64Array(m),
    confidences: new Float64Array(m),
  };
  records.forEach((rec, i) => {
    batch.rotations.set(rec.rotation, 9 * i);
    batch.translations.set(rec.translation, 3 * i);
    batch.widths[i] = rec.width;
    batch.confidences[i] = rec.confidence;
  });
  return batch;
}
