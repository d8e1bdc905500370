/** Shared types for the graspbench client. */

/**
 * A batch of M grasp poses as flat contiguous arrays:
 * rotations are M*9 row-major 3x3 matrices, translations M*3 meters.
 */
export interface ArrayGraspBatch {
  rotations: Float64Array;
  translations: Float64Array;
  widths: Float64Array;
  confidences: Float64Array;
}

/** Pose-NMS thresholds; distances in meters, rotation in radians. */
export interface NmsParams {
  translation: number;
  rotation: number;
  topK: number;
}

export const DEFAULT_NMS: NmsParams = {
  translation: 0.01,
  rotation: (5.0 * Math.PI) / 180.0,
  topK: 10,
};

/** Annotation grid parameters mirrored onto the CLI flags. */
export interface AnnotationParams {
  voxel?: number;
  views?: number;
  angles?: number;
  depths?: number[];
  muGrid?: string;
  density?: number;
  seed?: number;
  objectId?: number;
  gripper?: string;
}

export interface EvalReport {
  mu_values: number[];
  precision_at_k: number[][];
  ap_per_mu: number[];
  ap: number;
  audit: Array<Record<string, unknown>>;
}

/** Evaluation result plus the exact bytes the CLI wrote. */
export interface EvalResult {
  report: EvalReport;
  rawReport: string;
}

/** Parsed label tensors; typed-array views over the file buffer. */
export interface LabelArrays {
  objectId: number;
  points: number;
  views: number;
  angles: number[];
  depths: number[];
  muValues: number[];
  gripperHash: string;
  graspPoints: Float32Array; // points * 3
  graspNormals: Float32Array; // points * 3
  scoreIndex: Uint8Array; // points * views * |angles| * |depths|
  widths: Float32Array;
  flags: Uint8Array;
}

/** Scores reconstructed from the index tensor: s = 1.1 - mu, 0 if unscored. */
export function labelScores(labels: LabelArrays): Float64Array {
  const out = new Float64Array(labels.scoreIndex.length);
  for (let i = 0; i < labels.scoreIndex.length; i++) {
    const idx = labels.scoreIndex[i];
    out[i] = idx === 0 ? 0.0 : 1.1 - labels.muValues[idx - 1];
  }
  return out;
}

export interface RunnerOptions {
  /** Command prefix used to invoke the CLI, e.g. ["python3", "-m", "graspbench"]. */
  command?: string[];
  /** Extra environment variables for the CLI process. */
  env?: Record<string, string>;
  /** Keep the per-call temp directory (for debugging). */
  keepTemp?: boolean;
}
