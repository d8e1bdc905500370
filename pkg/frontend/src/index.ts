/** Typed client for the graspbench CLI.

Every entry point delegates to the CLI through its documented file formats,
so the numbers returned here are the CLI's numbers by construction. Calls
run the CLI in a subprocess and never block the event loop; concurrent calls
are isolated in per-call temporary directories.
*/

import { copyFile, readFile, writeFile } from "node:fs/promises";
import { join } from "node:path";

import { readLabels } from "./labels.js";
import { cliCommand, runCli, withTempDir } from "./runner.js";
import {
  type AnnotationParams,
  type ArrayGraspBatch,
  DEFAULT_NMS,
  type EvalReport,
  type EvalResult,
  type LabelArrays,
  type NmsParams,
  type RunnerOptions,
  labelScores,
} from "./types.js";
import { batchToRecords, recordsToBatch, validateBatch } from "./validate.js";

export {
  type AnnotationParams,
  type ArrayGraspBatch,
  DEFAULT_NMS,
  type EvalReport,
  type EvalResult,
  type LabelArrays,
  type NmsParams,
  type RunnerOptions,
  cliCommand,
  labelScores,
  readLabels,
  recordsToBatch,
  validateBatch,
};

function nmsFlag(params: NmsParams): string {
  const deg = (params.rotation * 180.0) / Math.PI;
  return `${params.translation},${deg}deg,${params.topK}`;
}

/**
 * Score a batch of grasp predictions against a scene file.
 *
 * Identical to `graspbench evaluate` on the same inputs; `rawReport` holds
 * the exact report bytes the CLI wrote.
 */
export async function evaluate(
  scenePath: string,
  batch: ArrayGraspBatch,
  nms: NmsParams = DEFAULT_NMS,
  opts: RunnerOptions = {},
): Promise<EvalResult> {
  const records = batchToRecords(batch);
  return withTempDir(opts, async (dir) => {
    const predPath = join(dir, "preds.json");
    const reportPath = join(dir, "report.json");
    await writeFile(predPath, records);
    await runCli(
      [
        "evaluate",
        "--scene", scenePath,
        "--pred", predPath,
        "--nms", nmsFlag(nms),
        "--out", reportPath,
      ],
      opts,
    );
    const rawReport = await readFile(reportPath, "utf8");
    return { report: JSON.parse(rawReport) as EvalReport, rawReport };
  });
}

/**
 * Densely annotate a mesh and return the label tensors.
 *
 * The tensors are parsed from the CLI's binary output file; pass `outPath`
 * to also keep that file.
 */
export async function annotate(
  meshPath: string,
  params: AnnotationParams = {},
  opts: RunnerOptions = {},
  outPath?: string,
): Promise<LabelArrays> {
  return withTempDir(opts, async (dir) => {
    const labelPath = join(dir, "object.labels");
    const args = [
      "annotate-object",
      "--mesh", meshPath,
      "--out", labelPath,
      "--format", "binary",
    ];
    if (params.voxel !== undefined) args.push("--voxel", String(params.voxel));
    if (params.views !== undefined) args.push("--views", String(params.views));
    if (params.angles !== undefined) args.push("--angles", String(params.angles));
    if (params.depths !== undefined) args.push("--depths", params.depths.join(","));
    if (params.muGrid !== undefined) args.push("--mu-grid", params.muGrid);
    if (params.density !== undefined) args.push("--density", String(params.density));
    if (params.seed !== undefined) args.push("--seed", String(params.seed));
    if (params.objectId !== undefined) args.push("--object-id", String(params.objectId));
    if (params.gripper !== undefined) args.push("--gripper", params.gripper);
    await runCli(args, opts);
    if (outPath) {
      await copyFile(labelPath, outPath);
    }
    return readLabels(labelPath);
  });
}

/**
 * Run pose-NMS on a batch against a scene; returns the surviving grasps in
 * descending-confidence order.
 */
export async function nms(
  scenePath: string,
  batch: ArrayGraspBatch,
  params: NmsParams = DEFAULT_NMS,
  opts: RunnerOptions = {},
): Promise<ArrayGraspBatch> {
  const records = batchToRecords(batch);
  return withTempDir(opts, async (dir) => {
    const predPath = join(dir, "preds.json");
    const keptPath = join(dir, "kept.json");
    await writeFile(predPath, records);
    await runCli(
      [
        "nms",
        "--pred", predPath,
        "--scene", scenePath,
        "--nms", nmsFlag(params),
        "--out", keptPath,
      ],
      opts,
    );
    return recordsToBatch(await readFile(keptPath, "utf8"));
  });
}

/**
 * Project a label file's positive grasps through an object pose.
 *
 * `rotation` is 9 row-major entries, `translation` 3 meters. Collision
 * filtering is skipped (there is no scene); widths, scores and confidences
 * come back as flat arrays alongside the poses.
 */
export async function project(
  labelsPath: string,
  rotation: number[] | Float64Array,
  translation: number[] | Float64Array,
  minScore = 0.0,
  opts: RunnerOptions = {},
): Promise<ArrayGraspBatch & { scores: Float64Array }> {
  if (rotation.length !== 9 || translation.length !== 3) {
    throw new Error("pose must have 9 rotation entries and 3 translation entries");
  }
  const labels = await readLabels(labelsPath);
  return withTempDir(opts, async (dir) => {
    const cloudPath = join(dir, "cloud.txt");
    const scenePath = join(dir, "scene.json");
    const manifestPath = join(dir, "manifest.json");
    const outPath = join(dir, "projected.json");
    await copyFile(labelsPath, join(dir, "object.labels"));
    await writeFile(cloudPath, "");
    await writeFile(
      scenePath,
      JSON.stringify({
        format: "graspbench-scene",
        version: "1.0",
        split: "train",
        cloud_file: "cloud.txt",
        instances: [
          {
            object_id: labels.objectId,
            rotation: Array.from(rotation),
            translation: Array.from(translation),
          },
        ],
        cameras: [],
      }),
    );
    await writeFile(
      manifestPath,
      JSON.stringify({
        format: "graspbench-manifest",
        version: "1.0",
        catalog_root: ".",
        objects: { [labels.objectId]: { labels: "object.labels" } },
        scenes: {},
      }),
    );
    await runCli(
      [
        "annotate-scene",
        "--scene", scenePath,
        "--manifest", manifestPath,
        "--out", outPath,
        "--min-score", String(minScore),
        "--skip-collision-filter",
      ],
      opts,
    );
    const raw = JSON.parse(await readFile(outPath, "utf8")) as Array<{
      rotation: number[];
      translation: number[];
      width: number;
      confidence: number;
      score?: number;
    }>;
    const batch = recordsToBatch(JSON.stringify(raw));
    const scores = new Float64Array(raw.length);
    raw.forEach((rec, i) => {
      scores[i] = rec.score ?? 0.0;
    });
    return { ...batch, scores };
  });
}
