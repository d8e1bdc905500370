import assert from "node:assert/strict";
import { readFile } from "node:fs/promises";
import { join } from "node:path";
import { test } from "node:test";

import {
  annotate,
  evaluate,
  labelScores,
  nms,
  project,
  readLabels,
  validateBatch,
} from "../src/index.js";
import { runCli } from "../src/runner.js";
import type { ArrayGraspBatch } from "../src/types.js";
import { runPython, sliceBatch, workspace } from "./setup.js";

function identityBatch(n: number, spacing = 0.0): ArrayGraspBatch {
  const batch: ArrayGraspBatch = {
    rotations: new Float64Array(9 * n),
    translations: new Float64Array(3 * n),
    widths: new Float64Array(n).fill(0.05),
    confidences: new Float64Array(n),
  };
  for (let i = 0; i < n; i++) {
    batch.rotations.set([1, 0, 0, 0, 1, 0, 0, 0, 1], 9 * i);
    batch.translations.set([spacing * i, 0, 0], 3 * i);
    batch.confidences[i] = 1.0 - i * 0.01;
  }
  return batch;
}

test("batch validation names the offending rotation index", () => {
  const batch = identityBatch(3);
  batch.rotations[9 + 4] = 5.0; // corrupt row 1
  assert.throws(() => validateBatch(batch), /rotation 1/);
});

test("batch validation rejects inconsistent leading dimensions", () => {
  const batch = identityBatch(2);
  const bad = { ...batch, translations: new Float64Array(3) };
  assert.throws(() => validateBatch(bad), /translations length/);
});

test("empty batch evaluates to AP = 0", async () => {
  const ws = await workspace();
  const result = await evaluate(ws.scenePath, identityBatch(0));
  assert.equal(result.report.ap, 0.0);
});

test("annotate propagates missing-mesh errors", async () => {
  await assert.rejects(
    annotate("/nonexistent/mesh.obj", { views: 4 }),
    /graspbench CLI failed/,
  );
});

test("binary and JSON label encodings parse to the same tensors", async () => {
  const ws = await workspace();
  const jsonPath = join(ws.root, "obj1_json.labels.json");
  await runCli([
    "annotate-object",
    "--mesh", ws.meshFiles[1],
    "--out", jsonPath,
    "--format", "json",
    "--object-id", "1",
    "--voxel", "0.02",
    "--views", "16",
    "--angles", "4",
    "--depths", "0.01,0.02",
    "--density", "300000",
    "--seed", "0",
  ]);
  const binary = await readLabels(ws.labelFiles[1]);
  const parsed = JSON.parse(await readFile(jsonPath, "utf8"));
  assert.equal(parsed.object_id, binary.objectId);
  assert.deepEqual(
    parsed.arrays.score_index.data,
    Array.from(binary.scoreIndex),
  );
  assert.deepEqual(parsed.arrays.flags.data, Array.from(binary.flags));
  const jsonWidths = Float32Array.from(parsed.arrays.widths.data as number[]);
  assert.deepEqual(Array.from(jsonWidths), Array.from(binary.widths));
});

test("empty label sets parse with correct shape metadata", async () => {
  const ws = await workspace();
  const emptyPath = join(ws.root, "empty.labels");
  await runPython(
    `
import numpy as np
from graspbench.annotation import GraspLabelSet
from graspbench.codecs import save_labels
empty = GraspLabelSet(
    object_id=9,
    grasp_points=np.zeros((0, 3), dtype=np.float32),
    grasp_normals=np.zeros((0, 3), dtype=np.float32),
    views=6, angles=(0.0, 1.0), depths=(0.01,), mu_values=(0.1, 0.2),
    score_index=np.zeros((0, 6, 2, 1), dtype=np.uint8),
    widths=np.zeros((0, 6, 2, 1), dtype=np.float32),
    flags=np.zeros((0, 6, 2, 1), dtype=np.uint8),
)
save_labels(empty, ${JSON.stringify(emptyPath)})
`,
  );
  const labels = await readLabels(emptyPath);
  assert.equal(labels.points, 0);
  assert.equal(labels.views, 6);
  assert.equal(labels.scoreIndex.length, 0);
  assert.equal(labels.graspPoints.length, 0);
  assert.deepEqual(labels.depths, [0.01]);
});

test("nms merges duplicates and keeps separated grasps", async () => {
  const ws = await workspace();
  const dup = identityBatch(2); // identical poses, distinct confidence
  dup.translations.set([1.0, 1.0, 0.5, 1.0, 1.0, 0.5]);
  const keptDup = await nms(ws.scenePath, dup);
  assert.equal(keptDup.widths.length, 1);
  const apart = identityBatch(3, 0.02);
  const keptApart = await nms(ws.scenePath, apart);
  assert.equal(keptApart.widths.length, 3);
});

test("project maps positive labels through a pose", async () => {
  const ws = await workspace();
  const labels = await readLabels(ws.labelFiles[1]);
  const scores = labelScores(labels);
  let expected = 0;
  for (const s of scores) {
    if (s >= 0.9) expected += 1;
  }
  const t = [0.05, -0.02, 0.1];
  const projected = await project(
    ws.labelFiles[1],
    [1, 0, 0, 0, 1, 0, 0, 0, 1],
    t,
    0.9,
  );
  assert.equal(projected.widths.length, expected);
  assert.ok(expected > 0);
  for (const s of projected.scores) {
    assert.ok(s >= 0.9);
  }
  // identity rotation: projected centers are label-frame centers plus t;
  // spot-check that all translations moved into the expected half-space
  for (let i = 0; i < projected.widths.length; i++) {
    assert.ok(Math.abs(projected.translations[3 * i] - t[0]) < 0.2);
  }
});

test("evaluation accepts ground-truth slices and is deterministic", async () => {
  const ws = await workspace();
  const head = sliceBatch(ws.gtBatch, 0, Math.min(30, ws.gtBatch.widths.length));
  const a = await evaluate(ws.scenePath, head);
  const b = await evaluate(ws.scenePath, head);
  assert.equal(a.rawReport, b.rawReport);
  assert.ok(a.report.ap > 0);
  const mus = a.report.ap_per_mu;
  for (let i = 1; i < mus.length; i++) {
    assert.ok(mus[i - 1] <= mus[i] + 1e-15, "AP must be mu-monotone");
  }
});
