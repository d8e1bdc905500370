/** Golden equivalence: client results must be bit-identical to direct CLI
runs on the same inputs (5 annotation cases + 5 evaluation cases). */

import assert from "node:assert/strict";
import { readFile, writeFile } from "node:fs/promises";
import { join } from "node:path";
import { test } from "node:test";

import { annotate, evaluate } from "../src/index.js";
import { runCli } from "../src/runner.js";
import { readLabels } from "../src/labels.js";
import { batchToRecords } from "../src/validate.js";
import type { ArrayGraspBatch } from "../src/types.js";
import { LITE_FLAGS, sliceBatch, workspace } from "./setup.js";

function randomishFarBatch(n: number): ArrayGraspBatch {
  // valid rotations (axis-angle about z), centers far from any object
  const batch: ArrayGraspBatch = {
    rotations: new Float64Array(9 * n),
    translations: new Float64Array(3 * n),
    widths: new Float64Array(n),
    confidences: new Float64Array(n),
  };
  for (let i = 0; i < n; i++) {
    const a = (i * 2 * Math.PI) / Math.max(1, n);
    const c = Math.cos(a);
    const s = Math.sin(a);
    batch.rotations.set([c, -s, 0, s, c, 0, 0, 0, 1], 9 * i);
    batch.translations.set([1.0 + 0.1 * i, 2.0, 0.5], 3 * i);
    batch.widths[i] = 0.05;
    batch.confidences[i] = 1.0 - i / (2 * n);
  }
  return batch;
}

test("annotation golden cases: tensors bit-equal to direct CLI output", async (t) => {
  const ws = await workspace();
  for (const oid of [1, 2, 3, 4, 5]) {
    await t.test(`object ${oid}`, async () => {
      const clientOut = join(ws.root, `client_obj${oid}.labels`);
      const labels = await annotate(
        ws.meshFiles[oid],
        {
          voxel: 0.02,
          views: 16,
          angles: 4,
          depths: [0.01, 0.02],
          density: 300000,
          seed: 0,
          objectId: oid,
        },
        {},
        clientOut,
      );
      const directOut = join(ws.root, `direct_obj${oid}.labels`);
      await runCli([
        "annotate-object",
        "--mesh", ws.meshFiles[oid],
        "--out", directOut,
        "--object-id", String(oid),
        ...LITE_FLAGS,
      ]);
      const a = await readFile(clientOut);
      const b = await readFile(directOut);
      assert.ok(a.equals(b), "label files must be byte-identical");
      const direct = await readLabels(directOut);
      assert.deepEqual(Array.from(labels.scoreIndex), Array.from(direct.scoreIndex));
      assert.deepEqual(Array.from(labels.widths), Array.from(direct.widths));
      assert.deepEqual(Array.from(labels.flags), Array.from(direct.flags));
      assert.deepEqual(Array.from(labels.graspPoints), Array.from(direct.graspPoints));
    });
  }
});

test("evaluation golden cases: reports bit-identical to direct CLI runs", async (t) => {
  const ws = await workspace();
  const m = ws.gtBatch.widths.length;
  assert.ok(m >= 40, `expected a rich ground-truth set, got ${m}`);
  const cases: Array<[string, ArrayGraspBatch]> = [
    ["ground truth head", sliceBatch(ws.gtBatch, 0, Math.min(60, m))],
    ["ground truth tail", sliceBatch(ws.gtBatch, Math.max(0, m - 25), m)],
    ["single grasp", sliceBatch(ws.gtBatch, 0, 1)],
    ["empty batch", sliceBatch(ws.gtBatch, 0, 0)],
    ["far misses", randomishFarBatch(12)],
  ];
  let caseIdx = 0;
  for (const [name, batch] of cases) {
    const idx = caseIdx++;
    await t.test(name, async () => {
      const viaClient = await evaluate(ws.scenePath, batch);
      const predPath = join(ws.root, `golden_preds_${idx}.json`);
      await writeFile(predPath, batchToRecords(batch));
      const reportPath = join(ws.root, `golden_report_${idx}.json`);
      await runCli([
        "evaluate",
        "--scene", ws.scenePath,
        "--pred", predPath,
        "--nms", "0.01,5deg,10",
        "--out", reportPath,
      ]);
      const direct = await readFile(reportPath, "utf8");
      assert.equal(viaClient.rawReport, direct);
      assert.equal(viaClient.report.ap, JSON.parse(direct).ap);
    });
  }
});
