/** Parser for the packed binary label container ("GBLB").

Float32 payloads start on 4-byte file offsets; when the backing buffer is
itself aligned the tensors are returned as zero-copy views, otherwise the
affected array falls back to a copy.
*/

import { readFile } from "node:fs/promises";

import type { LabelArrays } from "./types.js";

const MAGIC = "GBLB";
const ARRAY_ORDER = [
  "grasp_points",
  "grasp_normals",
  "score_index",
  "widths",
  "flags",
] as const;

interface Header {
  format: string;
  version: string;
  object_id: number;
  points: number;
  views: number;
  angles: number[];
  depths: number[];
  mu_values: number[];
  gripper_hash: string;
}

function f32View(buf: Buffer, offset: number, count: number): Float32Array {
  const abs = buf.byteOffset + offset;
  if (abs % 4 === 0) {
    return new Float32Array(buf.buffer, abs, count);
  }
  const copy = Buffer.alloc(count * 4);
  buf.copy(copy, 0, offset, offset + count * 4);
  return new Float32Array(copy.buffer, 0, count);
}

export function parseLabelBuffer(buf: Buffer): LabelArrays {
  if (buf.length < 8 || buf.toString("latin1", 0, 4) !== MAGIC) {
    throw new Error("not a graspbench binary label file");
  }
  const headerLen = buf.readUInt32LE(4);
  let offset = 8 + headerLen;
  if (offset > buf.length) {
    throw new Error("truncated label file");
  }
  const header = JSON.parse(buf.toString("utf8", 8, offset)) as Header;
  if (header.format !== "graspbench-labels") {
    throw new Error(`unexpected container format ${header.format}`);
  }
  if (String(header.version).split(".")[0] !== "1") {
    throw new Error(`unsupported label format version ${header.version}`);
  }
  const arrays: Record<string, Float32Array | Uint8Array> = {};
  for (const name of ARRAY_ORDER) {
    if (offset + 2 > buf.length) throw new Error("truncated label file");
    const code = buf.readUInt8(offset);
    const ndim = buf.readUInt8(offset + 1);
    offset += 2;
    let count = 1;
    for (let d = 0; d < ndim; d++) {
      if (offset + 4 > buf.length) throw new Error("truncated label file");
      count *= buf.readUInt32LE(offset);
      offset += 4;
    }
    offset += (4 - (offset % 4)) % 4; // alignment padding
    const nbytes = code === 1 ? count * 4 : count;
    if (offset + nbytes > buf.length) throw new Error("truncated label file");
    if (code === 1) {
      arrays[name] = f32View(buf, offset, count);
    } else if (code === 0) {
      arrays[name] = new Uint8Array(buf.buffer, buf.byteOffset + offset, count);
    } else {
      throw new Error(`unknown dtype code ${code}`);
    }
    offset += nbytes;
  }
  if (offset !== buf.length) {
    throw new Error("trailing bytes after label arrays");
  }
  return {
    objectId: header.object_id,
    points: header.points,
    views: header.views,
    angles: header.angles,
    depths: header.depths,
    muValues: header.mu_values,
    gripperHash: header.gripper_hash,
    graspPoints: arrays.grasp_points as Float32Array,
    graspNormals: arrays.grasp_normals as Float32Array,
    scoreIndex: arrays.score_index as Uint8Array,
    widths: arrays.widths as Float32Array,
    flags: arrays.flags as Uint8Array,
  };
}

export async function readLabels(path: string): Promise<LabelArrays> {
  return parseLabelBuffer(await readFile(path));
}
