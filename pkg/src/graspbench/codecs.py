"""File formats: meshes, point clouds, labels, scenes, predictions, reports.

Every container embeds a format name and version string; loaders reject
unknown major versions. Numeric text output uses shortest round-trip float
representations so text codecs are lossless.
"""

from __future__ import annotations

import csv
import json
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .annotation import GraspLabelSet
from .evaluation import EvalReport
from .geometry import PointCloud, RigidTransform, TriangleMesh, check_rotation
from .gripper import GraspPose, GripperModel
from .scene import ObjectInstance, Scene

FORMAT_VERSION = "1.0"
_LABEL_MAGIC = b"GBLB"


class DataError(Exception):
    """Base class for malformed or inconsistent data files."""


class MeshFormatError(DataError):
    pass


class CloudFormatError(DataError):
    pass


class LabelFormatError(DataError):
    pass


class SceneFormatError(DataError):
    pass


class PredictionFormatError(DataError):
    pass


class ManifestError(DataError):
    pass


def _check_version(version: str, error_cls) -> None:
    major = str(version).split(".")[0]
    if major != FORMAT_VERSION.split(".")[0]:
        raise error_cls(f"unsupported format version {version!r}")


def _fmt(value: float) -> str:
    return repr(float(value))


# ---------------------------------------------------------------------------
# Meshes (ASCII OBJ and ASCII PLY)

def load_mesh(path) -> TriangleMesh:
    """Load an ASCII OBJ or PLY mesh; degenerate triangles are dropped
    with a warning."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".obj":
        verts, tris = _parse_obj(path)
    elif suffix == ".ply":
        verts, tris = _parse_ply(path)
    else:
        raise MeshFormatError(f"unsupported mesh extension {suffix!r}")
    if not verts:
        raise MeshFormatError(f"{path}: mesh has no vertices")
    if not tris:
        raise MeshFormatError(f"{path}: mesh has no faces")
    v = np.asarray(verts, dtype=np.float64)
    t = np.asarray(tris, dtype=np.int64)
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    bad = np.nonzero(areas <= 1e-14)[0]
    if bad.size:
        warnings.warn(
            f"{path}: dropped {bad.size} degenerate triangle(s): "
            f"{bad.tolist()[:8]}",
            stacklevel=2,
        )
        t = np.delete(t, bad, axis=0)
        if len(t) == 0:
            raise MeshFormatError(f"{path}: all faces are degenerate")
    return TriangleMesh(v, t)


def _parse_obj(path: Path):
    verts, tris = [], []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            tag = fields[0]
            if tag == "v":
                if len(fields) < 4:
                    raise MeshFormatError(f"{path}:{lineno}: malformed vertex")
                try:
                    verts.append([float(x) for x in fields[1:4]])
                except ValueError:
                    raise MeshFormatError(
                        f"{path}:{lineno}: non-numeric vertex coordinate"
                    ) from None
            elif tag == "f":
                if len(fields) < 4:
                    raise MeshFormatError(f"{path}:{lineno}: face needs >= 3 indices")
                idx = []
                for fld in fields[1:]:
                    head = fld.split("/")[0]
                    try:
                        i = int(head)
                    except ValueError:
                        raise MeshFormatError(
                            f"{path}:{lineno}: non-integer face index {head!r}"
                        ) from None
                    if i < 1:
                        raise MeshFormatError(
                            f"{path}:{lineno}: face index must be >= 1 (got {i})"
                        )
                    idx.append(i - 1)
                for k in range(1, len(idx) - 1):
                    tris.append([idx[0], idx[k], idx[k + 1]])
    for tri in tris:
        if max(tri) >= len(verts):
            raise MeshFormatError(f"{path}: face index {max(tri) + 1} exceeds vertex count")
    return verts, tris


def _parse_ply(path: Path):
    with open(path, "r") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0].strip() != "ply":
        raise MeshFormatError(f"{path}: missing ply header")
    n_verts = n_faces = None
    vert_props: list[str] = []
    in_vertex_element = False
    cursor = 1
    for cursor in range(1, len(lines)):
        fields = lines[cursor].split()
        if not fields:
            continue
        if fields[0] == "format":
            if fields[1] != "ascii":
                raise MeshFormatError(f"{path}: only ascii ply is supported")
        elif fields[0] == "element":
            in_vertex_element = fields[1] == "vertex"
            if fields[1] == "vertex":
                n_verts = int(fields[2])
            elif fields[1] == "face":
                n_faces = int(fields[2])
        elif fields[0] == "property" and in_vertex_element:
            vert_props.append(fields[-1])
        elif fields[0] == "end_header":
            break
    else:
        raise MeshFormatError(f"{path}: unterminated ply header")
    if n_verts is None or n_faces is None:
        raise MeshFormatError(f"{path}: ply header lacks vertex/face elements")
    try:
        ix, iy, iz = (vert_props.index(k) for k in ("x", "y", "z"))
    except ValueError:
        raise MeshFormatError(f"{path}: ply vertices lack x/y/z properties") from None
    body = lines[cursor + 1 :]
    if len(body) < n_verts + n_faces:
        raise MeshFormatError(f"{path}: truncated ply body")
    verts = []
    for lineno, line in enumerate(body[:n_verts], cursor + 2):
        fields = line.split()
        try:
            verts.append([float(fields[ix]), float(fields[iy]), float(fields[iz])])
        except (ValueError, IndexError):
            raise MeshFormatError(f"{path}:{lineno}: malformed ply vertex") from None
    tris = []
    for lineno, line in enumerate(body[n_verts : n_verts + n_faces], cursor + 2 + n_verts):
        fields = line.split()
        try:
            count = int(fields[0])
            idx = [int(x) for x in fields[1 : 1 + count]]
        except (ValueError, IndexError):
            raise MeshFormatError(f"{path}:{lineno}: malformed ply face") from None
        if len(idx) != count or count < 3:
            raise MeshFormatError(f"{path}:{lineno}: malformed ply face list")
        if min(idx) < 0 or max(idx) >= n_verts:
            raise MeshFormatError(f"{path}:{lineno}: ply face index out of range")
        for k in range(1, count - 1):
            tris.append([idx[0], idx[k], idx[k + 1]])
    return verts, tris


def save_mesh(mesh: TriangleMesh, path) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".obj":
        with open(path, "w") as fh:
            for v in mesh.vertices:
                fh.write(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}\n")
            for t in mesh.triangles:
                fh.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
    elif suffix == ".ply":
        with open(path, "w") as fh:
            fh.write("ply\nformat ascii 1.0\n")
            fh.write(f"element vertex {len(mesh.vertices)}\n")
            fh.write("property double x\nproperty double y\nproperty double z\n")
            fh.write(f"element face {len(mesh.triangles)}\n")
            fh.write("property list uchar int vertex_indices\nend_header\n")
            for v in mesh.vertices:
                fh.write(f"{_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}\n")
            for t in mesh.triangles:
                fh.write(f"3 {t[0]} {t[1]} {t[2]}\n")
    else:
        raise MeshFormatError(f"unsupported mesh extension {suffix!r}")


# ---------------------------------------------------------------------------
# Point clouds: whitespace text, x y z [nx ny nz] [object_id]

def load_cloud(path) -> PointCloud:
    path = Path(path)
    pts, normals, ids = [], [], []
    ncols = None
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if ncols is None:
                ncols = len(fields)
                if ncols not in (3, 4, 6, 7):
                    raise CloudFormatError(
                        f"{path}:{lineno}: expected 3, 4, 6 or 7 columns, got {ncols}"
                    )
            elif len(fields) != ncols:
                raise CloudFormatError(
                    f"{path}:{lineno}: inconsistent column count"
                )
            try:
                vals = [float(x) for x in fields]
            except ValueError:
                raise CloudFormatError(f"{path}:{lineno}: non-numeric value") from None
            pts.append(vals[:3])
            if ncols in (6, 7):
                normals.append(vals[3:6])
            if ncols in (4, 7):
                ids.append(int(vals[-1]))
    pts_arr = np.asarray(pts, dtype=np.float64).reshape(-1, 3)
    return PointCloud(
        pts_arr,
        normals=np.asarray(normals) if normals else None,
        object_ids=np.asarray(ids, dtype=np.int64) if ids else None,
    )


def save_cloud(cloud: PointCloud, path) -> None:
    with open(path, "w") as fh:
        for i in range(len(cloud)):
            cols = [_fmt(v) for v in cloud.points[i]]
            if cloud.normals is not None:
                cols += [_fmt(v) for v in cloud.normals[i]]
            if cloud.object_ids is not None:
                cols.append(str(int(cloud.object_ids[i])))
            fh.write(" ".join(cols) + "\n")


# ---------------------------------------------------------------------------
# Grasp label sets: JSON (debug) and packed binary

def _label_header(labels: GraspLabelSet) -> dict:
    return {
        "format": "graspbench-labels",
        "version": FORMAT_VERSION,
        "object_id": labels.object_id,
        "points": labels.n_points,
        "views": labels.views,
        "angles": list(labels.angles),
        "depths": list(labels.depths),
        "mu_values": list(labels.mu_values),
        "gripper_hash": labels.gripper_hash,
    }


def _labels_from_header(header: dict, arrays: dict) -> GraspLabelSet:
    return GraspLabelSet(
        object_id=int(header["object_id"]),
        grasp_points=arrays["grasp_points"],
        grasp_normals=arrays["grasp_normals"],
        views=int(header["views"]),
        angles=tuple(header["angles"]),
        depths=tuple(header["depths"]),
        mu_values=tuple(header["mu_values"]),
        score_index=arrays["score_index"],
        widths=arrays["widths"],
        flags=arrays["flags"],
        gripper_hash=header.get("gripper_hash", ""),
    )


_ARRAY_ORDER = ("grasp_points", "grasp_normals", "score_index", "widths", "flags")
_DTYPE_CODES = {np.dtype("uint8"): 0, np.dtype("float32"): 1}
_CODE_DTYPES = {0: np.dtype("uint8"), 1: np.dtype("<f4")}


def save_labels(labels: GraspLabelSet, path, fmt: str = "binary") -> None:
    """Persist a label set; `fmt` is "binary" (packed) or "json" (debug)."""
    path = Path(path)
    header = _label_header(labels)
    arrays = {
        "grasp_points": labels.grasp_points,
        "grasp_normals": labels.grasp_normals,
        "score_index": labels.score_index,
        "widths": labels.widths,
        "flags": labels.flags,
    }
    if fmt == "json":
        payload = dict(header)
        payload["arrays"] = {
            k: {"dtype": str(v.dtype), "shape": list(v.shape), "data": v.reshape(-1).tolist()}
            for k, v in arrays.items()
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    elif fmt == "binary":
        header_bytes = json.dumps(header, sort_keys=True).encode()
        # pad the header and each array prefix to 4-byte boundaries so
        # float32 payloads can be mapped directly by other runtimes
        header_bytes += b" " * (-len(header_bytes) % 4)
        with open(path, "wb") as fh:
            fh.write(_LABEL_MAGIC)
            fh.write(struct.pack("<I", len(header_bytes)))
            fh.write(header_bytes)
            offset = 8 + len(header_bytes)
            for name in _ARRAY_ORDER:
                arr = np.ascontiguousarray(arrays[name])
                code = _DTYPE_CODES[arr.dtype]
                fh.write(struct.pack("<BB", code, arr.ndim))
                fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
                offset += 2 + 4 * arr.ndim
                pad = -offset % 4
                fh.write(b"\x00" * pad)
                offset += pad
                if arr.dtype == np.float32:
                    fh.write(arr.astype("<f4").tobytes())
                else:
                    fh.write(arr.tobytes())
                offset += arr.nbytes
    else:
        raise ValueError(f"unknown label format {fmt!r}")


def load_labels(path) -> GraspLabelSet:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == _LABEL_MAGIC:
        return _load_labels_binary(path)
    return _load_labels_json(path)


def _load_labels_json(path: Path) -> GraspLabelSet:
    try:
        with open(path, "r") as fh:
            payload = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise LabelFormatError(f"{path}: not a label file ({exc})") from None
    if payload.get("format") != "graspbench-labels":
        raise LabelFormatError(f"{path}: not a graspbench label file")
    _check_version(payload.get("version", "?"), LabelFormatError)
    arrays = {}
    for name in _ARRAY_ORDER:
        spec = payload["arrays"].get(name)
        if spec is None:
            raise LabelFormatError(f"{path}: missing array {name!r}")
        arr = np.asarray(spec["data"], dtype=np.dtype(spec["dtype"]))
        arrays[name] = arr.reshape(spec["shape"])
    try:
        return _labels_from_header(payload, arrays)
    except ValueError as exc:
        raise LabelFormatError(f"{path}: {exc}") from None


def _load_labels_binary(path: Path) -> GraspLabelSet:
    data = Path(path).read_bytes()
    if data[:4] != _LABEL_MAGIC:
        raise LabelFormatError(f"{path}: bad magic")
    offset = 4

    def take(n: int) -> bytes:
        nonlocal offset
        if offset + n > len(data):
            raise LabelFormatError(f"{path}: truncated file")
        chunk = data[offset : offset + n]
        offset += n
        return chunk

    (header_len,) = struct.unpack("<I", take(4))
    try:
        header = json.loads(take(header_len))
    except json.JSONDecodeError:
        raise LabelFormatError(f"{path}: corrupt header") from None
    if header.get("format") != "graspbench-labels":
        raise LabelFormatError(f"{path}: not a graspbench label file")
    _check_version(header.get("version", "?"), LabelFormatError)
    arrays = {}
    for name in _ARRAY_ORDER:
        code, ndim = struct.unpack("<BB", take(2))
        if code not in _CODE_DTYPES:
            raise LabelFormatError(f"{path}: unknown dtype code {code}")
        shape = struct.unpack(f"<{ndim}I", take(4 * ndim))
        take(-offset % 4)  # alignment padding
        dtype = _CODE_DTYPES[code]
        nbytes = int(np.prod(shape)) * dtype.itemsize if ndim else dtype.itemsize
        arrays[name] = np.frombuffer(take(nbytes), dtype=dtype).reshape(shape).copy()
    if offset != len(data):
        raise LabelFormatError(f"{path}: trailing bytes after arrays")
    try:
        return _labels_from_header(header, arrays)
    except ValueError as exc:
        raise LabelFormatError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Scenes

def _transform_to_json(t: RigidTransform) -> dict:
    return {
        "rotation": [float(x) for x in t.rotation.reshape(-1)],
        "translation": [float(x) for x in t.translation],
    }


def _transform_from_json(data: dict, path, context: str) -> RigidTransform:
    try:
        rot = np.asarray(data["rotation"], dtype=np.float64).reshape(3, 3)
        tr = np.asarray(data["translation"], dtype=np.float64)
        return RigidTransform(rot, tr)
    except (KeyError, ValueError) as exc:
        raise SceneFormatError(f"{path}: bad {context}: {exc}") from None


def save_scene(scene: Scene, path, cloud_filename: Optional[str] = None) -> None:
    """Write the scene JSON plus its referenced fused-cloud file."""
    path = Path(path)
    if cloud_filename is None:
        cloud_filename = path.stem + "_cloud.txt"
    save_cloud(scene.scene_cloud, path.parent / cloud_filename)
    payload = {
        "format": "graspbench-scene",
        "version": FORMAT_VERSION,
        "split": scene.split_tag,
        "cloud_file": cloud_filename,
        "instances": [
            {"object_id": inst.object_id, **_transform_to_json(inst.pose)}
            for inst in scene.instances
        ],
        "cameras": [_transform_to_json(t) for t in scene.camera_poses],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_scene(path) -> Scene:
    path = Path(path)
    try:
        with open(path, "r") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"{path}: invalid JSON ({exc})") from None
    if payload.get("format") != "graspbench-scene":
        raise SceneFormatError(f"{path}: not a graspbench scene file")
    _check_version(payload.get("version", "?"), SceneFormatError)
    cloud_file = path.parent / payload["cloud_file"]
    if not cloud_file.exists():
        raise SceneFormatError(f"{path}: missing cloud file {payload['cloud_file']!r}")
    cloud = load_cloud(cloud_file)
    instances = tuple(
        ObjectInstance(
            int(item["object_id"]), _transform_from_json(item, path, "instance pose")
        )
        for item in payload.get("instances", [])
    )
    cameras = tuple(
        _transform_from_json(item, path, "camera pose")
        for item in payload.get("cameras", [])
    )
    try:
        return Scene(
            instances=instances,
            camera_poses=cameras,
            scene_cloud=cloud,
            split_tag=payload.get("split", "train"),
        )
    except ValueError as exc:
        raise SceneFormatError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Predictions: JSON records or 14-column CSV

def _grasp_to_record(g: GraspPose) -> dict:
    rec = {
        "rotation": [float(x) for x in g.rotation.reshape(-1)],
        "translation": [float(x) for x in g.center],
        "width": g.width,
        "confidence": g.confidence,
    }
    if g.object_id is not None:
        rec["object_id"] = g.object_id
    if g.score:
        rec["score"] = g.score
    if g.depth:
        rec["depth"] = g.depth
    return rec


def _grasp_from_fields(rot9, tr3, width, confidence, index, path, extra=None) -> GraspPose:
    try:
        rotation = check_rotation(np.asarray(rot9, dtype=np.float64).reshape(3, 3))
    except ValueError as exc:
        raise PredictionFormatError(f"{path}: record {index}: {exc}") from None
    extra = extra or {}
    return GraspPose(
        rotation=rotation,
        center=np.asarray(tr3, dtype=np.float64),
        width=float(width),
        confidence=float(confidence),
        score=float(extra.get("score", 0.0)),
        depth=float(extra.get("depth", 0.0)),
        object_id=extra.get("object_id"),
    )


def load_predictions(path) -> list:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_predictions_csv(path)
    try:
        with open(path, "r") as fh:
            records = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PredictionFormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(records, list):
        raise PredictionFormatError(f"{path}: expected a JSON array of records")
    out = []
    for i, rec in enumerate(records):
        try:
            rot = rec["rotation"]
            tr = rec["translation"]
            width = rec["width"]
            conf = rec["confidence"]
        except (KeyError, TypeError):
            raise PredictionFormatError(
                f"{path}: record {i}: missing rotation/translation/width/confidence"
            ) from None
        out.append(_grasp_from_fields(rot, tr, width, conf, i, path, rec))
    return out


def _load_predictions_csv(path: Path) -> list:
    out = []
    with open(path, "r", newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            if i == 0 and any(not _is_number(x) for x in row):
                continue  # header row
            if len(row) != 14:
                raise PredictionFormatError(
                    f"{path}: row {i}: expected 14 columns, got {len(row)}"
                )
            vals = [float(x) for x in row]
            out.append(
                _grasp_from_fields(vals[:9], vals[9:12], vals[12], vals[13], i, path)
            )
    return out


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def save_predictions(grasps, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for g in grasps:
                writer.writerow(
                    [_fmt(x) for x in g.rotation.reshape(-1)]
                    + [_fmt(x) for x in g.center]
                    + [_fmt(g.width), _fmt(g.confidence)]
                )
    else:
        with open(path, "w") as fh:
            json.dump([_grasp_to_record(g) for g in grasps], fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# Gripper profiles, reports, manifests

def load_gripper(path) -> GripperModel:
    path = Path(path)
    try:
        with open(path, "r") as fh:
            data = json.load(fh)
        return GripperModel.from_dict(data)
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: invalid gripper profile ({exc})") from None


def save_gripper(model: GripperModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_report(report: EvalReport, path) -> None:
    payload = {
        "format": "graspbench-report",
        "version": FORMAT_VERSION,
        **report.to_dict(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report(path) -> EvalReport:
    path = Path(path)
    try:
        with open(path, "r") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None
    if payload.get("format") != "graspbench-report":
        raise DataError(f"{path}: not a graspbench report file")
    _check_version(payload.get("version", "?"), DataError)
    return EvalReport.from_dict(payload)


@dataclass
class Manifest:
    """Registry of object meshes, label files, scenes and the gripper profile."""

    root: Path
    objects: dict  # id -> {"mesh": Path, "labels": Optional[Path]}
    scenes: dict  # name -> Path
    gripper_profile: Optional[Path] = None
    version: str = FORMAT_VERSION

    def mesh_path(self, object_id: int) -> Path:
        entry = self.objects.get(object_id)
        if entry is None or entry.get("mesh") is None:
            raise ManifestError(f"object {object_id} has no mesh in manifest")
        return entry["mesh"]

    def labels_path(self, object_id: int) -> Path:
        entry = self.objects.get(object_id)
        if entry is None or entry.get("labels") is None:
            raise ManifestError(f"object {object_id} has no label file in manifest")
        return entry["labels"]


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        with open(path, "r") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from None
    if payload.get("format") != "graspbench-manifest":
        raise ManifestError(f"{path}: not a graspbench manifest")
    _check_version(payload.get("version", "?"), ManifestError)
    root = (path.parent / payload.get("catalog_root", ".")).resolve()

    def resolve(rel: str) -> Path:
        target = root / rel
        if not target.exists():
            raise ManifestError(f"{path}: referenced file {rel!r} does not exist")
        return target

    objects = {}
    for key, entry in payload.get("objects", {}).items():
        objects[int(key)] = {
            "mesh": resolve(entry["mesh"]) if entry.get("mesh") else None,
            "labels": resolve(entry["labels"]) if entry.get("labels") else None,
        }
    scenes = {name: resolve(rel) for name, rel in payload.get("scenes", {}).items()}
    gripper = (
        resolve(payload["gripper_profile"])
        if payload.get("gripper_profile")
        else None
    )
    return Manifest(
        root=root,
        objects=objects,
        scenes=scenes,
        gripper_profile=gripper,
        version=payload.get("version", FORMAT_VERSION),
    )


def save_manifest(manifest_payload: dict, path) -> None:
    payload = {
        "format": "graspbench-manifest",
        "version": FORMAT_VERSION,
        **manifest_payload,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
