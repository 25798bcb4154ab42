"""Reading probing-task dataset files (JSON Lines with a manifest first line).

Record layout per the dataset file contract:
    {"iid": u64, "sid": u64, "task": str, "label": int,
     "split": "train"|"test", "text": str, "focus": [start, end] | null}
preceded by one manifest line {"manifest": true, ...}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes | str) -> int:
    """64-bit FNV-1a; used to bind CPEB files to their dataset manifest."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class TaskInstance:
    instance_id: int
    text: str
    label: int
    focus_span: tuple[int, int] | None


@dataclass
class TaskFile:
    task: str
    instances: list[TaskInstance]
    manifest_line: str

    @property
    def manifest_hash(self) -> int:
        return fnv1a64(self.manifest_line)


def read_task_file(path: str | Path) -> TaskFile:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        try:
            manifest = json.loads(first)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: missing manifest line: {e}") from e
        if not manifest.get("manifest"):
            raise ValueError(f"{path}: first line is not a manifest")
        instances: list[TaskInstance] = []
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            rec = json.loads(line)
            focus = rec.get("focus")
            instances.append(
                TaskInstance(
                    instance_id=rec["iid"],
                    text=rec["text"],
                    label=rec["label"],
                    focus_span=tuple(focus) if focus else None,
                )
            )
    if len(instances) != manifest["count"]:
        raise ValueError(
            f"{path}: manifest count {manifest['count']} != {len(instances)} instances"
        )
    return TaskFile(task=manifest["task"], instances=instances, manifest_line=first)
