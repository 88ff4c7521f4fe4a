"""Instance files: versioned JSON and ``color,x,y`` CSV."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import ValidationError
from .matching import Instance

FORMAT_VERSION = 1


class InstanceFormatError(ValidationError):
    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}")


def _number(value, where):
    if isinstance(value, bool):
        raise InstanceFormatError(where, "expected a number")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InstanceFormatError(where, f"cannot parse {value!r} as a number") from None


def instance_to_dict(instance: Instance, seed=None) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "reds": [[repr(p.x), repr(p.y)] for p in instance.reds],
        "blues": [[repr(p.x), repr(p.y)] for p in instance.blues],
    }
    if instance.name is not None:
        doc["name"] = instance.name
    if seed is not None:
        doc["seed"] = seed
    return doc


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("$", "top level must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise InstanceFormatError("version", f"unsupported version {doc.get('version')!r}")
    colours = {}
    for key in ("reds", "blues"):
        pts = doc.get(key)
        if not isinstance(pts, list):
            raise InstanceFormatError(key, "expected a list of [x, y] pairs")
        parsed = []
        for i, pt in enumerate(pts):
            if not isinstance(pt, (list, tuple)) or len(pt) != 2:
                raise InstanceFormatError(f"{key}[{i}]", "expected [x, y]")
            parsed.append((_number(pt[0], f"{key}[{i}][0]"), _number(pt[1], f"{key}[{i}][1]")))
        colours[key] = tuple(parsed)
    return Instance(colours["reds"], colours["blues"], name=doc.get("name"))


def parse_csv(text: str) -> Instance:
    reds, blues = [], []
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and row[0].strip().lower() == "color":
            continue
        if len(row) != 3:
            raise InstanceFormatError(f"line {lineno}", "expected three columns color,x,y")
        colour = row[0].strip().lower()
        pt = (_number(row[1].strip(), f"line {lineno} x"), _number(row[2].strip(), f"line {lineno} y"))
        if colour in ("red", "r"):
            reds.append(pt)
        elif colour in ("blue", "b"):
            blues.append(pt)
        else:
            raise InstanceFormatError(f"line {lineno}", f"unknown color {row[0]!r}")
    return Instance(tuple(reds), tuple(blues))


def read_instance(path) -> Instance:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return parse_csv(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return instance_from_dict(doc)


def write_instance(instance: Instance, path, seed=None) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        lines = ["color,x,y"]
        lines += [f"red,{p.x!r},{p.y!r}" for p in instance.reds]
        lines += [f"blue,{p.x!r},{p.y!r}" for p in instance.blues]
        path.write_text("\n".join(lines) + "\n")
    else:
        path.write_text(json.dumps(instance_to_dict(instance, seed), indent=2) + "\n")
