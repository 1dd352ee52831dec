#!/usr/bin/env python3
"""Validates dashboard messages against docs/snapshot.schema.json.

usage: validate_schema.py SCHEMA SAMPLES_BINARY [GOLDEN...]
"""
import copy
import json
import subprocess
import sys

from jsonschema import Draft202012Validator

KINDS = {"ribbon", "panel", "frustum", "box", "arrow", "circles", "square",
         "skeleton", "head", "event"}


def validator_for(schema, name):
    sub = dict(schema)
    sub["$ref"] = f"#/$defs/{name}"
    return Draft202012Validator(sub)


def main():
    schema_path, samples_bin, *goldens = sys.argv[1:]
    with open(schema_path) as f:
        schema = json.load(f)
    Draft202012Validator.check_schema(schema)
    validators = {n: validator_for(schema, n) for n in ("snapshot", "history", "error")}

    out = subprocess.run([samples_bin], check=True, capture_output=True, text=True).stdout
    docs = [json.loads(line) for line in out.splitlines() if line]
    for g in goldens:
        with open(g) as f:
            docs.append(json.load(f))

    failures = 0
    seen_kinds, seen_types = set(), set()
    for i, doc in enumerate(docs):
        kind = doc.get("type", "snapshot")
        seen_types.add(kind)
        errors = list(validators[kind].iter_errors(doc))
        if errors:
            failures += 1
            print(f"doc {i} ({kind}): {errors[0].message} at {list(errors[0].absolute_path)}")
        if kind == "snapshot":
            seen_kinds.update(p["kind"] for p in doc["primitives"])

    missing = KINDS - seen_kinds
    if missing:
        failures += 1
        print(f"primitive kinds never produced: {sorted(missing)}")
    if seen_types != {"snapshot", "history", "error"}:
        failures += 1
        print(f"message types seen: {sorted(seen_types)}")

    # The schema has to reject broken documents too.
    snap = next(d for d in docs if "type" not in d and d["primitives"])
    broken = []
    b = copy.deepcopy(snap); b["primitives"][0]["kind"] = "teapot"; broken.append(b)
    b = copy.deepcopy(snap); del b["visitors"]; broken.append(b)
    b = copy.deepcopy(snap); b["visitors"][0]["color"] = [1, 0, 0]; broken.append(b)
    b = copy.deepcopy(snap); b["primitives"][0]["extra"] = 1; broken.append(b)
    b = copy.deepcopy(snap); b["t"] = -1; broken.append(b)
    for j, b in enumerate(broken):
        if validators["snapshot"].is_valid(b):
            failures += 1
            print(f"mutation {j} was accepted")

    print(f"{len(docs)} documents, kinds {sorted(seen_kinds)}, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
