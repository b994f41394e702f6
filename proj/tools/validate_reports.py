#!/usr/bin/env python3
"""Runs every conric subcommand on the bundled inputs and validates each JSON
report against docs/report.schema.json."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

CASES = [
    (["solve", "example1.json", "--minimal"], 0),
    (["solve", "example1.txt"], 0),
    (["solve", "zero.json", "--minimal"], 0),
    (["solve", "scaled_identity_0.8.json"], 2),
    (["solve", "boundary_half.json", "--max-iter", "200"], 3),
    (["solve", "missing.json"], 1),
    (["check", "example1.json"], 0),
    (["check", "scaled_identity_0.8.json"], 2),
    (["bounds", "example1.json", "--depth", "3"], 0),
    (["bounds", "zero.json"], 0),
    (["bounds", "scaled_identity_0.8.json"], 2),
    (["trace", "example1.json", "--format", "json"], 0),
]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("binary")
    parser.add_argument("data_dir", type=pathlib.Path)
    parser.add_argument("schema", type=pathlib.Path)
    args = parser.parse_args()

    schema = json.loads(args.schema.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, (cmd, want) in enumerate(CASES):
            out = pathlib.Path(tmp) / f"report{i}.json"
            argv = [args.binary, cmd[0], str(args.data_dir / cmd[1]), *cmd[2:], "--out", str(out)]
            code = subprocess.run(argv, capture_output=True).returncode
            label = " ".join(cmd)
            if code != want:
                print(f"FAIL {label}: exit {code}, expected {want}")
                failures += 1
                continue
            report = json.loads(out.read_text())
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            if report["status"]["exit_code"] != code:
                errors.append(jsonschema.ValidationError("status.exit_code differs from exit"))
            for e in errors:
                print(f"FAIL {label}: {'/'.join(map(str, e.path))}: {e.message}")
            failures += bool(errors)
            if not errors:
                print(f"ok   {label}")
    print(f"{failures} of {len(CASES)} reports failed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
