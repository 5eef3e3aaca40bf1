"""Validates `ilc --format json` output of every subcommand against the shipped schema."""
import json
import subprocess
import sys

import jsonschema

ilc, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as f:
    schema = json.load(f)
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

OMEGA = r"(\x.x x)(\x.x x)"
CASES = [
    ["tree", "--sig", "001", "--depth", "8", OMEGA],
    ["tree", "--sig", "111", "--depth", "4", r"(\x.(x x) y)(\x.(x x) y)"],
    ["trace", "--sig", "111", OMEGA],
    ["trace", "--sig", "101", "--fuel", "20", r"(\x.x x x)(\x.x x x)"],
    ["trace", "--sig", "111", "--rules", "betas", r"(\x.x) ((\y.y) z)"],
    ["trace", "--sig", "001", "--rules", "bohm", r"(\x.\y.x) " + OMEGA],
    ["trace", "--sig", "111", "x"],
    ["dist", "--sig", "111", "x y", "x z"],
    ["order", "--op", "leq", "--sig", "111", "x bot", "x y"],
    ["order", "--op", "glb", "--sig", "011", r"\x.x y", r"\x.y x"],
    ["join", "--sig", "101", "--rules", "betas", r"(\x.x y)" + f"({OMEGA})", "--left", "2*", "--right", "e;1*"],
    ["dev", r"(\x.x)((\y.y) z)", "--redexes", "e;2"],
    ["dev", r"(\x.x)((\y.y) z)", "--redexes", "2", "--method", "paths"],
]

failures = 0
for args in CASES:
    proc = subprocess.run([ilc, "--format", "json", *args], capture_output=True, text=True)
    if proc.returncode not in (0, 2):
        print(f"FAIL exit {proc.returncode}: {args}\n{proc.stderr}")
        failures += 1
        continue
    try:
        validator.validate(json.loads(proc.stdout))
        print(f"ok   {' '.join(args)}")
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        print(f"FAIL {args}: {e}")
        failures += 1
sys.exit(1 if failures else 0)
