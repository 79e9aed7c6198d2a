"""Runs the CLI over a set of commands and validates each JSON report against the schema."""
import json
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["eval", "--q", "0.5", "--x", "0,5", "--fn", "theta"],
    ["eval", "--q", "0.5", "--x", "0,5", "--fn", "theta-star"],
    ["eval", "--q", "0.5", "--x", "3", "--fn", "G"],
    ["eval", "--q", "0.5", "--x", "0,5", "--fn", "jet"],
    ["eval", "--q", "0.99", "--x", "-40,7", "--fn", "identities"],
    ["eval", "--eps", "0.5", "--x", "1,1", "--fn", "katsnelson"],
    ["zeros", "--q", "0.4"],
    ["zeros", "--q", "0.2", "--mode", "real", "--count", "3"],
    ["zeros", "--q", "0.6", "--mode", "pairs"],
    ["spectrum", "--from", "1", "--to", "3"],
    ["spectrum", "--imaginary", "6", "--v-lo", "0.2"],
    ["verify", "--theorem", "T1", "--q-grid", "0.7:0.71:0.01"],
    ["verify", "--theorem", "T2b", "--q-grid", "0.3:0.31:0.01"],
    ["verify", "--theorem", "T3", "--q-grid", "0.7:0.71:0.01", "--inventory"],
    ["verify", "--check", "propmain", "--q-grid", "0.5:0.52:0.01"],
    ["verify", "--check", "bounds", "--q-grid", "0.5:0.52:0.01"],
    ["verify", "--check", "arc", "--q", "0.5"],
    ["verify", "--check", "circle", "--q", "0.63", "--half-power", "7.5"],
    ["verify", "--check", "circle", "--q", "0.2", "--x0", "-16.2301242918553884"],
    ["verify", "--check", "c1", "--q", "0.4"],
    ["verify", "--check", "tau"],
    ["verify", "--check", "spectral-disk"],
    ["constants"],
]


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    # The schema must reject an incomplete report.
    if validator.is_valid({"command": "eval", "fn": "theta"}):
        print("FAIL schema accepts an incomplete report")
        failures += 1
    for args in COMMANDS:
        proc = subprocess.run([binary, *args], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode not in (0, 1):
            print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        if errors:
            print(f"FAIL {label}: {errors[0].message}")
            failures += 1
        else:
            print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
