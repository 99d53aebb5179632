"""Validates every JSON artifact of the CLI against its schema."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

cli = sys.argv[1]
schemas = Path(sys.argv[2])
runs = {
    "pt": ["pt", "6"],
    "semiclassical": ["semiclassical", "3", "--g2", "2", "--x", "0,1"],
    "solve": ["solve", "--g2", "1", "--state", "1,0"],
    "mesh": ["mesh", "--g2", "3"],
    "radial": ["radial", "--g2", "1", "--dim", "2"],
    "table1": ["table1"],
    "verify": ["verify", "--criteria", "1,8"],
}
for name, args in runs.items():
    out = subprocess.run([cli, *args, "--format", "json"], capture_output=True, text=True, check=True).stdout
    schema = json.loads((schemas / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.validate(json.loads(out), schema, cls=jsonschema.Draft202012Validator)
    print(f"{name}: valid")
