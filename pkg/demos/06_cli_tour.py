# Tour of the command line interface.  Every subcommand reads a margins
# file (JSON or two-line CSV, "-" for stdin) and prints versioned JSON.

import json
import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args):
    cmd = [sys.executable, "-m", "tablecount.cli", *args]
    print("$ tablecount", " ".join(args))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    stream = proc.stdout if proc.returncode == 0 else proc.stderr
    print(stream.strip()[:600])
    print()
    return proc


with tempfile.TemporaryDirectory() as tmp:
    margins = Path(tmp) / "tiny.json"
    margins.write_text(json.dumps({"rows": [1, 1], "cols": [1, 1]}))

    run("estimate", str(margins))
    run("exact", str(margins))
    run("check", str(margins), "--grid", "64", "--samples", "50000")
    run("scale", str(margins), "--alpha", "3")

    # errors come back as machine readable JSON on stderr
    proc = run("estimate", str(Path(tmp) / "missing.json"))
    print("exit code for missing file:", proc.returncode)
