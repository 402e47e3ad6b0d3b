#!/usr/bin/env python3
"""The whole pipeline on a throwaway git repository.

Builds a three-commit repo, runs harvest -> distill -> train -> classify
-> profile -> export with a trimmed grid, then queries the bundle server
the explorer frontend talks to.
"""

import json
import subprocess
import tempfile
import threading
import urllib.request
from pathlib import Path

from maintminer.cli import run_pipeline
from maintminer.server import serve_bundle

work = Path(tempfile.mkdtemp(prefix="maintminer-demo-"))
repo = work / "toy-repo"
repo.mkdir()
env = {
    "GIT_AUTHOR_NAME": "Demo Dev", "GIT_AUTHOR_EMAIL": "demo@example.org",
    "GIT_COMMITTER_NAME": "Demo Dev", "GIT_COMMITTER_EMAIL": "demo@example.org",
    "GIT_AUTHOR_DATE": "2016-03-01T12:00:00+00:00",
    "GIT_COMMITTER_DATE": "2016-03-01T12:00:00+00:00",
}


def git(*args):
    subprocess.run(["git", "-C", str(repo), *args], check=True, capture_output=True, env=env)


git("init", "-q", "-b", "master")
(repo / "Greeter.java").write_text(
    "public class Greeter {\n    public void greet() {\n        say(1);\n    }\n}\n"
)
git("add", "Greeter.java")
git("commit", "-q", "-m", "add greeter")
(repo / "Greeter.java").write_text(
    "public class Greeter {\n    public void greet() {\n        say(2);\n    }\n}\n"
)
git("add", "Greeter.java")
git("commit", "-q", "-m", "fix greeting count")
(repo / "Farewell.java").write_text(
    "public class Farewell {\n    public void part() {\n        wave();\n    }\n}\n"
)
git("add", "Farewell.java")
git("commit", "-q", "-m", "add farewell support")

out_dir = work / "out"
config = {
    "repos": [str(repo)],
    "out_dir": str(out_dir),
    "seed": 3,
    "window_days": 28,
    "grid": {"folds": 3, "repeats": 1, "hyperparameters": {"n_trees": 12, "rounds": 6}},
}
run_pipeline(config)
print("pipeline artifacts:")
for path in sorted(out_dir.rglob("*")):
    if path.is_file() and ".checkpoints" not in path.parts:
        print(f"  {path.relative_to(out_dir)}")

print("\nlegacy pound records:")
print((out_dir / "changes.txt").read_text().strip())

server = serve_bundle(out_dir / "bundle", 0)
port = server.server_address[1]
threading.Thread(target=server.serve_forever, daemon=True).start()
with urllib.request.urlopen(f"http://127.0.0.1:{port}/api/profiles?window=28") as resp:
    print("\nGET /api/profiles?window=28 ->")
    print(json.dumps(json.load(resp), indent=2))
server.shutdown()
server.server_close()
