#!/usr/bin/env python3
"""Regenerate the bundled suite configs from the in-code grid definitions.

Run from the repo root after changing netsil.harness grids:

    python3 tools/write_builtin_configs.py
"""

import os

from netsil.harness import builtin_suites, save_suite

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "netsil", "configs")


def main() -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    for name, specs in builtin_suites().items():
        path = os.path.join(OUT_DIR, f"{name}.json")
        save_suite(specs, path)
        print(f"wrote {len(specs):4d} scenarios -> {os.path.relpath(path)}")


if __name__ == "__main__":
    main()
