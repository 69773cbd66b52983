import re
import sys
import tomllib
from pathlib import Path

PARTS = ("major", "minor", "patch")
TARGETS = {
    Path("pyproject.toml"): r'^version\s*=\s*"[0-9]+\.[0-9]+\.[0-9]+"',
    Path("Shimura/__init__.py"): r'^__version__\s*=\s*"[0-9]+\.[0-9]+\.[0-9]+"',
}


def bump_version(version: str, part: str) -> str:
    if part not in PARTS:
        raise ValueError(f"Unknown part to bump: {part}")
    numbers = list(map(int, version.split(".")))
    index = PARTS.index(part)
    numbers[index] += 1
    numbers[index + 1:] = [0] * (len(PARTS) - index - 1)
    return ".".join(map(str, numbers))


def rewrite(path: Path, pattern: str, new_version: str):
    content = path.read_text()
    prefix = "__version__" if path.suffix == ".py" else "version"
    updated, count = re.subn(pattern, f'{prefix} = "{new_version}"', content, count=1, flags=re.MULTILINE)
    if not count:
        raise SystemExit(f"Error: no version line in {path}")
    path.write_text(updated)
    print(f"{path}: {new_version}")


def main(part: str = "patch"):
    missing = [str(p) for p in TARGETS if not p.exists()]
    if missing:
        raise SystemExit(f"Error: {', '.join(missing)} not found; run from the repository root.")
    current = tomllib.loads(Path("pyproject.toml").read_text())["project"]["version"]
    new_version = bump_version(current, part)
    for path, pattern in TARGETS.items():
        rewrite(path, pattern, new_version)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "patch")
