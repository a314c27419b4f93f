"""Developer entry points behind `uv run <command>`, listed by `uv run help`."""
import os
import subprocess
import sys
import tomllib
from pathlib import Path

import coloredlogs
import pytest
from fire import Fire

from core.config import CONFIG

PACKAGE_DIR = Path(__file__).resolve().parent


def _n_workers() -> str:
    return str(min(os.cpu_count() or 1, 4))


def _pytest(args: list[str]) -> None:
    coloredlogs.install(level="INFO")
    os.chdir(PACKAGE_DIR)
    sys.exit(pytest.main(args))


def _uv(*args: str) -> None:
    os.chdir(PACKAGE_DIR)
    sys.exit(subprocess.run(["uv", "run", *args]).returncode)


def _run_tests(dest=".", n_workers=_n_workers(), verbose=False, exclude: str | None = None, benchmarks=False):
    params = ["-vs" if verbose else "-v", "-n", str(n_workers), dest]
    if not benchmarks:
        params += ["-m", "not benchmark"]
    if exclude:
        params += ["-k", f"not {exclude}"]
    _pytest(params)


def run_tests():
    Fire(_run_tests)


def _run_benchmarks(k: str | None = None):
    if CONFIG.data_dir is None or not CONFIG.data_dir.is_dir():
        print("LINKEVAL_DATA_DIR must point at the directory holding fb237_v1 ... nell_v4")
        sys.exit(2)
    # single process: each test caches its datasets and learned rules
    params = ["-v", "-n", "0", "-m", "benchmark", "tests/test_benchmarks.py"]
    if k:
        params += ["-k", k]
    _pytest(params)


def run_benchmarks():
    Fire(_run_benchmarks)


def run_lint():
    _uv("ruff", "check", ".", "--fix")


def _changed_files() -> list[str]:
    result = subprocess.run(
        ["git", "diff", "--name-only", "main...HEAD"], cwd=PACKAGE_DIR, capture_output=True, text=True
    )
    if result.returncode != 0:
        return []
    prefix = f"{PACKAGE_DIR.name}/"
    return [
        line.removeprefix(prefix)
        for line in result.stdout.splitlines()
        if line.startswith(prefix) and line.endswith(".py")
    ]


def _run_format(dest=None):
    # without a target, only files changed against main
    targets = [dest] if dest else _changed_files() or ["."]
    _uv("ruff", "format", *targets)


def run_format():
    Fire(_run_format)


def type_check():
    _uv("pyright", ".")


def help_command():
    """Displays all available custom uv run commands with examples."""
    pyproject_path = PACKAGE_DIR / "pyproject.toml"
    try:
        with open(pyproject_path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        print(f"Error: pyproject.toml not found at expected location: {pyproject_path}")
        return

    scripts = data.get("project", {}).get("scripts", {})
    docs = data.get("tool", {}).get("linkeval", {}).get("command_docs", {})
    width = max((len(name) for name in scripts), default=len("Command")) + 2

    print("Available custom commands (run with 'uv run <command>'):\n")
    print(f"{'Command':<{width}} Description / Example")
    print(f"{'=' * width} {'=' * 40}")
    for name, target in sorted(scripts.items()):
        print(f"{name:<{width}} {docs.get(name) or f'uv run {name} (Target: {target})'}")
    print("\n`uv run linkeval <command> --help` lists the flags of every linkeval command.")
