#!/usr/bin/env python3
"""
Linting script for leibniz-hnn: black, isort, flake8 and mypy.
"""

import argparse
import subprocess
import sys
from pathlib import Path
from typing import List, Optional

SOURCE_DIRS = ["app", "core", "services", "infra", "tests"]


def run_command(cmd: List[str], description: str) -> bool:
    """Run a command and return success status."""
    print(f"\n{'=' * 60}")
    print(f"Running: {description}")
    print(f"Command: {' '.join(cmd)}")
    print(f"{'=' * 60}")

    try:
        subprocess.run(cmd, check=True)
        return True
    except subprocess.CalledProcessError as e:
        print(f"{description} failed with exit code {e.returncode}")
        return False


def run_black(files: Optional[List[str]] = None, check: bool = False) -> bool:
    cmd = ["black"] + (["--check"] if check else [])
    return run_command(cmd + (files or SOURCE_DIRS), "Black code formatting")


def run_isort(files: Optional[List[str]] = None, check: bool = False) -> bool:
    cmd = ["isort"] + (["--check-only"] if check else [])
    return run_command(cmd + (files or SOURCE_DIRS), "isort import sorting")


def run_flake8(files: Optional[List[str]] = None) -> bool:
    cmd = ["flake8", "--max-line-length", "88", "--extend-ignore", "E203"]
    return run_command(cmd + (files or SOURCE_DIRS), "Flake8 code linting")


def run_mypy(files: Optional[List[str]] = None) -> bool:
    return run_command(["mypy"] + (files or SOURCE_DIRS[:-1]), "MyPy type checking")


def main():
    parser = argparse.ArgumentParser(
        description="Run linting tools for leibniz-hnn",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run_lint.py --all                 # Run all linters
  python run_lint.py --black --check       # Check black formatting only
  python run_lint.py --files core/linalg.py
        """,
    )
    parser.add_argument("--all", action="store_true", help="Run all linting tools")
    parser.add_argument("--black", action="store_true", help="Run black code formatter")
    parser.add_argument("--isort", action="store_true", help="Run isort import sorter")
    parser.add_argument("--flake8", action="store_true", help="Run flake8 code linter")
    parser.add_argument("--mypy", action="store_true", help="Run mypy type checker")
    parser.add_argument(
        "--check",
        action="store_true",
        help="Check formatting without making changes (for black and isort)",
    )
    parser.add_argument(
        "--files", nargs="+", help="Specific files or directories to lint"
    )
    args = parser.parse_args()

    if args.files:
        for file_path in args.files:
            if not Path(file_path).exists():
                print(f"Error: file or directory '{file_path}' does not exist")
                sys.exit(1)

    if not any([args.all, args.black, args.isort, args.flake8, args.mypy]):
        args.all = True

    success = True
    try:
        if args.all or args.black:
            success &= run_black(args.files, args.check)
        if args.all or args.isort:
            success &= run_isort(args.files, args.check)
        if args.all or args.flake8:
            success &= run_flake8(args.files)
        if args.all or args.mypy:
            success &= run_mypy(args.files)
    except KeyboardInterrupt:
        print("\nLinting interrupted by user")
        sys.exit(1)

    print(f"\n{'=' * 60}")
    if success:
        print("All linting tools completed successfully")
        sys.exit(0)
    print("Some linting tools failed. Please fix the issues above.")
    sys.exit(1)


if __name__ == "__main__":
    main()
