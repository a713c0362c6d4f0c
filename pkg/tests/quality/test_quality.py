#!/usr/bin/env python3
"""
Code quality gate for the affine TL engine.

Runs flake8, mypy, black and isort over the package and the tests, then
loads the bundled suites.json through the package's own validator. One
report per check is written under reports/quality/.

Usage:
    python tests/quality/test_quality.py
    python tests/quality/test_quality.py --fix
    python tests/quality/test_quality.py --output-dir reports/
"""

import argparse
import logging
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

# Configure logging
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


@dataclass
class ToolCheck:
    """One quality tool: its module, targets and check/fix flags."""

    title: str
    module: str
    targets: List[str]
    check_flags: List[str] = field(default_factory=list)
    fix_flags: Optional[List[str]] = None

    @property
    def can_fix(self) -> bool:
        return self.fix_flags is not None

    @property
    def report_name(self) -> str:
        return f"{self.module}_report.txt"


TOOLS = [
    ToolCheck(
        "Flake8 Linting",
        "flake8",
        ["src/", "tests/"],
        ["--format=%(path)s:%(row)d:%(col)d: %(code)s %(text)s"],
    ),
    ToolCheck("MyPy Type Checking", "mypy", ["src/"]),
    ToolCheck(
        "Black Formatting", "black", ["src/", "tests/"], ["--check", "--diff"], []
    ),
    ToolCheck(
        "isort Import Sorting",
        "isort",
        ["src/", "tests/"],
        ["--check-only", "--diff"],
        [],
    ),
]


# Validated in-process by affine_tl.suites.load_config
SUITES_CONFIG = Path("src") / "affine_tl" / "suites.json"


class QualityGate:
    """Runs the quality tools and the suite config check."""

    def __init__(
        self,
        project_root: Path,
        output_dir: Optional[Path] = None,
        fix_issues: bool = False,
    ):
        """
        Initialize the quality gate.

        Args:
            project_root: Path to the project root directory
            output_dir: Directory to save quality reports
            fix_issues: Whether black and isort rewrite files instead of checking
        """
        self.project_root = project_root
        self.output_dir = output_dir or (project_root / "reports" / "quality")
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.fix_issues = fix_issues

    def _write_report(
        self, tool: ToolCheck, result: subprocess.CompletedProcess
    ) -> Path:
        output_file = self.output_dir / tool.report_name
        with open(output_file, "w") as f:
            f.write(f"{tool.title} Report\n")
            f.write("=" * (len(tool.title) + 7) + "\n\n")
            f.write(f"Return code: {result.returncode}\n\n")
            f.write(f"STDOUT:\n{result.stdout}\n\n")
            f.write(f"STDERR:\n{result.stderr}\n")
        return output_file

    def run_tool(self, tool: ToolCheck) -> Tuple[bool, str]:
        """
        Run one tool over its targets.

        Args:
            tool: The tool to run

        Returns:
            Tuple of (success, output)
        """
        fixing = self.fix_issues and tool.can_fix
        logger.info(f"{'Fixing' if fixing else 'Checking'} with {tool.module}...")
        flags = (tool.fix_flags or []) if fixing else tool.check_flags
        args = [sys.executable, "-m", tool.module, *tool.targets, *flags]

        try:
            result = subprocess.run(
                args, capture_output=True, text=True, cwd=self.project_root
            )
        except Exception as e:
            logger.error(f"Error running {tool.module}: {e}")
            return False, str(e)

        report = self._write_report(tool, result)
        logger.info(f"{tool.module} report saved to: {report}")

        if result.returncode == 0:
            logger.info(f"{tool.title} passed")
            return True, result.stdout
        logger.warning(f"{tool.title} found issues")
        logger.warning(f"Issues:\n{result.stdout}")
        return False, result.stdout

    def check_suites_config(self) -> bool:
        """Validate the bundled suite configuration."""
        sys.path.insert(0, str(self.project_root / "src"))
        try:
            from affine_tl.suites import load_config

            config = load_config(str(self.project_root / SUITES_CONFIG))
        except Exception as e:
            logger.warning(f"{SUITES_CONFIG} is invalid: {e}")
            return False
        finally:
            sys.path.pop(0)
        names = ", ".join(spec.name for spec in config.suites)
        logger.info(f"{SUITES_CONFIG} defines: {names}")
        return True

    def run(self) -> bool:
        """
        Run every tool and the config check.

        Returns:
            True if all of them pass
        """
        logger.info("=" * 60)
        logger.info("RUNNING CODE QUALITY TESTS")
        logger.info("=" * 60)
        logger.info(f"Project root: {self.project_root}")
        logger.info(f"Output directory: {self.output_dir}")
        logger.info(f"Fix issues: {self.fix_issues}")

        results = [(tool.title, self.run_tool(tool)[0]) for tool in TOOLS]
        results.append(("Suite Configuration", self.check_suites_config()))

        logger.info("=" * 60)
        logger.info("CODE QUALITY TEST RESULTS")
        logger.info("=" * 60)
        for title, success in results:
            logger.info(f"{title:.<40} {'PASS' if success else 'FAIL'}")

        passed = sum(1 for _, success in results if success)
        logger.info("=" * 60)
        logger.info(f"OVERALL: {passed}/{len(results)} quality checks passed")
        return passed == len(results)


def main():
    """Main entry point for code quality testing."""
    parser = argparse.ArgumentParser(
        description="Run code quality tests for the affine TL engine"
    )
    parser.add_argument(
        "--project-root", type=Path, help="Path to project root directory"
    )
    parser.add_argument(
        "--output-dir", type=Path, help="Directory to save quality reports"
    )
    parser.add_argument(
        "--fix", action="store_true", help="Automatically fix issues when possible"
    )
    parser.add_argument(
        "--verbose",
        type=str,
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Set the verbosity level",
    )

    args = parser.parse_args()

    logging.basicConfig(
        level=getattr(logging, args.verbose),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )

    project_root = args.project_root or Path(__file__).parent.parent.parent

    try:
        success = QualityGate(project_root, args.output_dir, args.fix).run()
    except KeyboardInterrupt:
        logger.error("Code quality tests interrupted by user")
        sys.exit(1)
    except Exception as e:
        logger.error(f"Code quality test execution failed: {e}")
        sys.exit(1)

    if success:
        logger.info("All code quality tests passed!")
        sys.exit(0)
    logger.error("Some code quality tests failed!")
    sys.exit(1)


if __name__ == "__main__":
    main()
