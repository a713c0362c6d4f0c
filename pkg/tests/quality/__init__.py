"""Code quality gate: linting, type checking and formatting."""
