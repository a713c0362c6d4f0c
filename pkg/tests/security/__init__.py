"""Security gate: static analysis with bandit and dependency scanning."""
