"""
Integration tests for the affine TL engine.

These run the `tl` command line in process and check its output streams
and exit codes.
"""
