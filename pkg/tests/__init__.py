"""YMD test suite."""
