"""Integration tests for Joint Mixreg."""
