"""Unit tests for Joint Mixreg."""
