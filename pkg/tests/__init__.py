"""Test suite for Joint Mixreg."""
