"""Test fixtures and data for Joint Mixreg."""
