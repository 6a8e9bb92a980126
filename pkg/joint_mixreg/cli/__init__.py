"""Command-line interface for Joint Mixreg."""
