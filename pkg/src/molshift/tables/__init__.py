"""Data tables shipped with the package (plain text, tab-separated)."""
