"""Test helpers: fluent builders and numerical assertions."""
