"""Integration tests package for HN Herald."""
