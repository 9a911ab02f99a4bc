"""Tests for HN Herald services."""
