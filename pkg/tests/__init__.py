"""Test suite for HN Herald."""
