"""Tests for HN Herald data models."""
