"""Tests for campana-cli."""
