"""Unit tests for campana-cli."""
