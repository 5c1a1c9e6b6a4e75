"""Integration tests for campana-cli."""
