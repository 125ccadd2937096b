"""Integration tests for dicke-sacs command runs."""
