"""Unit tests for dicke-sacs components."""
