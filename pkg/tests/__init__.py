"""Test suite for dicke-sacs."""
