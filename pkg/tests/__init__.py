"""Test suite for the universe model toolkit."""
