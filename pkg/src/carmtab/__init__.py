"""Tabulation of Carmichael numbers."""
