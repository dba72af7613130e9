"""Command package."""
