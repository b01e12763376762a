"""
Command-line surface: record schemas and verb handlers.
"""
__version__ = "1.0.0"
