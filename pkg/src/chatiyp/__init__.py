"""ChatIYP: natural-language access to an IYP-style Internet infrastructure graph."""

__version__ = "0.1.0"
