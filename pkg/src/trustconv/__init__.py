"""trustconv: nondirective trust prompt generation and a relational
conversational survey engine."""

__version__ = "0.1.0"
