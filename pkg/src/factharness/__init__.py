"""Evaluation harness for LLM-based fact-checking over three tasks:
claim/article relatedness, verdict judgment from a fact-check article, and
one-step tool-using fact-checking with external evidence."""

__version__ = "0.1.0"
