"""Fixture loading, the check registry, open-question searches and the command line."""
