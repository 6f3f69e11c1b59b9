"""Proactive MANET routing simulator."""
