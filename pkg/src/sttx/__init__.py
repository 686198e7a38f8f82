"""Simple type theory with prenex polymorphism and βδ conversion, with exporters."""

__version__ = "0.1.0"
