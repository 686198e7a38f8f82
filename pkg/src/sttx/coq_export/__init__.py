"""Coq source text for checked theories."""

from .mangle import COQ_KEYWORDS, Mangler, legal, sanitize
from .render import (
    ARITH_NOTATIONS, Notation, Renderer, render_proof, render_term, render_theory, render_type,
)

__all__ = [
    "ARITH_NOTATIONS", "COQ_KEYWORDS", "Mangler", "Notation", "Renderer", "legal",
    "render_proof", "render_term", "render_theory", "render_type", "sanitize",
]
