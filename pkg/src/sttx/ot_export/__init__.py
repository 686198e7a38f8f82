"""Export of kernel theorems as OpenTheory articles."""

from .article import ArticleWriter, write_article
from .conversion import (
    All, AppL, AppR, ImpL, ImpR, Lam, PathMismatch, TraceMismatch, TyAll, congruence,
    conv_to_eq, frames,
)
from .detype import FreshPoolExhausted, Proved
from .encode import (
    TEMPLATES, ExportError, FreshnessViolation, Naming, Translator, derive_rule, ot_tyvar_name,
)
from .hol import Deriv, Fresh, InternalDerivationError
from .prelude import Prelude
from .translate import ArticlePlan, Exported, Exporter, translate_theorem, translate_theory


def translate_type(ty, theory: str = "thy", sig=None):
    """The HOL image of a monotype: Prop as bool, functions as ``->``."""
    from ..core.signature import Signature

    return Translator(sig or Signature(), Naming(theory)).type(ty)


def emit_prelude(mode: str = "axiomatize") -> Prelude:
    return Prelude.emit(mode)
