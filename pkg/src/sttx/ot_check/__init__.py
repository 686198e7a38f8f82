"""Independent OpenTheory article checker."""

from .kernel import RULES, RuleError, Thm, aconv, alpha_key, kernel_rule
from .vm import (
    ArticleError, ArticleResult, DanglingDictionaryRef, ParseError, StackUnderflow,
    TypeErrorInRule, UnknownCommand, VmState, run_article,
)
