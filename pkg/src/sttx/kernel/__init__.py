"""Type checking and proof checking for STT∀βδ."""

from .errors import (
    ArityError, ConvFailed, HypNotFound, IllFormedSignature, KernelError, NotAFunction,
    NotAProposition, RuleMismatch, SideConditionViolated, TypeMismatch, UnboundConstant,
    UnboundVariable,
)
from .proofs import (
    Assume, Conv, ForallElim, ForallIntro, ImpElim, ImpIntro, ProofTerm, Ref, Theorem,
    TyForallElim, TyForallIntro, check_proof, find_hyp, synth,
)
from .theory import EntryError, check_entry, check_signature, wf_signature
from .typing import (
    check_context, check_definition, check_monotype, check_polytype, check_prop, infer_mono,
    infer_type, wf_monotype, wf_polytype,
)
