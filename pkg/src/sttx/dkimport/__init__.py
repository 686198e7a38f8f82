"""Reading and writing theories in the shallow Dedukti encoding."""

from .decode import (
    DecodedTheory, DecodeError, DecodeUnsound, Decoder, EntryDecodeError, NonPrenex,
    NotAProofEncoding, NotATermEncoding, NotATypeEncoding, decode_entries, decode_proof,
    decode_term, decode_type, load_sdk,
)
from .encode import Encoder, encode, encode_proof, encode_prop, encode_type
from .lf import LfTypeError, check_entries, proof_type_matches
from .syntax import (
    Declaration, Definition, DkApp, DkLam, DkPi, DkSym, DkSyntaxError, DkVar, dk_alpha_eq,
    parse_dk, parse_term, show_dk, show_entries, show_entry,
)

SyntaxError = DkSyntaxError  # noqa: A001 - the name the public interface promises

__all__ = [
    "DecodedTheory", "DecodeError", "DecodeUnsound", "Decoder", "Declaration", "Definition",
    "DkApp", "DkLam", "DkPi", "DkSym", "DkSyntaxError", "DkVar", "Encoder",
    "EntryDecodeError", "LfTypeError", "NonPrenex", "NotAProofEncoding", "NotATermEncoding",
    "NotATypeEncoding", "SyntaxError", "check_entries", "decode_entries", "decode_proof",
    "decode_term", "decode_type", "dk_alpha_eq", "encode", "encode_proof", "encode_prop",
    "encode_type", "load_sdk", "parse_dk", "parse_term", "proof_type_matches", "show_dk",
    "show_entries", "show_entry",
]
