"""stitkit: a workbench for multi-agent STIT logics."""

from .syntax import (
    And,
    Atom,
    Box,
    Cstit,
    Diamond,
    Dstit,
    Formula,
    Iff,
    Implies,
    LanguageTag,
    Not,
    Or,
    PosCstit,
    SyntaxError_,
    agents,
    atoms,
    expand_dstit,
    language_tag,
    length,
    parse,
    pretty,
    subformulas,
)

__version__ = "0.1.0"
