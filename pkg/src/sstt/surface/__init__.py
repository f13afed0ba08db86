"""Concrete syntax: lexer, parser, elaborator, printer, file driver."""

from sstt.surface.ast import Diagnostic, SurfaceError
from sstt.surface.parser import parse_module, parse_term, parse_tope_query
from sstt.surface.elaborate import elaborate_decl, elaborate_module, elaborate_term
from sstt.surface.printer import print_term, print_declaration
from sstt.surface.driver import check_source

__all__ = [
    "Diagnostic",
    "SurfaceError",
    "check_source",
    "elaborate_decl",
    "elaborate_module",
    "elaborate_term",
    "parse_module",
    "parse_term",
    "parse_tope_query",
    "print_declaration",
    "print_term",
]
