"""Tokenizer for the surface language.

ASCII operators are canonical; the Unicode aliases in UNICODE_ALIASES are
accepted on input and never produced by the printer.  `--` starts a line
comment.  Identifiers are ASCII letters, digits, underscores and primes,
starting with a letter or underscore.
"""

from __future__ import annotations

from dataclasses import dataclass

from sstt.surface.ast import Span, SurfaceError

UNICODE_ALIASES = {
    "∧": "/\\",
    "∨": "\\/",
    "≤": "<=",
    "≡": "==",
    "⊤": "TOP",
    "⊥": "BOT",
    "λ": "\\",
    "→": "->",
    "↦": "|->",
    "⇒": "=>",
    "Σ": "Sig",
    "≔": ":=",
}

KEYWORDS = {
    "def",
    "axiom",
    "U",
    "Sig",
    "Id",
    "J",
    "refl",
    "split",
    "rec01",
    "TOP",
    "BOT",
}

# longest first so prefixes do not shadow
SYMBOLS = [
    "|->",
    ":=",
    "==",
    "<=",
    "=>",
    "->",
    "/\\",
    "\\/",
    ".1",
    ".2",
    "(",
    ")",
    "{",
    "}",
    "[",
    "]",
    "<",
    ">",
    ",",
    ";",
    ":",
    "|",
    "\\",
    "@",
    ".",
]


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUMBER | HASH | symbol/keyword text | EOF
    text: str
    span: Span


def _is_ident_start(c: str) -> bool:
    return c.isalpha() and c.isascii() or c == "_"


def _is_ident_char(c: str) -> bool:
    return (c.isalnum() and c.isascii()) or c in ("_", "'")


def tokenize(src: str, filename: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(src)

    def span() -> Span:
        return (filename, line, col)

    def advance(text: str) -> None:
        nonlocal i, line, col
        for c in text:
            if c == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += len(text)

    while i < n:
        c = src[i]
        if c in " \t\r\n":
            advance(c)
            continue
        if src.startswith("--", i):
            end = src.find("\n", i)
            advance(src[i:] if end < 0 else src[i:end])
            continue
        if c in UNICODE_ALIASES:
            alias = UNICODE_ALIASES[c]
            tokens.append(Token(alias, alias, span()))
            advance(c)
            continue
        if c == "#":
            j = i + 1
            while j < n and _is_ident_char(src[j]):
                j += 1
            word = src[i:j]
            if word not in ("#check", "#entails"):
                raise SurfaceError("syntax", f"unknown directive {word!r}", span())
            tokens.append(Token(word, word, span()))
            advance(word)
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_char(src[j]):
                j += 1
            word = src[i:j]
            kind = word if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, span()))
            advance(word)
            continue
        if c.isdigit():
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            word = src[i:j]
            tokens.append(Token("NUMBER", word, span()))
            advance(word)
            continue
        for sym in SYMBOLS:
            if src.startswith(sym, i):
                # keep .1/.2 out of identifiers: handled before ident digits
                tokens.append(Token(sym, sym, span()))
                advance(sym)
                break
        else:
            raise SurfaceError("syntax", f"unexpected character {c!r}", span())
    tokens.append(Token("EOF", "", span()))
    return tokens
