"""Words in free generators and the relator text grammar.

A word is a tuple of letters ``(generator_index, exponent)`` with exponent
+1 or -1; powers are expanded at parse time.  The concrete grammar for
relator strings is

    word := term+
    term := atom ("^" int)?
    atom := name | "(" word ")"

Terms are separated by whitespace; names are identifiers.  ``a^-1``,
``(a b)^5`` and ``a b a^-1 b^-1`` all parse.  The empty string is the empty
word (useful for trivially attached cells).

>>> parse_word("(a b)^2", ["a", "b"])
((0, 1), (1, 1), (0, 1), (1, 1))
"""

from __future__ import annotations

import re

from .errors import ParseError

Word = tuple  # tuple[tuple[int, int], ...]

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\^|-?\d+|\(|\))")


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad character in word at {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_power(w: Word, n: int) -> Word:
    if n < 0:
        return word_power(word_inverse(w), -n)
    return w * n


def free_reduce(w: Word) -> Word:
    out = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def parse_word(text: str, generators: list) -> Word:
    """Parse ``text`` against a generator-name list into a Word."""
    idx = {name: i for i, name in enumerate(generators)}
    tokens = _tokenize(text)

    def parse_seq(pos):
        letters = []
        while pos < len(tokens) and tokens[pos] != ")":
            atom, pos = parse_atom(pos)
            if pos < len(tokens) and tokens[pos] == "^":
                pos += 1
                if pos >= len(tokens) or not re.fullmatch(r"-?\d+", tokens[pos]):
                    raise ParseError(f"expected an integer exponent in {text!r}")
                atom = word_power(atom, int(tokens[pos]))
                pos += 1
            letters.extend(atom)
        return tuple(letters), pos

    def parse_atom(pos):
        tok = tokens[pos]
        if tok == "(":
            inner, pos = parse_seq(pos + 1)
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError(f"unbalanced parentheses in {text!r}")
            return inner, pos + 1
        if tok in idx:
            return ((idx[tok], 1),), pos + 1
        raise ParseError(f"unknown generator {tok!r} in {text!r}")

    word, pos = parse_seq(0)
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in {text!r}")
    return word


def format_word(w: Word, generators: list) -> str:
    """Inverse of parse_word, collapsing runs of equal letters into powers."""
    if not w:
        return ""
    parts = []
    i = 0
    while i < len(w):
        g, e = w[i]
        run = 1
        while i + run < len(w) and w[i + run] == (g, e):
            run += 1
        exp = e * run
        parts.append(generators[g] if exp == 1 else f"{generators[g]}^{exp}")
        i += run
    return " ".join(parts)
