"""LTL formulas over named events: syntax trees, parsing, normal forms, and an
evaluator for ultimately periodic words.

Events are mutually exclusive: every trace position carries exactly one event
name, and an atom holds iff the current event is that name.  This matches the
single-event transition labels used throughout the monitor pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

#: Words with a fixed meaning in the concrete syntax; they cannot name events.
RESERVED_WORDS = frozenset({"true", "false", "X", "F", "G", "U", "R"})


class FormulaSyntaxError(ValueError):
    """Formula text that does not match the grammar.

    ``position`` is the 0-based character offset of the offending input.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAtomError(ValueError):
    """An atom used in a formula that is not part of the declared alphabet."""

    def __init__(self, name: str, position: int | None = None):
        where = f" (at position {position})" if position is not None else ""
        super().__init__(f"unknown atom '{name}'{where}")
        self.name = name
        self.position = position


class UnknownEventError(ValueError):
    """An event outside the alphabet; ``position`` is 1-based when known."""

    def __init__(self, event: str, position: int | None = None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown event '{event}'{where}")
        self.event = event
        self.position = position


def _check_event_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValueError(
            f"invalid event name {name!r}: must be letters, digits or underscores,"
            " not starting with a digit"
        )
    if name in RESERVED_WORDS:
        raise ValueError(f"invalid event name '{name}': reserved word")
    return name


class Alphabet:
    """Ordered collection of distinct event names.

    Declaration order is significant: it fixes state numbering, witness
    tie-breaking, and every other place events are enumerated.
    """

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if not syms:
            raise ValueError("alphabet must contain at least one event")
        seen: set[str] = set()
        for name in syms:
            _check_event_name(name)
            if name in seen:
                raise ValueError(f"duplicate event name '{name}'")
            seen.add(name)
        self.symbols = syms
        self._index = {name: i for i, name in enumerate(syms)}

    def index(self, event: str) -> int:
        try:
            return self._index[event]
        except KeyError:
            raise UnknownEventError(event) from None

    def __contains__(self, event: object) -> bool:
        return event in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)!r})"


class Formula:
    """Base class for formula nodes; all nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True, slots=True)
class FalseFormula(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        _check_event_name(self.name)


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Always(Formula):
    arg: Formula


TRUE = TrueFormula()
FALSE = FalseFormula()

_BINARY = (And, Or, Implies, Until, Release)
_UNARY = (Not, Next, Eventually, Always)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, _BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, _UNARY):
        return (phi.arg,)
    return ()


def subformulas(phi: Formula) -> list[Formula]:
    """All distinct subformulas in left-to-right postorder (children first)."""
    out: list[Formula] = []
    seen: set[Formula] = set()

    def walk(f: Formula) -> None:
        if f in seen:
            return
        for c in children(f):
            walk(c)
        seen.add(f)
        out.append(f)

    walk(phi)
    return out


def atoms_in_order(phi: Formula) -> list[str]:
    """Atom names in order of first occurrence, reading the formula left to right."""
    out: list[str] = []
    seen: set[str] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            if f.name not in seen:
                seen.add(f.name)
                out.append(f.name)
        else:
            stack.extend(reversed(children(f)))
    return out


def validate_formula(phi: Formula, alphabet: Alphabet) -> None:
    """Raise UnknownAtomError if the formula mentions an event outside the alphabet."""
    for name in atoms_in_order(phi):
        if name not in alphabet:
            raise UnknownAtomError(name)


# --- concrete syntax -------------------------------------------------------
#
# formula := impl
# impl    := or ("->" impl)?                    right-associative
# or      := and ("|" and)*
# and     := until ("&" until)*
# until   := unary (("U" | "R") until)?         right-associative
# unary   := ("!" | "X" | "F" | "G" | "<>" | "[]") unary | primary
# primary := "true" | "false" | identifier | "(" formula ")"
#
# Whitespace is insignificant; "#" starts a comment running to end of line.

_KEYWORDS = {
    "true": "TRUE",
    "false": "FALSE",
    "X": "NEXT",
    "F": "EVENTUALLY",
    "G": "ALWAYS",
    "U": "UNTIL",
    "R": "RELEASE",
}

_SINGLE = {"(": "LPAREN", ")": "RPAREN", "!": "NOT", "&": "AND", "|": "OR"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif c in _SINGLE:
            tokens.append((_SINGLE[c], c, i))
            i += 1
        elif c == "-":
            if text.startswith("->", i):
                tokens.append(("IMPLIES", "->", i))
                i += 2
            else:
                raise FormulaSyntaxError("expected '->'", i)
        elif c == "<":
            if text.startswith("<>", i):
                tokens.append(("EVENTUALLY", "<>", i))
                i += 2
            else:
                raise FormulaSyntaxError("expected '<>'", i)
        elif c == "[":
            if text.startswith("[]", i):
                tokens.append(("ALWAYS", "[]", i))
                i += 2
            else:
                raise FormulaSyntaxError("expected '[]'", i)
        elif c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append((_KEYWORDS.get(word, "NAME"), word, i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.alphabet = alphabet

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        phi = self.implication()
        kind, text, at = self.peek()
        if kind != "END":
            raise FormulaSyntaxError(f"unexpected {text!r} after formula", at)
        return phi

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "IMPLIES":
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "OR":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.peek()[0] == "AND":
            self.advance()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        kind = self.peek()[0]
        if kind in ("UNTIL", "RELEASE"):
            self.advance()
            right = self.until()
            return Until(left, right) if kind == "UNTIL" else Release(left, right)
        return left

    def unary(self) -> Formula:
        kind, _, _ = self.peek()
        if kind == "NOT":
            self.advance()
            return Not(self.unary())
        if kind == "NEXT":
            self.advance()
            return Next(self.unary())
        if kind == "EVENTUALLY":
            self.advance()
            return Eventually(self.unary())
        if kind == "ALWAYS":
            self.advance()
            return Always(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, text, at = self.advance()
        if kind == "TRUE":
            return TRUE
        if kind == "FALSE":
            return FALSE
        if kind == "NAME":
            if self.alphabet is not None and text not in self.alphabet:
                raise UnknownAtomError(text, at)
            return Atom(text)
        if kind == "LPAREN":
            phi = self.implication()
            k, t, p = self.advance()
            if k != "RPAREN":
                raise FormulaSyntaxError(f"expected ')', found {t!r}" if t else "expected ')'", p)
            return phi
        if kind == "END":
            raise FormulaSyntaxError("expected a formula, found end of input", at)
        raise FormulaSyntaxError(f"expected a formula, found {text!r}", at)


def parse_formula(text: str, alphabet: Alphabet | None = None) -> Formula:
    """Parse formula text into a syntax tree.

    Precedence, tightest first: unary (``!``, ``X``, ``F``/``<>``, ``G``/``[]``),
    then ``U``/``R`` (right-associative), then ``&``, ``|``, and ``->``
    (right-associative).  With an alphabet, atoms outside it raise
    UnknownAtomError; without one, any identifier is accepted.
    """
    return _Parser(text, alphabet).parse()


_LEVEL_IMPL, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNTIL, _LEVEL_UNARY, _LEVEL_ATOM = range(6)


def _level(phi: Formula) -> int:
    if isinstance(phi, Implies):
        return _LEVEL_IMPL
    if isinstance(phi, Or):
        return _LEVEL_OR
    if isinstance(phi, And):
        return _LEVEL_AND
    if isinstance(phi, (Until, Release)):
        return _LEVEL_UNTIL
    if isinstance(phi, (Not, Next, Eventually, Always)):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def _fmt(phi: Formula, min_level: int) -> str:
    if isinstance(phi, TrueFormula):
        s = "true"
    elif isinstance(phi, FalseFormula):
        s = "false"
    elif isinstance(phi, Atom):
        s = phi.name
    elif isinstance(phi, Not):
        s = "!" + _fmt(phi.arg, _LEVEL_UNARY)
    elif isinstance(phi, Next):
        s = "X " + _fmt(phi.arg, _LEVEL_UNARY)
    elif isinstance(phi, Eventually):
        s = "F " + _fmt(phi.arg, _LEVEL_UNARY)
    elif isinstance(phi, Always):
        s = "G " + _fmt(phi.arg, _LEVEL_UNARY)
    elif isinstance(phi, Until):
        s = _fmt(phi.left, _LEVEL_UNARY) + " U " + _fmt(phi.right, _LEVEL_UNTIL)
    elif isinstance(phi, Release):
        s = _fmt(phi.left, _LEVEL_UNARY) + " R " + _fmt(phi.right, _LEVEL_UNTIL)
    elif isinstance(phi, And):
        s = _fmt(phi.left, _LEVEL_AND) + " & " + _fmt(phi.right, _LEVEL_UNTIL)
    elif isinstance(phi, Or):
        s = _fmt(phi.left, _LEVEL_OR) + " | " + _fmt(phi.right, _LEVEL_AND)
    elif isinstance(phi, Implies):
        s = _fmt(phi.left, _LEVEL_OR) + " -> " + _fmt(phi.right, _LEVEL_IMPL)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    if _level(phi) < min_level:
        return "(" + s + ")"
    return s


def format_formula(phi: Formula) -> str:
    """Render a formula in the concrete syntax; re-parsing yields an equal tree."""
    return _fmt(phi, _LEVEL_IMPL)


def _nnf(phi: Formula, neg: bool) -> Formula:
    if isinstance(phi, TrueFormula):
        return FALSE if neg else TRUE
    if isinstance(phi, FalseFormula):
        return TRUE if neg else FALSE
    if isinstance(phi, Atom):
        return Not(phi) if neg else phi
    if isinstance(phi, Not):
        return _nnf(phi.arg, not neg)
    if isinstance(phi, And):
        op = Or if neg else And
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Or):
        op = And if neg else Or
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Implies):
        # l -> r is rewritten as !l | r before pushing negations.
        if neg:
            return And(_nnf(phi.left, False), _nnf(phi.right, True))
        return Or(_nnf(phi.left, True), _nnf(phi.right, False))
    if isinstance(phi, Next):
        return Next(_nnf(phi.arg, neg))
    if isinstance(phi, Until):
        op = Release if neg else Until
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Release):
        op = Until if neg else Release
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Eventually):
        if neg:
            return Always(_nnf(phi.arg, True))
        return Eventually(_nnf(phi.arg, False))
    if isinstance(phi, Always):
        if neg:
            return Eventually(_nnf(phi.arg, True))
        return Always(_nnf(phi.arg, False))
    raise TypeError(f"not a formula: {phi!r}")


def nnf(phi: Formula) -> Formula:
    """Negation normal form: implications removed, negation only on atoms."""
    return _nnf(phi, False)


def negate_nnf(phi: Formula) -> Formula:
    """Negation normal form of the *negated* formula."""
    return _nnf(phi, True)


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Implies):
        return False
    if isinstance(phi, Not):
        return isinstance(phi.arg, Atom)
    return all(is_nnf(c) for c in children(phi))


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic infinite word stem · loop^ω; the loop must be nonempty."""

    stem: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")


def lasso_eval(phi: Formula, word: LassoWord) -> bool:
    """Decide whether the infinite word stem · loop^ω satisfies the formula.

    Works by fixpoint labeling over the len(stem) + len(loop) positions of the
    lasso graph, where the position after the last loop element wraps back to
    the loop start.  Each subformula gets one truth bit per position; Until and
    Eventually are least fixpoints (start all-false), Release and Always are
    greatest fixpoints (start all-true), iterated until stable.

    This evaluator is deliberately independent of the automaton pipeline so it
    can serve as a semantics oracle for it.  Being restricted to ultimately
    periodic words, it samples rather than exhausts the set of infinite traces.
    """
    events = word.stem + word.loop
    n = len(events)
    full = (1 << n) - 1
    loop_entry = 1 << len(word.stem)
    high = 1 << (n - 1)

    def shift(v: int) -> int:
        # Bit i of the result is bit succ(i) of v; succ wraps the final
        # position back to the loop entry.
        return (v >> 1) | (high if v & loop_entry else 0)

    cache: dict[Formula, int] = {}

    def values(f: Formula) -> int:
        got = cache.get(f)
        if got is not None:
            return got
        if isinstance(f, TrueFormula):
            v = full
        elif isinstance(f, FalseFormula):
            v = 0
        elif isinstance(f, Atom):
            v = 0
            for i, ev in enumerate(events):
                if ev == f.name:
                    v |= 1 << i
        elif isinstance(f, Not):
            v = full & ~values(f.arg)
        elif isinstance(f, And):
            v = values(f.left) & values(f.right)
        elif isinstance(f, Or):
            v = values(f.left) | values(f.right)
        elif isinstance(f, Implies):
            v = (full & ~values(f.left)) | values(f.right)
        elif isinstance(f, Next):
            v = shift(values(f.arg))
        elif isinstance(f, Until):
            lv, rv = values(f.left), values(f.right)
            v = 0
            while True:
                nv = rv | (lv & shift(v))
                if nv == v:
                    break
                v = nv
        elif isinstance(f, Release):
            lv, rv = values(f.left), values(f.right)
            v = full
            while True:
                nv = rv & (lv | shift(v))
                if nv == v:
                    break
                v = nv
        elif isinstance(f, Eventually):
            av = values(f.arg)
            v = 0
            while True:
                nv = av | shift(v)
                if nv == v:
                    break
                v = nv
        elif isinstance(f, Always):
            av = values(f.arg)
            v = full
            while True:
                nv = av & shift(v)
                if nv == v:
                    break
                v = nv
        else:
            raise TypeError(f"not a formula: {f!r}")
        cache[f] = v
        return v

    return bool(values(phi) & 1)
