"""Shared test utilities: formula generators, word families, golden machines,
and a second, deliberately naive semantics evaluator used to cross-check the
fixpoint one.
"""

from __future__ import annotations

import itertools
import random

from partmon.fsm import MooreMonitor, Verdict
from partmon.ltl import (
    Alphabet,
    Always,
    And,
    Atom,
    Eventually,
    FALSE,
    FalseFormula,
    Formula,
    Implies,
    LassoWord,
    Next,
    Not,
    Or,
    Release,
    TRUE,
    TrueFormula,
    Until,
)

NAMES3 = ("ev1", "ev2", "ev3")
ALPHA3 = Alphabet(NAMES3)

_BINARY_OPS = (And, Or, Implies, Until, Release)
_UNARY_OPS = (Not, Next, Eventually, Always)


def random_formula(rng: random.Random, depth: int, names=NAMES3) -> Formula:
    """Uniform-ish random formula of nesting depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.7:
            return Atom(rng.choice(names))
        return TRUE if roll < 0.85 else FALSE
    op = rng.choice(_BINARY_OPS + _UNARY_OPS)
    if op in _UNARY_OPS:
        return op(random_formula(rng, depth - 1, names))
    return op(random_formula(rng, depth - 1, names), random_formula(rng, depth - 1, names))


def all_words(names, max_len: int) -> list[tuple[str, ...]]:
    """Every word over ``names`` of length 0..max_len, shortest first."""
    out: list[tuple[str, ...]] = []
    for length in range(max_len + 1):
        out.extend(itertools.product(names, repeat=length))
    return out


def all_lassos(names, max_stem: int, max_loop: int) -> list[LassoWord]:
    stems = all_words(names, max_stem)
    loops = [w for w in all_words(names, max_loop) if w]
    return [LassoWord(s, l) for s in stems for l in loops]


def unfold_eval(phi: Formula, word: LassoWord) -> bool:
    """Evaluate by recursive unfolding of the temporal fixpoint equations,
    cut off after 2 * (|stem| + |loop|) unrollings.

    Unfulfilled Until/Eventually default to false at the cutoff and
    Release/Always to true, which is exact on ultimately periodic words of
    this size.  Separate from lasso_eval on purpose: two disagreeing
    evaluators flag a bug in one of them.
    """
    events = word.stem + word.loop
    n = len(events)
    first_loop = len(word.stem)
    fuel_budget = 2 * n + 2
    memo: dict[tuple[Formula, int], bool] = {}

    def succ(i: int) -> int:
        return i + 1 if i + 1 < n else first_loop

    def holds(f: Formula, i: int) -> bool:
        key = (f, i)
        got = memo.get(key)
        if got is None:
            got = unfold(f, i, fuel_budget)
            memo[key] = got
        return got

    def unfold(f: Formula, i: int, fuel: int) -> bool:
        if isinstance(f, TrueFormula):
            return True
        if isinstance(f, FalseFormula):
            return False
        if isinstance(f, Atom):
            return events[i] == f.name
        if isinstance(f, Not):
            return not holds(f.arg, i)
        if isinstance(f, And):
            return holds(f.left, i) and holds(f.right, i)
        if isinstance(f, Or):
            return holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Implies):
            return not holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Next):
            return holds(f.arg, succ(i))
        if isinstance(f, Until):
            if holds(f.right, i):
                return True
            if fuel == 0:
                return False
            return holds(f.left, i) and unfold(f, succ(i), fuel - 1)
        if isinstance(f, Release):
            if not holds(f.right, i):
                return False
            if fuel == 0:
                return True
            return holds(f.left, i) or unfold(f, succ(i), fuel - 1)
        if isinstance(f, Eventually):
            if holds(f.arg, i):
                return True
            if fuel == 0:
                return False
            return unfold(f, succ(i), fuel - 1)
        if isinstance(f, Always):
            if not holds(f.arg, i):
                return False
            if fuel == 0:
                return True
            return unfold(f, succ(i), fuel - 1)
        raise TypeError(f"not a formula: {f!r}")

    return holds(phi, 0)


# --- hand-built machines matching the documented monitor shapes -------------

def eventually_ev1_machine(partial: bool = False) -> MooreMonitor:
    """Monitor for 'F ev1' over {ev1, ev2, ev3}: inconclusive start, TOP sink."""
    return MooreMonitor(
        ALPHA3,
        2,
        0,
        [[1, 0, 0], [1, 1, 1]],
        [Verdict.UNKNOWN, Verdict.TOP],
        partial,
    )


ALPHA4 = Alphabet(("ev1", "ev2", "ev3", "ev4"))


def mixed_branches_machine(partial: bool = False) -> MooreMonitor:
    """Monitor for '(ev1 & F ev2) | (ev3 & G F ev4)' over {ev1..ev4}.

    States: 0 start, 1 committed-to-F ev2, 2 inconclusive-forever sink,
    3 BOT sink, 4 TOP sink.  When ``partial`` is set, state 2 is a give-up
    state, otherwise it stays inconclusive.
    """
    outputs = [
        Verdict.UNKNOWN,
        Verdict.UNKNOWN,
        Verdict.GIVEUP if partial else Verdict.UNKNOWN,
        Verdict.BOT,
        Verdict.TOP,
    ]
    delta = [
        [1, 3, 2, 3],
        [1, 4, 1, 1],
        [2, 2, 2, 2],
        [3, 3, 3, 3],
        [4, 4, 4, 4],
    ]
    return MooreMonitor(ALPHA4, 5, 0, delta, outputs, partial)


RADIATION_ALPHA = Alphabet(
    ("rad_low", "rad_high", "rad_medium", "mv_dec", "insp_t1", "insp_t2")
)

RADIATION_FORMULA = (
    "rad_low U ((rad_high & <>mv_dec)"
    " | (rad_medium & []<>(insp_t1 | insp_t2)))"
)


def radiation_machine() -> MooreMonitor:
    """Partial monitor for the radiation property over the rover alphabet.

    States: 0 waiting on rad_low, 1 committed to eventually mv_dec, 2 give-up
    (entered on rad_medium), 3 BOT sink, 4 TOP sink.
    """
    outputs = [
        Verdict.UNKNOWN,
        Verdict.UNKNOWN,
        Verdict.GIVEUP,
        Verdict.BOT,
        Verdict.TOP,
    ]
    delta = [
        [0, 1, 2, 3, 3, 3],
        [1, 1, 1, 4, 1, 1],
        [2, 2, 2, 2, 2, 2],
        [3, 3, 3, 3, 3, 3],
        [4, 4, 4, 4, 4, 4],
    ]
    return MooreMonitor(RADIATION_ALPHA, 5, 0, delta, outputs, partial=True)


def giveup_only_machine(alphabet: Alphabet | None = None) -> MooreMonitor:
    """Single give-up state looping on every event."""
    alphabet = alphabet or ALPHA3
    return MooreMonitor(
        alphabet, 1, 0, [[0] * len(alphabet)], [Verdict.GIVEUP], partial=True
    )
