"""Translation of LTL formulas into nondeterministic Büchi automata.

The construction is the on-the-fly tableau expansion of Gerth, Peled, Vardi
and Wolper (1995): nodes carry sets of obligations, Until/Release obligations
split nodes, and the finished node graph becomes a generalized Büchi automaton
with one acceptance set per Until subformula.  Generalized acceptance is then
reduced to a single set with the usual counter product.

Transition labels are concrete events, not proposition sets: an event
satisfies a node's literal obligations iff every positive literal equals the
event and no negative literal does.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .graphs import strongly_connected_components
from .ltl import (
    Alphabet,
    Always,
    And,
    Atom,
    Eventually,
    FALSE,
    FalseFormula,
    Formula,
    Next,
    Not,
    Or,
    Release,
    TRUE,
    TrueFormula,
    Until,
    is_nnf,
    subformulas,
    validate_formula,
)


class Nba:
    """Nondeterministic Büchi automaton over concrete events.

    States are integers 0..num_states-1; acceptance is a single state set.
    """

    __slots__ = ("alphabet", "num_states", "initial", "transitions", "accepting", "_succ")

    def __init__(
        self,
        alphabet: Alphabet,
        num_states: int,
        initial: Iterable[int],
        transitions: Iterable[tuple[int, str, int]],
        accepting: Iterable[int],
    ):
        self.alphabet = alphabet
        self.num_states = num_states
        self.initial = frozenset(initial)
        self.transitions = tuple(sorted(set(transitions), key=self._edge_key(alphabet)))
        self.accepting = frozenset(accepting)
        if not self.initial:
            raise ValueError("automaton needs at least one initial state")
        for q in self.initial | self.accepting:
            if not 0 <= q < num_states:
                raise ValueError(f"state {q} out of range")
        succ: dict[tuple[int, str], list[int]] = {}
        for src, event, dst in self.transitions:
            if not (0 <= src < num_states and 0 <= dst < num_states):
                raise ValueError(f"transition endpoint out of range: {(src, event, dst)}")
            if event not in alphabet:
                raise ValueError(f"transition on unknown event '{event}'")
            succ.setdefault((src, event), []).append(dst)
        self._succ = {key: tuple(dsts) for key, dsts in succ.items()}

    @staticmethod
    def _edge_key(alphabet: Alphabet):
        return lambda edge: (edge[0], alphabet.index(edge[1]), edge[2])

    def successors(self, state: int, event: str) -> tuple[int, ...]:
        return self._succ.get((state, event), ())


def _expand_temporal_sugar(phi: Formula) -> Formula:
    """Rewrite F/G into their Until/Release definitions for the tableau."""
    if isinstance(phi, Eventually):
        return Until(TRUE, _expand_temporal_sugar(phi.arg))
    if isinstance(phi, Always):
        return Release(FALSE, _expand_temporal_sugar(phi.arg))
    if isinstance(phi, (TrueFormula, FalseFormula, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(_expand_temporal_sugar(phi.arg))
    if isinstance(phi, Next):
        return Next(_expand_temporal_sugar(phi.arg))
    if isinstance(phi, And):
        return And(_expand_temporal_sugar(phi.left), _expand_temporal_sugar(phi.right))
    if isinstance(phi, Or):
        return Or(_expand_temporal_sugar(phi.left), _expand_temporal_sugar(phi.right))
    if isinstance(phi, Until):
        return Until(_expand_temporal_sugar(phi.left), _expand_temporal_sugar(phi.right))
    if isinstance(phi, Release):
        return Release(_expand_temporal_sugar(phi.left), _expand_temporal_sugar(phi.right))
    raise TypeError(f"not a formula: {phi!r}")


class _TableauNode:
    __slots__ = ("incoming", "new", "old", "next")

    def __init__(self, incoming: set[int], new: list[Formula], old: set[Formula], nxt: set[Formula]):
        self.incoming = incoming
        self.new = new
        self.old = old
        self.next = nxt

    def split(self, eta: Formula, adds: Iterable[Formula], defer: bool) -> "_TableauNode":
        new = list(self.new)
        old = set(self.old)
        old.add(eta)
        for f in adds:
            if f not in old and f not in new:
                new.append(f)
        nxt = set(self.next)
        if defer:
            nxt.add(eta)
        return _TableauNode(set(self.incoming), new, old, nxt)


def _negation_of(literal: Formula) -> Formula:
    if isinstance(literal, Not):
        return literal.arg
    return Not(literal)


def ltl_to_nba(phi: Formula, alphabet: Alphabet) -> Nba:
    """Build an NBA whose language is exactly the set of infinite words
    satisfying ``phi``.

    ``phi`` must be in negation normal form.  State numbering is canonical:
    the same formula always yields the identical automaton.
    """
    validate_formula(phi, alphabet)
    if not is_nnf(phi):
        raise ValueError("formula must be in negation normal form")
    goal = _expand_temporal_sugar(phi)

    # Canonical obligation order makes node expansion, and therefore state
    # numbering, independent of set iteration order.
    order = {f: i for i, f in enumerate(subformulas(goal))}
    order.setdefault(TRUE, len(order))
    order.setdefault(FALSE, len(order))

    INIT = 0
    node_old: list[frozenset[Formula]] = [frozenset()]  # placeholder for INIT
    node_incoming: list[set[int]] = [set()]
    finished: dict[tuple[frozenset[Formula], frozenset[Formula]], int] = {}

    pending: list[_TableauNode] = [_TableauNode({INIT}, [goal], set(), set())]
    while pending:
        node = pending.pop()
        if not node.new:
            key = (frozenset(node.old), frozenset(node.next))
            existing = finished.get(key)
            if existing is not None:
                node_incoming[existing] |= node.incoming
                continue
            nid = len(node_old)
            finished[key] = nid
            node_old.append(key[0])
            node_incoming.append(set(node.incoming))
            pending.append(
                _TableauNode({nid}, sorted(node.next, key=order.__getitem__), set(), set())
            )
            continue

        eta = min(node.new, key=order.__getitem__)
        node.new.remove(eta)
        if isinstance(eta, TrueFormula):
            # Recorded like any granted obligation: an Until whose right side
            # is literally true must see it in `old` to count as fulfilled.
            node.old.add(eta)
            pending.append(node)
        elif isinstance(eta, FalseFormula):
            pass  # contradiction: drop this node
        elif isinstance(eta, (Atom, Not)):
            if _negation_of(eta) in node.old:
                pass
            else:
                node.old.add(eta)
                pending.append(node)
        elif isinstance(eta, Next):
            node.old.add(eta)
            node.next.add(eta.arg)
            pending.append(node)
        elif isinstance(eta, And):
            node.old.add(eta)
            for f in (eta.left, eta.right):
                if f not in node.old and f not in node.new:
                    node.new.append(f)
            pending.append(node)
        elif isinstance(eta, Or):
            pending.append(node.split(eta, [eta.right], defer=False))
            pending.append(node.split(eta, [eta.left], defer=False))
        elif isinstance(eta, Until):
            # eta = l U r unfolds to r | (l & X eta)
            pending.append(node.split(eta, [eta.right], defer=False))
            pending.append(node.split(eta, [eta.left], defer=True))
        elif isinstance(eta, Release):
            # eta = l R r unfolds to r & (l | X eta)
            pending.append(node.split(eta, [eta.left, eta.right], defer=False))
            pending.append(node.split(eta, [eta.right], defer=True))
        else:
            raise ValueError("formula must be in negation normal form")

    num_raw = len(node_old)

    # An event satisfies a node's literal set iff it equals every positive
    # literal and differs from every negative one.
    def compatible_events(nid: int) -> list[str]:
        positives = sorted(
            {f.name for f in node_old[nid] if isinstance(f, Atom)}, key=alphabet.index
        )
        negatives = {f.arg.name for f in node_old[nid] if isinstance(f, Not)}
        if len(positives) > 1:
            return []
        if len(positives) == 1:
            return positives if positives[0] not in negatives else []
        return [e for e in alphabet if e not in negatives]

    edges: list[tuple[int, str, int]] = []
    for nid in range(1, num_raw):
        events = compatible_events(nid)
        for src in sorted(node_incoming[nid]):
            for event in events:
                edges.append((src, event, nid))

    untils = [f for f in subformulas(goal) if isinstance(f, Until)]
    accepting_sets = [
        frozenset(
            nid
            for nid in range(1, num_raw)
            if u not in node_old[nid] or u.right in node_old[nid]
        )
        for u in untils
    ]

    if len(accepting_sets) > 1:
        states, initial, edges, accepting = _degeneralize(
            num_raw, INIT, edges, accepting_sets, alphabet
        )
    else:
        states = num_raw
        initial = INIT
        accepting = accepting_sets[0] if accepting_sets else frozenset(range(num_raw))

    return _prune_and_renumber(alphabet, states, initial, edges, accepting)


def _degeneralize(
    num_states: int,
    initial: int,
    edges: list[tuple[int, str, int]],
    accepting_sets: list[frozenset[int]],
    alphabet: Alphabet,
) -> tuple[int, int, list[tuple[int, str, int]], frozenset[int]]:
    """Counter product: track which acceptance set is awaited; the counter
    advances when leaving a state of the awaited set, and a run is accepting
    iff it sees set 0 with counter 0 infinitely often."""
    k = len(accepting_sets)
    succ: dict[int, list[tuple[int, str, int]]] = {}
    for src, event, dst in edges:
        succ.setdefault(src, []).append((alphabet.index(event), event, dst))
    for lst in succ.values():
        lst.sort()

    ids: dict[tuple[int, int], int] = {(initial, 0): 0}
    queue = deque([(initial, 0)])
    out_edges: list[tuple[int, str, int]] = []
    while queue:
        q, i = queue.popleft()
        src_id = ids[(q, i)]
        j = (i + 1) % k if q in accepting_sets[i] else i
        for _, event, dst in succ.get(q, ()):
            key = (dst, j)
            dst_id = ids.get(key)
            if dst_id is None:
                dst_id = len(ids)
                ids[key] = dst_id
                queue.append(key)
            out_edges.append((src_id, event, dst_id))
    accepting = frozenset(
        sid for (q, i), sid in ids.items() if i == 0 and q in accepting_sets[0]
    )
    return len(ids), 0, out_edges, accepting


def _prune_and_renumber(
    alphabet: Alphabet,
    num_states: int,
    initial: int,
    edges: list[tuple[int, str, int]],
    accepting: frozenset[int],
) -> Nba:
    succ: dict[tuple[int, str], list[int]] = {}
    for src, event, dst in edges:
        succ.setdefault((src, event), []).append(dst)
    for lst in succ.values():
        lst.sort()

    renamed = {initial: 0}
    queue = deque([initial])
    order = [initial]
    while queue:
        q = queue.popleft()
        for event in alphabet:
            for dst in succ.get((q, event), ()):
                if dst not in renamed:
                    renamed[dst] = len(renamed)
                    order.append(dst)
                    queue.append(dst)
    new_edges = [
        (renamed[src], event, renamed[dst])
        for (src, event, dst) in edges
        if src in renamed and dst in renamed
    ]
    new_accepting = [renamed[q] for q in accepting if q in renamed]
    return Nba(alphabet, len(renamed), [0], new_edges, new_accepting)


def nba_accepts_lasso(automaton: Nba, word) -> bool:
    """Decide whether the ultimately periodic word stem · loop^ω is accepted.

    Explores the product of the automaton with the lasso positions and looks
    for a reachable cycle through an accepting state.  Any cycle necessarily
    lives in the loop segment, since stem positions cannot repeat.
    """
    events = word.stem + word.loop
    n = len(events)
    loop_entry = len(word.stem)

    ids: dict[tuple[int, int], int] = {}
    nodes: list[tuple[int, int]] = []
    adjacency: list[list[int]] = []

    def node_id(q: int, pos: int) -> int:
        got = ids.get((q, pos))
        if got is None:
            got = len(nodes)
            ids[(q, pos)] = got
            nodes.append((q, pos))
            adjacency.append([])
        return got

    queue = deque()
    for q in sorted(automaton.initial):
        node_id(q, 0)
        queue.append((q, 0))
    expanded = set(queue)
    while queue:
        q, pos = queue.popleft()
        src = ids[(q, pos)]
        nxt = pos + 1 if pos + 1 < n else loop_entry
        for dst in automaton.successors(q, events[pos]):
            adjacency[src].append(node_id(dst, nxt))
            if (dst, nxt) not in expanded:
                expanded.add((dst, nxt))
                queue.append((dst, nxt))

    for component in strongly_connected_components(adjacency):
        cyclic = len(component) > 1 or any(v in adjacency[v] for v in component)
        if cyclic and any(nodes[v][0] in automaton.accepting for v in component):
            return True
    return False
