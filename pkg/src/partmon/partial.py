"""Give-up labeling and monitorability classification of Moore monitors.

An inconclusive state that cannot reach any conclusive state will stay
inconclusive forever; relabeling it GIVEUP lets the monitor announce that
continuing is pointless.  The pass is a single backward reachability sweep
from the conclusive states, linear in states plus edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .fsm import MooreMonitor, Verdict


class NotPartializedError(ValueError):
    """A four-valued machine was required but a three-valued one was given."""

    def __init__(self, message: str = "monitor has not been partialized (three-valued outputs)"):
        super().__init__(message)


class Monitorability(Enum):
    NON_MONITORABLE = "NON_MONITORABLE"
    EXISTS_PZ_ONLY = "EXISTS_PZ_ONLY"
    FORALL_PZ = "FORALL_PZ"


@dataclass(frozen=True)
class MonitorabilityReport:
    """What the synthesized machine can still conclude, and from where.

    ``ugly_witness`` is a shortest trace leading to a give-up state (empty for
    machines that give up immediately, None when no give-up state exists).
    """

    classification: Monitorability
    can_reach_top: bool
    can_reach_bot: bool
    state_count: int
    giveup_state_count: int
    ugly_witness: tuple[str, ...] | None

    def as_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "can_reach_top": self.can_reach_top,
            "can_reach_bot": self.can_reach_bot,
            "state_count": self.state_count,
            "giveup_state_count": self.giveup_state_count,
            "ugly_witness": list(self.ugly_witness) if self.ugly_witness is not None else None,
        }


def partialize(machine: MooreMonitor) -> MooreMonitor:
    """Relabel hopeless inconclusive states with the give-up verdict.

    States, transitions and conclusive outputs are untouched; an UNKNOWN state
    keeps its output iff some TOP or BOT state is reachable from it, and
    becomes GIVEUP otherwise.  Idempotent: applying it twice changes nothing.
    """
    reverse: list[list[int]] = [[] for _ in range(machine.num_states)]
    for q in machine.states():
        for dst in machine.delta[q]:
            reverse[dst].append(q)

    hopeful = set(q for q in machine.states() if machine.outputs[q].is_conclusive)
    queue = deque(hopeful)
    while queue:
        q = queue.popleft()
        for src in reverse[q]:
            if src not in hopeful:
                hopeful.add(src)
                queue.append(src)

    outputs = [
        out if out is not Verdict.UNKNOWN or q in hopeful else Verdict.GIVEUP
        for q, out in enumerate(machine.outputs)
    ]
    return MooreMonitor(
        machine.alphabet,
        machine.num_states,
        machine.initial,
        machine.delta,
        outputs,
        partial=True,
    )


def reachability_oracle(machine: MooreMonitor, state: int) -> bool:
    """Forward breadth-first check: can this state reach a conclusive one?

    Independent of the backward sweep in :func:`partialize`; kept as a
    cross-check instrument.
    """
    if not 0 <= state < machine.num_states:
        raise ValueError(f"state {state} out of range")
    seen = {state}
    queue = deque([state])
    while queue:
        q = queue.popleft()
        if machine.outputs[q].is_conclusive:
            return True
        for dst in machine.delta[q]:
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return False


def classify(machine: MooreMonitor) -> MonitorabilityReport:
    """Classify a partialized machine by what it can still conclude.

    NON_MONITORABLE: the machine gives up on the empty trace already.
    EXISTS_PZ_ONLY: some traces can be decided, but give-up states exist.
    FORALL_PZ: every reachable state can still reach a conclusive verdict.
    """
    if not machine.partial:
        raise NotPartializedError()

    giveup_count = sum(1 for out in machine.outputs if out is Verdict.GIVEUP)
    can_reach_top = False
    can_reach_bot = False
    seen = {machine.initial}
    queue = deque([machine.initial])
    while queue:
        q = queue.popleft()
        if machine.outputs[q] is Verdict.TOP:
            can_reach_top = True
        elif machine.outputs[q] is Verdict.BOT:
            can_reach_bot = True
        for dst in machine.delta[q]:
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)

    witness = _shortest_giveup_trace(machine)
    if machine.outputs[machine.initial] is Verdict.GIVEUP:
        classification = Monitorability.NON_MONITORABLE
    elif giveup_count == 0:
        classification = Monitorability.FORALL_PZ
    else:
        classification = Monitorability.EXISTS_PZ_ONLY
    return MonitorabilityReport(
        classification=classification,
        can_reach_top=can_reach_top,
        can_reach_bot=can_reach_bot,
        state_count=machine.num_states,
        giveup_state_count=giveup_count,
        ugly_witness=witness,
    )


def _shortest_giveup_trace(machine: MooreMonitor) -> tuple[str, ...] | None:
    """Breadth-first search for a give-up state; expanding events in alphabet
    order makes the witness the lexicographically least among the shortest."""
    if machine.outputs[machine.initial] is Verdict.GIVEUP:
        return ()
    parent: dict[int, tuple[int, str] | None] = {machine.initial: None}
    queue = deque([machine.initial])
    while queue:
        q = queue.popleft()
        for k, event in enumerate(machine.alphabet):
            dst = machine.delta[q][k]
            if dst in parent:
                continue
            parent[dst] = (q, event)
            if machine.outputs[dst] is Verdict.GIVEUP:
                path = []
                node = dst
                while True:
                    step = parent[node]
                    if step is None:
                        break
                    node, ev = step
                    path.append(ev)
                return tuple(reversed(path))
            queue.append(dst)
    return None
