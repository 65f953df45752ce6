"""Online execution of partial monitors: feed events, read verdicts, stop early.

A session owns its position in the machine; the machine itself is shared and
immutable, so many sessions can run over one monitor.  Once a session reaches
a conclusive or give-up state it is concluded: further events are absorbed
without changing the verdict, letting producers outlive the monitor.
"""

from __future__ import annotations

from typing import Sequence

from .fsm import MooreMonitor, Verdict
from .ltl import UnknownEventError
from .partial import NotPartializedError


class MonitorSession:
    """Single-owner stepping state over a partialized monitor.

    Not safe for concurrent use from multiple threads; safe to hand over
    between calls.
    """

    __slots__ = ("machine", "current", "steps")

    def __init__(self, machine: MooreMonitor):
        if not machine.partial:
            raise NotPartializedError(
                "cannot run a three-valued monitor; apply partialize() first"
            )
        self.machine = machine
        self.current = machine.initial
        self.steps = 0

    @property
    def verdict(self) -> Verdict:
        return self.machine.output(self.current)

    @property
    def concluded(self) -> bool:
        """True once the verdict can no longer change."""
        return self.verdict.is_final

    def step(self, event: str) -> Verdict:
        """Consume one event and return the verdict afterwards.

        After conclusion the event is ignored and the settled verdict is
        returned unchanged.
        """
        if event not in self.machine.alphabet:
            raise UnknownEventError(event, self.steps + 1)
        if self.concluded:
            return self.verdict
        self.current = self.machine.step(self.current, event)
        self.steps += 1
        return self.verdict


def start(machine: MooreMonitor) -> MonitorSession:
    """Open a session at the initial state.

    The session may be concluded immediately, e.g. a machine that gives up on
    the empty trace concludes GIVEUP before any event arrives.
    """
    return MonitorSession(machine)


def run_trace(
    machine: MooreMonitor, trace: Sequence[str], stop_early: bool = False
) -> list[tuple[int, Verdict]]:
    """Replay a finite trace, returning (1-based index, verdict) per event.

    With ``stop_early`` the replay halts at the first conclusive or give-up
    verdict and the remaining events are never consumed.
    """
    session = start(machine)
    results: list[tuple[int, Verdict]] = []
    for position, event in enumerate(trace, start=1):
        if stop_early and session.concluded:
            break
        if event not in machine.alphabet:
            raise UnknownEventError(event, position)
        results.append((position, session.step(event)))
    return results
