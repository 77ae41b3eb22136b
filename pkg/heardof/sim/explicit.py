"""Explicit-state engine for tiny n.

Processes keep their identity, timestamps are real phase numbers, and every
heard-of multiset is built from a subset of the senders. Nothing is shared
with the counting abstraction except ``update_value`` and the ls delivery
rule, which makes this engine a reference to test the abstraction against.
"""
from collections import Counter
from functools import lru_cache
import itertools
from typing import NamedTuple

from heardof.core.errors import BoundTooLarge
from heardof.core.types import RoundType
from heardof.sim.profiles import A, B, UNDEF, Profile, AbstractConfig
from heardof.sim.semantics import delivered, update_value

import logging
logger = logging.getLogger(__name__)

__all__ = ['EXPLICIT_MAX_N', 'ProcessState', 'explicit_initials', 'explicit_phase',
    'explicit_reachable', 'project']

EXPLICIT_MAX_N = 3


class ProcessState(NamedTuple):
    inp: object
    ts: int
    dec: object


def explicit_initials(n):
    return [tuple(ProcessState(v, 0, UNDEF) for v in values)
        for values in itertools.product((A, B), repeat=n)]


@lru_cache(maxsize=None)
def _outputs(instructions, messages, thr, n):
    """Values one process can compute from the ``messages`` sent to it."""
    values = set()
    for mask in itertools.product((False, True), repeat=len(messages)):
        h = Counter(m for m, keep in zip(messages, mask) if keep)
        if thr.admits(sum(h.values()), n):
            values.add(update_value(instructions, tuple(sorted(h.items())), n))
    return tuple(sorted(values))


def _round_outputs(rnd, entry, messages, sent, leader, n):
    """Yields (values received by each process, leader) pairs for one round."""
    if rnd.rtype is RoundType.LS:
        for p in ([leader] if leader is not None else range(n)):
            value = delivered(rnd, sent[p])
            if entry.has_ls:
                yield (value,) * n, None
            else:
                for combo in itertools.product((value, UNDEF), repeat=n):
                    yield combo, None
        return
    outputs = _outputs(rnd.instructions, tuple(sorted(messages)), entry.thr, n)
    if rnd.rtype is RoundType.LR:
        for p in range(n):
            for v in outputs:
                yield tuple(v if q == p else UNDEF for q in range(n)), p
    elif entry.has_eq:
        for v in outputs:
            yield (v,) * n, None
    else:
        for combo in itertools.product(outputs, repeat=n):
            yield combo, None


def explicit_phase(alg, phi, state, phase_number):
    """Every per-process state one phase under ``phi`` can lead to."""
    n = len(state)
    frontier = {(None, None, None)}
    for i in range(1, alg.r + 1):
        rnd = alg.round(i)
        following = set()
        for x_ir, x_prev, leader in frontier:
            if i == 1:
                messages = [(s.inp, s.ts if alg.timestamps else 0) for s in state]
                sent = tuple(s.inp for s in state)
            else:
                messages = [(v, 0) for v in x_prev]
                sent = x_prev
            for out, new_leader in _round_outputs(rnd, phi.entry(i), messages, sent, leader, n):
                following.add((out if i == alg.ir else x_ir, out, new_leader))
        frontier = following

    successors = set()
    for x_ir, x_r, _ in frontier:
        successors.add(tuple(
            ProcessState(
                s.inp if x_ir[p] is UNDEF else x_ir[p],
                s.ts if x_ir[p] is UNDEF else phase_number,
                s.dec if s.dec is not UNDEF else x_r[p])
            for p, s in enumerate(state)))
    return successors


def project(alg, state):
    counter = Counter(Profile(s.inp, s.ts if alg.timestamps else 0, s.dec) for s in state)
    return AbstractConfig.build(len(state), counter)


def explicit_reachable(instance, n, depth):
    """Projections of every explicit state reachable within ``depth`` global phases."""
    if n > EXPLICIT_MAX_N:
        raise BoundTooLarge(n, EXPLICIT_MAX_N,
            "the explicit engine only runs for n <= %d" % EXPLICIT_MAX_N)
    alg = instance.algorithm
    phi = instance.spec.global_predicate
    seen = set(explicit_initials(n))
    frontier = set(seen)
    for phase_number in range(1, depth + 1):
        following = set()
        for state in frontier:
            following |= explicit_phase(alg, phi, state, phase_number) - seen
        seen |= following
        frontier = following
        logger.debug("explicit engine: %d states after %d phase(s)" % (len(seen), phase_number))
    return {project(alg, state) for state in seen}
