"""Round-level semantics.

A pool is a sorted tuple of ((value, rank), count) pairs: the multiset of
messages sent in a round. Ranks only matter for the first round of a
timestamp algorithm, where inp travels with its timestamp; everywhere else
they are 0. A heard-of multiset H is a pool of the same shape whose counts
are bounded by the pool's.
"""
from collections import Counter
from functools import lru_cache
import itertools

from heardof.core.types import Guard, Operation, RoundType
from heardof.sim.profiles import UNDEF, RoundCounts, vectors_supported_on

__all__ = ['update_value', 'sub_multisets', 'fire_choices', 'fire_set', 'delivered',
    'leader_value', 'senders', 'round_successors', 'last_round_choices', 'pool_values']


def update_value(instructions, h, n):
    """The value a process computes from the heard-of multiset ``h``.

    ? entries are ignored here; they only count for the predicate's size test.
    """
    heard = [(v, rank, c) for (v, rank), c in h if c and v is not UNDEF]
    if not heard:
        return UNDEF
    values = sorted({v for v, _, _ in heard})
    size = sum(c for _, _, c in heard)
    guard = Guard.UNI if len(values) == 1 else Guard.MULT
    for ins in instructions:
        if ins.guard is guard and ins.threshold.admits(size, n):
            return _apply(ins.operation, heard, values)
    return UNDEF


def _apply(operation, heard, values):
    if operation is Operation.MIN:
        return values[0]
    if operation is Operation.SMOR:
        freq = Counter()
        for v, _, c in heard:
            freq[v] += c
        top = max(freq.values())
        return min(v for v in values if freq[v] == top)
    latest = max(rank for _, rank, _ in heard)
    return min(v for v, rank, _ in heard if rank == latest)


def sub_multisets(pool):
    keys = [key for key, _ in pool]
    for counts in itertools.product(*(range(c + 1) for _, c in pool)):
        yield tuple(zip(keys, counts))


@lru_cache(maxsize=None)
def fire_choices(instructions, pool, thr, n):
    """Maps each value some admissible H produces to the first such H.

    H is admissible when its full size, ? included, passes ``thr``.
    """
    choices = {}
    for h in sub_multisets(pool):
        if not thr.admits(sum(c for _, c in h), n):
            continue
        value = update_value(instructions, h, n)
        choices.setdefault(value, h)
    return choices


def fire_set(instructions, pool, thr, n):
    return frozenset(fire_choices(tuple(instructions), pool, thr, n))


def pool_values(pool):
    return sorted({v for (v, _), c in pool if c})


def delivered(rnd, d):
    """What a process hearing the sender of ls round ``rnd`` ends up with."""
    if d is UNDEF or not rnd.has_uni:
        return UNDEF
    return d


def leader_value(pool):
    """The leader's value after an lr round: the single non-? entry, if any."""
    values = [v for v in pool_values(pool) if v is not UNDEF]
    return values[0] if len(values) == 1 else UNDEF


def senders(pool, after_lr):
    if after_lr:
        return [leader_value(pool)]
    return pool_values(pool)


@lru_cache(maxsize=None)
def round_successors(rnd, pool, entry, n, after_lr=False):
    """Every count vector the round can produce from ``pool`` under ``entry``."""
    if rnd.rtype is RoundType.LS:
        result = set()
        for d in senders(pool, after_lr):
            value = delivered(rnd, d)
            if entry.has_ls:
                result.add(RoundCounts.uniform(value, n))
            else:
                result.update(vectors_supported_on({value, UNDEF}, n))
        return frozenset(result)
    fire = fire_set(rnd.instructions, pool, entry.thr, n)
    if rnd.rtype is RoundType.LR:
        return frozenset(RoundCounts.one(v, n) for v in fire)
    if entry.has_eq:
        return frozenset(RoundCounts.uniform(v, n) for v in fire)
    return frozenset(vectors_supported_on(fire, n))


@lru_cache(maxsize=None)
def last_round_choices(rnd, pool, entry, n, after_lr=False):
    """The sets of values processes may pick from in the deciding round.

    Every process picks from one of the returned sets independently, so a
    singleton set means all processes end up with the same value.
    """
    if rnd.rtype is RoundType.LS:
        result = set()
        for d in senders(pool, after_lr):
            value = delivered(rnd, d)
            result.add(frozenset({value}) if entry.has_ls else frozenset({value, UNDEF}))
        return frozenset(result)
    fire = fire_set(rnd.instructions, pool, entry.thr, n)
    if entry.has_eq:
        return frozenset(frozenset({v}) for v in fire)
    return frozenset({fire})
