"""Instruction ordering.

Under first-match semantics the uni and mult guards never hold on the same
H, so the two groups can be separated freely. On a uni H every operation
returns the single value heard, so all uni instructions collapse into the
one with the smallest threshold. Mult instructions keep their order unless
they all share an operation.
"""
from functools import lru_cache
import itertools

from heardof.core.types import Guard
from heardof.sim.profiles import A, B, UNDEF
from heardof.sim.semantics import update_value

import logging
logger = logging.getLogger(__name__)

__all__ = ['canonicalize_round', 'canonicalize_rounds', 'is_canonical', 'same_updates',
    'CHECK_MAX_N']

CHECK_MAX_N = 6

_KEYS = ((A, 0), (A, 1), (B, 0), (B, 1), (UNDEF, 0))


def _heard_of(n):
    for counts in itertools.product(range(n + 1), repeat=len(_KEYS)):
        if sum(counts) <= n:
            yield tuple((key, c) for key, c in zip(_KEYS, counts) if c)


@lru_cache(maxsize=None)
def same_updates(before, after):
    """True if both instruction lists compute the same value on every H, n <= 6."""
    for n in range(1, CHECK_MAX_N + 1):
        for h in _heard_of(n):
            if update_value(before, h, n) is not update_value(after, h, n):
                return False
    return True


def _undominated(instructions):
    kept = []
    for ins in instructions:
        if any(prev.threshold <= ins.threshold for prev in kept):
            continue
        kept.append(ins)
    return kept


def _canonical_instructions(instructions):
    unis = [ins for ins in instructions if ins.guard is Guard.UNI]
    mults = [ins for ins in instructions if ins.guard is Guard.MULT]
    result = []
    if unis:
        result.append(min(unis, key=lambda ins: ins.threshold))
    if len({ins.operation for ins in mults}) <= 1:
        seen = set()
        for ins in sorted(mults, key=lambda ins: ins.threshold, reverse=True):
            if ins.threshold not in seen:
                seen.add(ins.threshold)
                result.append(ins)
    else:
        result.extend(_undominated(mults))
    return tuple(result)


def is_canonical(rnd):
    return _canonical_instructions(rnd.instructions) == rnd.instructions


def canonicalize_round(rnd):
    """The canonical form of ``rnd``, or None when the rewrite cannot be confirmed."""
    instructions = _canonical_instructions(rnd.instructions)
    if instructions == rnd.instructions:
        return rnd
    if not same_updates(rnd.instructions, instructions):
        logger.warning("round %d: canonical form changes the update function, left as is"
            % rnd.index)
        return None
    return rnd.replace(instructions=instructions)


def canonicalize_rounds(alg, rewrites=None, abstained=None):
    """Canonicalizes every round; rounds that cannot be rewritten stay untouched.

    Rewrite descriptions and the indexes of untouched rounds are appended to
    the optional ``rewrites`` and ``abstained`` lists.
    """
    for rnd in alg.rounds:
        canonical = canonicalize_round(rnd)
        if canonical is None:
            if abstained is not None:
                abstained.append(rnd.index)
            continue
        if canonical is not rnd:
            if rewrites is not None:
                rewrites.append("round %d: instructions reordered to [%s]" % (
                    rnd.index, ', '.join(str(ins) for ins in canonical.instructions)))
            alg = alg.replace_round(canonical)
    return alg
