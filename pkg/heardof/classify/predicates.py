"""Round and phase-predicate classifiers.

All of these are pure functions of the round facts and a phase predicate.
The ``coordinators`` flag switches to the c-variants, in which a leader-send
round is judged by whether the predicate guarantees the leader's message
(``ls``) rather than by thresholds.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

from heardof.core.types import threshold_ge
from heardof.classify.facts import border_key

__all__ = ['is_preserving', 'is_solo_safe', 'c_variants', 'CVariants',
    'is_decider', 'is_c_decider', 'unifier_position', 'is_unifier', 'is_c_unifier',
    'is_strong_unifier', 'is_strong_c_unifier', 'first_round_condition',
    'RoundClass', 'PredicateFacts', 'predicate_facts']


def is_preserving(i, phi, facts):
    """True when round i can turn a ?-free tuple into one holding ?."""
    fact = facts.round(i)
    if not fact.has_uni or not fact.has_mult:
        return True
    return phi.thr(i).key < max(fact.thr_u.key, fact.thr_m_min.key)


def is_solo_safe(i, phi, facts):
    fact = facts.round(i)
    return fact.has_uni and threshold_ge(phi.thr(i), fact.thr_u)


class CVariants(NamedTuple):
    c_preserving: bool
    c_solo_safe: bool
    c_equalizer: bool


def c_variants(i, phi, facts):
    entry = phi.entry(i)
    c_equalizer = entry.has_eq or entry.has_ls
    if facts.round(i).is_ls:
        return CVariants(not entry.has_ls, entry.has_ls, c_equalizer)
    return CVariants(is_preserving(i, phi, facts), is_solo_safe(i, phi, facts), c_equalizer)


def _preserving(i, phi, facts, coordinators):
    return c_variants(i, phi, facts).c_preserving if coordinators else is_preserving(i, phi, facts)


def _solo_safe(i, phi, facts, coordinators):
    return c_variants(i, phi, facts).c_solo_safe if coordinators else is_solo_safe(i, phi, facts)


def _equalizer(i, phi, coordinators):
    entry = phi.entry(i)
    return entry.has_eq or (coordinators and entry.has_ls)


def is_decider(phi, facts, coordinators=False):
    return all(_solo_safe(i, phi, facts, coordinators) for i in range(1, facts.r + 1))


def is_c_decider(phi, facts):
    return is_decider(phi, facts, coordinators=True)


def first_round_condition(phi, facts, strong=False):
    """thr_1 >= thr_m^{1,k}, and thr_1 >= thr_u^1 or thr_1 >= the border threshold.

    The strong variant has no border alternative.
    """
    thr = phi.thr(1)
    first = facts.round(1)
    if not threshold_ge(thr, first.thr_m_min):
        return False
    if threshold_ge(thr, first.thr_u):
        return True
    return not strong and not thr.is_absent and thr.value >= border_key(facts)


def unifier_position(phi, facts, coordinators=False, strong=False) -> Optional[int]:
    """The first equalizer position that makes ``phi`` a (strong, c-) unifier.

    Round i itself has to be non-preserving too, unless i = 1.
    """
    if not first_round_condition(phi, facts, strong):
        return None
    ir = facts.ir
    for i in range(1, ir + 1):
        if not _equalizer(i, phi, coordinators):
            continue
        if any(_preserving(l, phi, facts, coordinators) for l in range(2, i + 1)):
            continue
        if all(_solo_safe(l, phi, facts, coordinators) for l in range(i + 1, ir + 1)):
            return i
    return None


def is_unifier(phi, facts):
    return unifier_position(phi, facts) is not None


def is_c_unifier(phi, facts):
    return unifier_position(phi, facts, coordinators=True) is not None


def is_strong_unifier(phi, facts):
    return unifier_position(phi, facts, strong=True) is not None


def is_strong_c_unifier(phi, facts):
    return unifier_position(phi, facts, coordinators=True, strong=True) is not None


@dataclass(frozen=True)
class RoundClass:
    index: int
    preserving: bool
    solo_safe: bool
    equalizer: bool
    c_preserving: bool
    c_solo_safe: bool
    c_equalizer: bool

    def to_json(self):
        return {
            'round': self.index,
            'preserving': self.preserving,
            'solo_safe': self.solo_safe,
            'equalizer': self.equalizer,
            'c_preserving': self.c_preserving,
            'c_solo_safe': self.c_solo_safe,
            'c_equalizer': self.c_equalizer,
        }


@dataclass(frozen=True)
class PredicateFacts:
    name: str
    rounds: tuple
    unifier: Optional[int]
    decider: bool

    def to_json(self):
        return {
            'predicate': self.name,
            'rounds': [rc.to_json() for rc in self.rounds],
            'unifier_position': self.unifier,
            'decider': self.decider,
        }


def predicate_facts(name, phi, facts, coordinators=False, strong=False) -> PredicateFacts:
    rounds = []
    for i in range(1, facts.r + 1):
        c = c_variants(i, phi, facts)
        rounds.append(RoundClass(i, is_preserving(i, phi, facts), is_solo_safe(i, phi, facts),
            phi.entry(i).has_eq, c.c_preserving, c.c_solo_safe, c.c_equalizer))
    return PredicateFacts(name, tuple(rounds),
        unifier_position(phi, facts, coordinators, strong),
        is_decider(phi, facts, coordinators))
