"""State for the counting abstraction.

A configuration only records how many processes share each profile
(inp value, timestamp rank, dec value); process identities never matter
to the semantics, so nothing else is needed.
"""
from collections import Counter
from dataclasses import dataclass
import enum
import itertools
from typing import NamedTuple

__all__ = ['Value', 'A', 'B', 'UNDEF', 'Profile', 'AbstractConfig', 'RoundCounts',
    'compositions', 'vectors_supported_on', 'all_sub_counts']


class Value(enum.IntEnum):
    A = 0
    B = 1
    UNDEF = 2

    def __str__(self):
        return ('a', 'b', '?')[self]

    @classmethod
    def parse(cls, s):
        return {'a': cls.A, 'b': cls.B, '?': cls.UNDEF}[s]

A, B, UNDEF = Value.A, Value.B, Value.UNDEF


class Profile(NamedTuple):
    inp: Value
    rank: int
    dec: Value

    def __str__(self):
        return '%s@%d/%s' % (self.inp, self.rank, self.dec)


class RoundCounts(NamedTuple):
    a: int
    b: int
    q: int

    @classmethod
    def uniform(cls, value, n):
        counts = [0, 0, 0]
        counts[value] = n
        return cls(*counts)

    @classmethod
    def one(cls, value, n):
        """One process holds ``value``, everybody else ?."""
        if value is UNDEF:
            return cls(0, 0, n)
        counts = [0, 0, n - 1]
        counts[value] += 1
        return cls(*counts)

    def values(self):
        return [v for v in Value if self[v]]

    def pool(self):
        """The heard-of pool for the next round; x variables carry no timestamps."""
        return tuple(((v, 0), self[v]) for v in Value if self[v])

    def __str__(self):
        return '(%d,%d,%d)' % self


def compositions(total, parts):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def vectors_supported_on(values, n):
    values = sorted(values)
    for combo in compositions(n, len(values)):
        counts = [0, 0, 0]
        for v, c in zip(values, combo):
            counts[v] = c
        yield RoundCounts(*counts)


@dataclass(frozen=True)
class AbstractConfig:
    n: int
    counts: tuple  # sorted ((Profile, count), ...) with count > 0
    sporadic_index: int = 0

    @classmethod
    def build(cls, n, counter, sporadic_index=0):
        """Builds a configuration from a Profile -> count mapping, compressing ranks."""
        ranks = sorted({p.rank for p, c in counter.items() if c})
        remap = {rank: i for i, rank in enumerate(ranks)}
        merged = Counter()
        for p, c in counter.items():
            if c:
                merged[Profile(p.inp, remap[p.rank], p.dec)] += c
        assert sum(merged.values()) == n, "profile counts must sum to n"
        return cls(n, tuple(sorted(merged.items())), sporadic_index)

    @classmethod
    def initial(cls, n, n_b):
        counter = Counter({Profile(A, 0, UNDEF): n - n_b, Profile(B, 0, UNDEF): n_b})
        return cls.build(n, counter)

    @classmethod
    def initials(cls, n):
        return [cls.initial(n, n_b) for n_b in range(n + 1)]

    def with_index(self, k):
        return AbstractConfig(self.n, self.counts, k)

    def profiles(self):
        return [p for p, _ in self.counts]

    def counter(self):
        return Counter(dict(self.counts))

    def inp_pool(self):
        """Round-one pool: (inp value, rank) -> count."""
        pool = Counter()
        for p, c in self.counts:
            pool[(p.inp, p.rank)] += c
        return tuple(sorted(pool.items()))

    @property
    def max_rank(self):
        return max(p.rank for p, _ in self.counts)

    def decided(self):
        return {p.dec for p, _ in self.counts if p.dec is not UNDEF}

    @property
    def has_disagreement(self):
        return self.decided() == {A, B}

    @property
    def fully_decided(self):
        return all(p.dec is not UNDEF for p, _ in self.counts)

    def dec_counts(self):
        tally = [0, 0, 0]
        for p, c in self.counts:
            tally[p.dec] += c
        return tuple(tally)

    def sort_key(self):
        return (self.sporadic_index, self.counts)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self):
        return [{'inp': str(p.inp), 'rank': p.rank, 'dec': str(p.dec), 'count': c}
            for p, c in self.counts]

    @classmethod
    def from_json(cls, n, data, sporadic_index=0):
        counter = Counter()
        for row in data:
            counter[Profile(Value.parse(row['inp']), row['rank'], Value.parse(row['dec']))] += row['count']
        return cls.build(n, counter, sporadic_index)

    def __str__(self):
        return '{%s}' % ', '.join('%s x%d' % (p, c) for p, c in self.counts)


def all_sub_counts(counts):
    """Every tuple (h_1, ..., h_m) with 0 <= h_i <= counts[i]."""
    return itertools.product(*(range(c + 1) for c in counts))
