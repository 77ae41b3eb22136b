"""Domain types shared by the parser, normalizer, classifiers, verdict
engine and simulator.

Everything here is an immutable value. Thresholds are exact rationals;
an instruction fires on ``|H| > thr * n`` which is decided with the integer
test ``size * denominator > numerator * n``.
"""
from dataclasses import dataclass, field
import enum
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Optional

from heardof.core.errors import MalformedRational, StructureError

__all__ = ['rat', 'threshold_ge', 'Threshold', 'ABSENT', 'Guard', 'Operation',
    'RoundType', 'Fragment', 'Instruction', 'Round', 'Algorithm',
    'PredicateEntry', 'PhasePredicate', 'CommSpec', 'Instance',
    'Outcome', 'Reason', 'Verdict']

def rat(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise MalformedRational("denominator is zero in %s/%s" % (num, den))
    return Fraction(num, den)

_MINUS_ONE = Fraction(-1)

@total_ordering
@dataclass(frozen=True, eq=True)
class Threshold:
    """Either Absent or an exact rational in [0, 1).

    Absent orders strictly below every present value, zero included.
    """
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.value is not None:
            if not isinstance(self.value, Fraction):
                object.__setattr__(self, 'value', Fraction(self.value))
            if not (0 <= self.value < 1):
                raise StructureError("threshold %s is outside [0, 1)" % self.value)

    @classmethod
    def present(cls, value) -> 'Threshold':
        return cls(Fraction(value))

    @property
    def is_absent(self) -> bool:
        return self.value is None

    @property
    def key(self) -> Fraction:
        return _MINUS_ONE if self.value is None else self.value

    def __lt__(self, other):
        if not isinstance(other, Threshold):
            return NotImplemented
        return self.key < other.key

    def admits(self, size: int, n: int) -> bool:
        """True if a multiset of ``size`` elements is larger than thr * n."""
        if self.value is None:
            return True
        return size * self.value.denominator > self.value.numerator * n

    def __str__(self):
        return 'absent' if self.value is None else str(self.value)

ABSENT = Threshold()

def threshold_ge(a: Threshold, b: Threshold) -> bool:
    return a.key >= b.key


class Guard(enum.Enum):
    UNI = 'uni'
    MULT = 'mult'

class Operation(enum.Enum):
    MIN = 'min'
    SMOR = 'smor'
    MAXTS = 'maxts'

class RoundType(enum.Enum):
    EVERY = 'every'
    LR = 'lr'
    LS = 'ls'

class Fragment(enum.Enum):
    CORE = 'core'
    TS = 'ts'
    COORD = 'coord'
    TS_COORD = 'ts_coord'

    @property
    def timestamps(self):
        return self in (Fragment.TS, Fragment.TS_COORD)

    @property
    def coordinators(self):
        return self in (Fragment.COORD, Fragment.TS_COORD)

    @classmethod
    def of(cls, timestamps, coordinators):
        if timestamps:
            return cls.TS_COORD if coordinators else cls.TS
        return cls.COORD if coordinators else cls.CORE


@dataclass(frozen=True)
class Instruction:
    guard: Guard
    threshold: Threshold
    operation: Operation

    def __str__(self):
        return '%s %s %s' % (self.guard.value, self.threshold, self.operation.value)


@dataclass(frozen=True)
class Round:
    index: int
    rtype: RoundType = RoundType.EVERY
    instructions: tuple = ()
    sets_inp: bool = False
    sets_dec: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'instructions', tuple(self.instructions))
        if self.rtype is RoundType.LS and self.mults:
            raise StructureError("ls rounds cannot have a mult instruction", self.index)

    @property
    def unis(self):
        return [ins for ins in self.instructions if ins.guard is Guard.UNI]

    @property
    def mults(self):
        return [ins for ins in self.instructions if ins.guard is Guard.MULT]

    @property
    def has_uni(self):
        return bool(self.unis)

    @property
    def has_mult(self):
        return bool(self.mults)

    def replace(self, **kwargs) -> 'Round':
        values = dict(index=self.index, rtype=self.rtype, instructions=self.instructions,
            sets_inp=self.sets_inp, sets_dec=self.sets_dec)
        values.update(kwargs)
        return Round(**values)


@dataclass(frozen=True)
class Algorithm:
    name: str
    rounds: tuple
    timestamps: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'rounds', tuple(self.rounds))
        self._validate()

    def _validate(self):
        rounds = self.rounds
        r = len(rounds)
        if r < 2:
            raise StructureError("an algorithm needs at least two rounds")
        for pos, rnd in enumerate(rounds, start=1):
            if rnd.index != pos:
                raise StructureError("round %d is numbered %d" % (pos, rnd.index), pos)
        inp_rounds = [rnd.index for rnd in rounds if rnd.sets_inp]
        if len(inp_rounds) != 1:
            raise StructureError("exactly one round must update inp, found %d" % len(inp_rounds))
        if inp_rounds[0] >= r:
            raise StructureError("inp cannot be updated in the last round", inp_rounds[0])
        for rnd in rounds:
            if rnd.sets_dec != (rnd.index == r):
                raise StructureError("dec can only be set in the last round", rnd.index)
        for rnd in rounds:
            if rnd.rtype is RoundType.LR:
                if rnd.index == r or rounds[rnd.index].rtype is not RoundType.LS:
                    raise StructureError("an lr round must be followed by an ls round", rnd.index)
                if rnd.sets_inp:
                    raise StructureError("inp cannot be updated in an lr round", rnd.index)
        for rnd in rounds:
            maxts = [ins for ins in rnd.instructions if ins.operation is Operation.MAXTS]
            if maxts and rnd.index != 1:
                raise StructureError("maxts is only allowed in the first round", rnd.index)
            if rnd.index == 1 and self.timestamps and len(maxts) != len(rnd.instructions):
                raise StructureError("every first-round instruction must use maxts "
                    "when inp carries a timestamp", 1)
            if rnd.index == 1 and maxts and not self.timestamps:
                raise StructureError("maxts needs the first round to send (inp, ts)", 1)

    @property
    def r(self) -> int:
        return len(self.rounds)

    @cached_property
    def ir(self) -> int:
        return [rnd.index for rnd in self.rounds if rnd.sets_inp][0]

    def round(self, i: int) -> Round:
        return self.rounds[i - 1]

    @cached_property
    def fragment(self) -> Fragment:
        return Fragment.of(self.timestamps,
            any(rnd.rtype is not RoundType.EVERY for rnd in self.rounds))

    def replace_round(self, rnd: Round) -> 'Algorithm':
        rounds = list(self.rounds)
        rounds[rnd.index - 1] = rnd
        return Algorithm(self.name, rounds, self.timestamps)


@dataclass(frozen=True)
class PredicateEntry:
    has_eq: bool = False
    has_ls: bool = False
    thr: Threshold = ABSENT

    @property
    def is_true(self):
        return not self.has_eq and not self.has_ls and self.thr.is_absent

    def conjoin(self, other: 'PredicateEntry') -> 'PredicateEntry':
        return PredicateEntry(self.has_eq or other.has_eq, self.has_ls or other.has_ls,
            max(self.thr, other.thr))

    def implies(self, other: 'PredicateEntry') -> bool:
        return ((self.has_eq or not other.has_eq)
            and (self.has_ls or not other.has_ls)
            and threshold_ge(self.thr, other.thr))

    def __str__(self):
        if self.is_true:
            return 'true'
        atoms = []
        if self.has_eq:
            atoms.append('eq')
        if self.has_ls:
            atoms.append('ls')
        if not self.thr.is_absent:
            atoms.append('thr %s' % self.thr)
        return ' && '.join(atoms)

TRUE = PredicateEntry()


@dataclass(frozen=True)
class PhasePredicate:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))

    def __len__(self):
        return len(self.entries)

    def entry(self, i: int) -> PredicateEntry:
        return self.entries[i - 1]

    def thr(self, i: int) -> Threshold:
        return self.entries[i - 1].thr

    def conjoin(self, other: 'PhasePredicate') -> 'PhasePredicate':
        return PhasePredicate(a.conjoin(b) for a, b in zip(self.entries, other.entries))

    def implies(self, other: 'PhasePredicate') -> bool:
        return all(a.implies(b) for a, b in zip(self.entries, other.entries))

    @property
    def has_equalizer(self):
        return any(e.has_eq for e in self.entries)

    @property
    def has_c_equalizer(self):
        return any(e.has_eq or e.has_ls for e in self.entries)

    def __str__(self):
        return '(%s)' % ', '.join(str(e) for e in self.entries)

    @classmethod
    def true(cls, r):
        return cls((TRUE,) * r)


@dataclass(frozen=True)
class CommSpec:
    global_predicate: PhasePredicate
    sporadics: tuple = ()

    def __post_init__(self):
        sporadics = tuple(self.sporadics)
        if not sporadics:
            sporadics = (self.global_predicate,)
        object.__setattr__(self, 'sporadics', sporadics)
        arity = len(self.global_predicate)
        for k, phi in enumerate(sporadics, start=1):
            if len(phi) != arity:
                raise StructureError("sporadic predicate %d has %d entries, the global one has %d"
                    % (k, len(phi), arity))

    @property
    def k(self):
        return len(self.sporadics)

    def predicates(self):
        """The global predicate followed by the sporadic ones, with display names."""
        yield 'global', self.global_predicate
        for k, phi in enumerate(self.sporadics, start=1):
            yield 'phi^%d' % k, phi


@dataclass(frozen=True)
class Instance:
    """An algorithm together with its communication predicate."""
    algorithm: Algorithm
    spec: CommSpec

    def __post_init__(self):
        alg = self.algorithm
        for name, phi in self.spec.predicates():
            if len(phi) != alg.r:
                raise StructureError("%s has %d entries but the algorithm has %d rounds"
                    % (name, len(phi), alg.r))
            for rnd, entry in zip(alg.rounds, phi.entries):
                if entry.has_ls and rnd.rtype is not RoundType.LS:
                    raise StructureError("%s uses ls on round %d, which is not an ls round"
                        % (name, rnd.index), rnd.index)
                if entry.has_eq and rnd.rtype is RoundType.LS:
                    raise StructureError("%s uses eq on the ls round %d" % (name, rnd.index),
                        rnd.index)

    @property
    def name(self):
        return self.algorithm.name

    def replace(self, algorithm=None, spec=None) -> 'Instance':
        return Instance(algorithm or self.algorithm, spec or self.spec)


class Outcome(enum.Enum):
    ACCEPT = 'accept'
    REJECT = 'reject'
    OUT_OF_FRAGMENT = 'out_of_fragment'


@dataclass(frozen=True)
class Reason:
    code: str
    round: Optional[int] = None
    detail: str = ''
    witness: Optional[str] = None  # 'agreement', 'termination', 'both'

    def __str__(self):
        if self.round is not None:
            return '%s(%d)' % (self.code, self.round)
        return self.code


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    reasons: tuple = ()
    witnesses: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'reasons', tuple(self.reasons))
        if self.outcome is not Outcome.ACCEPT and not self.reasons:
            raise StructureError("a %s verdict needs at least one reason" % self.outcome.value)

    @property
    def accepted(self):
        return self.outcome is Outcome.ACCEPT

    @property
    def codes(self):
        return [str(reason) for reason in self.reasons]
