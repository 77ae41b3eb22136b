"""Turns instance files into model types.

The grammar only knows the shape of a file. Everything that depends on
round positions (send chain, which round updates inp, where dec is set)
is checked here so errors can point at the offending round.
"""
from dataclasses import dataclass
from fractions import Fraction

import pyparsing as pp

from heardof.core.errors import HocError, StructureError
from heardof.core.types import (Algorithm, CommSpec, Guard, Instance, Instruction,
    Operation, PhasePredicate, PredicateEntry, Round, RoundType, Threshold, ABSENT)
from heardof.dsl import grammar

import logging
logger = logging.getLogger(__name__)

__all__ = ['parse', 'parse_instance', 'parse_file', 'ParseError', 'SourceSpan']


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int  # byte offsets into the UTF-8 text
    end: int

    @classmethod
    def at(cls, text, start, end=None):
        start = max(0, min(start, len(text)))
        end = start if end is None else max(start, min(end, len(text)))
        return cls(
            line=pp.lineno(start, text) if text else 1,
            column=pp.col(start, text) if text else 1,
            start=len(text[:start].encode('utf-8')),
            end=len(text[:end].encode('utf-8')))

    def __str__(self):
        return '%d:%d' % (self.line, self.column)


class ParseError(HocError):

    def __init__(self, span, message, expected=None, structural=False):
        super(ParseError, self).__init__('%s: %s' % (span, message))
        self.span = span
        self.message = message or 'syntax error'
        self.expected = list(expected or [])
        self.structural = structural


def _error(text, message, start, end=None):
    return ParseError(SourceSpan.at(text, start, end), message, structural=True)


def _threshold(text, token):
    if token.den == 0:
        raise _error(text, "malformed rational %s: zero denominator" % token.text, token.loc)
    value = Fraction(token.num, token.den)
    if not (0 <= value < 1):
        raise _error(text, "threshold %s must be in [0, 1)" % value, token.loc)
    return Threshold(value)


def _build_round(text, node, position, last):
    if node.index != position:
        raise _error(text, "expected round %d, found round %d" % (position, node.index),
            node.start, node.end)
    rtype = RoundType(node.rtype)
    send = node.send
    if position == 1:
        if not send.inp:
            raise _error(text, "round 1 must send (inp) or (inp, ts)", send.loc)
    elif send.inp or send.var != 'x%d' % (position - 1):
        raise _error(text, "round %d must send x%d" % (position, position - 1), send.loc)

    instructions = []
    inp_flags = set()
    for ins in node.instrs:
        if ins.target == 'dec':
            if not last:
                raise _error(text, "dec can only be set in the last round", ins.start, ins.end)
        elif last:
            raise _error(text, "the last round must assign dec, not %s" % ins.target,
                ins.start, ins.end)
        elif ins.target != 'x%d' % position:
            raise _error(text, "round %d must assign x%d, not %s" % (position, position, ins.target),
                ins.start, ins.end)
        inp_flags.add(ins.sets_inp)
        if ins.size is None:
            threshold = Threshold(Fraction(0))
        else:
            threshold = _threshold(text, ins.size)
        instructions.append(Instruction(Guard(ins.guard), threshold, Operation(ins.op)))
    if len(inp_flags) > 1:
        raise _error(text, "either every instruction of round %d updates inp or none does"
            % position, node.start, node.end)
    return Round(index=position, rtype=rtype, instructions=instructions,
        sets_inp=inp_flags == {True}, sets_dec=last), send.ts


def _build_algorithm(text, node):
    rounds = []
    timestamps = False
    r = len(node.rounds)
    by_index = {}
    for position, rnode in enumerate(node.rounds, start=1):
        try:
            rnd, ts = _build_round(text, rnode, position, position == r)
        except StructureError as e:
            raise _error(text, e.message, rnode.start, rnode.end)
        if position == 1:
            timestamps = ts
        rounds.append(rnd)
        by_index[position] = rnode
    if r >= 2 and not any(rnd.sets_inp for rnd in rounds):
        raise _error(text, "no round updates inp (expected x_i := inp := ...)", node.start, node.end)
    try:
        return Algorithm(node.name, rounds, timestamps)
    except StructureError as e:
        rnode = by_index.get(e.round, node)
        raise _error(text, e.message, rnode.start, rnode.end)


def _build_entry(text, node):
    has_eq = has_ls = False
    thr = ABSENT
    for atom in node.atoms:
        if atom == 'eq':
            has_eq = True
        elif atom == 'ls':
            has_ls = True
        else:
            thr = max(thr, _threshold(text, atom))
    return PredicateEntry(has_eq, has_ls, thr)


def _build_predicate(text, node):
    return PhasePredicate(_build_entry(text, e) for e in node.entries)


def parse_instance(text: str) -> Instance:
    try:
        alg_node, pred_node = grammar.instance_file.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        element = getattr(e, 'parser_element', None)
        expected = [str(element)] if element is not None else []
        raise ParseError(SourceSpan.at(text, e.loc), e.msg, expected)

    algorithm = _build_algorithm(text, alg_node)
    global_predicate = _build_predicate(text, pred_node.global_tuple)
    sporadics = [_build_predicate(text, t) for t in pred_node.sporadics]
    try:
        spec = CommSpec(global_predicate, sporadics)
        return Instance(algorithm, spec)
    except StructureError as e:
        raise _error(text, e.message, pred_node.start, pred_node.end)


def parse(text: str):
    """Returns (Algorithm, CommSpec)."""
    instance = parse_instance(text)
    return instance.algorithm, instance.spec


def parse_file(path) -> Instance:
    with open(path, encoding='utf-8') as f:
        text = f.read()
    logger.debug("parsing %s" % path)
    return parse_instance(text)
