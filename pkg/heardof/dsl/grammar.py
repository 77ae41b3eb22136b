"""
pyparsing grammar for instance files (.ho).

An instance file holds one algorithm followed by its communication
predicate. Parse actions turn the matched text into the small node classes
below; ``heardof.dsl.parser`` validates them and builds the model types.
"""
from dataclasses import dataclass, field
from typing import Optional

import pyparsing as pp

__all__ = ['instance_file', 'RatToken', 'SendNode', 'InstrNode', 'RoundNode',
    'EntryNode', 'TupleNode', 'PredicateNode', 'AlgorithmNode']


@dataclass
class RatToken:
    num: int
    den: int
    loc: int
    text: str = ''


@dataclass
class SendNode:
    inp: bool
    ts: bool = False
    var: Optional[str] = None
    loc: int = 0


@dataclass
class InstrNode:
    guard: str
    size: Optional[RatToken]
    target: str
    sets_inp: bool
    op: str
    start: int = 0
    end: int = 0


@dataclass
class RoundNode:
    index: int
    rtype: str
    send: SendNode
    instrs: list = field(default_factory=list)
    start: int = 0
    end: int = 0


@dataclass
class EntryNode:
    atoms: list
    start: int = 0
    end: int = 0


@dataclass
class TupleNode:
    entries: list
    start: int = 0
    end: int = 0


@dataclass
class PredicateNode:
    global_tuple: TupleNode
    sporadics: list
    start: int = 0
    end: int = 0


@dataclass
class AlgorithmNode:
    name: str
    rounds: list
    start: int = 0
    end: int = 0


def _located(expr):
    """Wrap ``expr`` so the node it builds records where it starts and ends."""
    def action(toks):
        node = toks['value'][0]
        node.start = toks['locn_start']
        node.end = toks['locn_end']
        return node
    return pp.Located(expr).set_parse_action(action)

def _rat(s, loc, toks):
    text = toks[0]
    num, _, den = text.partition('/')
    return RatToken(int(num), int(den) if den else 1, loc, text)

def _send(s, loc, toks):
    if 'var' in toks:
        return SendNode(inp=False, var=toks['var'], loc=loc)
    return SendNode(inp=True, ts='ts' in toks, loc=loc)

def _instr(toks):
    return InstrNode(
        guard=toks['guard'],
        size=toks.get('size'),
        target=toks['target'],
        sets_inp='sets_inp' in toks,
        op=toks['op'])

def _round(toks):
    return RoundNode(index=int(toks[0]), rtype=toks[1], send=toks[2], instrs=list(toks[3:]))

def _entry(toks):
    return EntryNode(atoms=[t for t in toks if t != 'true'])


LBRACE, RBRACE, LPAR, RPAR, SEMI, COMMA, COLON = map(pp.Suppress, '{}();,:')
ASSIGN = pp.Suppress(':=')
AND = pp.Suppress('&&')
H = pp.Suppress(pp.Keyword('H'))

# INT ::= [0-9]+
INT = pp.Word(pp.nums)

# RAT ::= INT "/" INT | INT
RAT = pp.Regex(r'\d+(?:\s*/\s*\d+)?').set_name('rational').set_parse_action(_rat)

# IDENT
IDENT = pp.Word(pp.alphas, pp.alphanums + '_').set_name('identifier')

STRING = pp.QuotedString('"', esc_char='\\').set_name('quoted name')

# rtype ::= "every" | "lr" | "ls"
rtype = pp.Keyword('every') | pp.Keyword('lr') | pp.Keyword('ls')

# target ::= "(" "inp" ("," "ts")? ")" | IDENT
target = (
    (LPAR + pp.Suppress(pp.Keyword('inp')) + pp.Optional(COMMA + pp.Keyword('ts')('ts')) + RPAR)
    | IDENT('var'))

# send ::= "send" target ";"
send = (pp.Suppress(pp.Keyword('send')) + target + SEMI).set_parse_action(_send)

# guard ::= "uni" "(" "H" ")" | "mult" "(" "H" ")"
guard = (pp.Keyword('uni') | pp.Keyword('mult'))('guard') + LPAR + H + RPAR

# size ::= "|H|" ">" RAT
size = pp.Suppress(pp.Literal('|H|')) + pp.Suppress('>') + RAT('size')

# assigns ::= IDENT (":=" "inp")? | "dec"
assigns = pp.Keyword('dec')('target') | (
    IDENT('target') + pp.Optional(ASSIGN + pp.Keyword('inp')('sets_inp')))

# op ::= "min" | "smor" | "maxts"
op = (pp.Keyword('min') | pp.Keyword('smor') | pp.Keyword('maxts'))('op')

# instr ::= "if" guard ("&&" size)? "then" assigns ":=" op "(" "H" ")" ";"
instr = (pp.Suppress(pp.Keyword('if')) + guard + pp.Optional(AND + size)
    + pp.Suppress(pp.Keyword('then')) + assigns + ASSIGN + op + LPAR + H + RPAR + SEMI
    ).set_parse_action(_instr)

# round ::= "round" INT rtype? "{" send instr* "}"
round_ = (pp.Suppress(pp.Keyword('round')) + INT + pp.Optional(rtype, default='every')
    + LBRACE + send + pp.ZeroOrMore(_located(instr)) + RBRACE).set_parse_action(_round)

# algorithm ::= "algorithm" STRING "{" round+ "}"
algorithm = (pp.Suppress(pp.Keyword('algorithm')) + STRING + LBRACE
    + pp.OneOrMore(_located(round_)) + RBRACE
    ).set_parse_action(lambda toks: AlgorithmNode(name=toks[0], rounds=list(toks[1:])))

# patom ::= "eq" | "ls" | "thr" RAT
patom = pp.Keyword('eq') | pp.Keyword('ls') | (pp.Suppress(pp.Keyword('thr')) + RAT)

# pentry ::= "true" | patom ("&&" patom)*
pentry = (pp.Keyword('true') | (patom + pp.ZeroOrMore(AND + patom))).set_parse_action(_entry)

# ptuple ::= "(" pentry ("," pentry)* ")"
ptuple = (LPAR + _located(pentry) + pp.ZeroOrMore(COMMA + _located(pentry)) + RPAR
    ).set_parse_action(lambda toks: TupleNode(entries=list(toks)))

# predicate ::= "predicate" "{" "global" ":" ptuple ";" ("sporadic" ":" (ptuple ("," ptuple)*)? ";")? "}"
sporadic = (pp.Suppress(pp.Keyword('sporadic')) + COLON
    + pp.Optional(_located(ptuple) + pp.ZeroOrMore(COMMA + _located(ptuple))) + SEMI)
predicate = (pp.Suppress(pp.Keyword('predicate')) + LBRACE
    + pp.Suppress(pp.Keyword('global')) + COLON + _located(ptuple) + SEMI
    + pp.Optional(sporadic) + RBRACE
    ).set_parse_action(lambda toks: PredicateNode(global_tuple=toks[0], sporadics=list(toks[1:])))

# file ::= algorithm predicate
instance_file = _located(algorithm) + _located(predicate) + pp.StringEnd()
instance_file.ignore(pp.python_style_comment)
