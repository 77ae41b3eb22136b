from dataclasses import dataclass, field
from typing import Optional

from django.conf import settings

from heardof.core.types import Fragment

__all__ = ['CliConfig', 'ENGINES', 'CHECKS', 'EXIT_OK', 'EXIT_REJECT', 'EXIT_OUT_OF_FRAGMENT',
    'EXIT_INPUT', 'EXIT_BOUND']

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_OUT_OF_FRAGMENT = 2
EXIT_INPUT = 3
EXIT_BOUND = 4

ENGINES = ('counting', 'explicit')
CHECKS = ('agreement', 'termination', 'both')


@dataclass(frozen=True)
class CliConfig:
    """Options of one hoc invocation. Output never depends on anything else."""
    command: str
    paths: tuple = ()
    fragment: Optional[Fragment] = None
    n: int = field(default_factory=lambda: settings.HOC_DEFAULT_N)
    depth: int = field(default_factory=lambda: settings.HOC_DEFAULT_DEPTH)
    engine: str = 'counting'
    output: str = 'text'
    check: str = 'both'
    strict: bool = False
    workers: int = field(default_factory=lambda: settings.HOC_THREADS)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("--n must be at least 2, got %d" % self.n)
        if self.depth < 1:
            raise ValueError("--depth must be at least 1, got %d" % self.depth)
        if self.engine not in ENGINES:
            raise ValueError("unknown engine %r" % self.engine)
        if self.check not in CHECKS:
            raise ValueError("unknown check %r" % self.check)
        if self.output not in ('text', 'json'):
            raise ValueError("unknown output format %r" % self.output)

    @property
    def json(self):
        return self.output == 'json'

    @property
    def kinds(self):
        if self.check == 'both':
            return ('agreement', 'termination')
        return (self.check,)

    @classmethod
    def from_options(cls, options):
        fragment = options.get('fragment')
        paths = options.get('paths') or ([options['path']] if options.get('path') else [])
        values = {
            'command': options['command'],
            'paths': tuple(paths),
            'fragment': Fragment(fragment) if fragment else None,
            'engine': options.get('engine') or 'counting',
            'output': 'json' if options.get('json') else 'text',
            'check': options.get('check') or 'both',
            'strict': bool(options.get('strict')),
        }
        for key in ('n', 'depth'):
            if options.get(key) is not None:
                values[key] = options[key]
        if options.get('threads'):
            values['workers'] = options['threads']
        return cls(**values)
