"""The bundled corpus: .ho files plus a JSON manifest of golden verdicts."""
from dataclasses import dataclass
import json
import os
from typing import Optional

from django.conf import settings

from heardof.core.errors import HocError
from heardof.core.types import Fragment, Outcome
from heardof.dsl.parser import parse_file

__all__ = ['CorpusEntry', 'corpus_entries', 'entry_by_id', 'load_entry', 'MANIFEST']

MANIFEST = 'manifest.json'


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    path: str
    fragment: Fragment
    verdict: Outcome
    reasons: tuple = ()
    witness_pair: Optional[tuple] = None
    witness_kind: Optional[str] = None
    witness_n: Optional[int] = None
    origin: str = ''

    @classmethod
    def from_json(cls, directory, data):
        witness = data.get('witness') or {}
        pair = data.get('witness_pair')
        return cls(
            id=data['id'],
            path=os.path.join(directory, data['file']),
            fragment=Fragment(data['fragment']),
            verdict=Outcome(data['verdict']),
            reasons=tuple(data.get('reasons', ())),
            witness_pair=tuple(pair) if pair else None,
            witness_kind=witness.get('kind'),
            witness_n=witness.get('n'),
            origin=data.get('origin', ''))

    def to_json(self):
        data = {
            'id': self.id,
            'file': os.path.basename(self.path),
            'fragment': self.fragment.value,
            'verdict': self.verdict.value,
            'reasons': list(self.reasons),
            'origin': self.origin,
        }
        if self.witness_pair:
            data['witness_pair'] = list(self.witness_pair)
        if self.witness_kind:
            data['witness'] = {'kind': self.witness_kind, 'n': self.witness_n}
        return data


def corpus_entries(directory=None):
    """Entries of the manifest in ``directory`` (the bundled corpus by default), in order."""
    directory = directory or settings.HOC_CORPUS_DIR
    path = os.path.join(directory, MANIFEST)
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise HocError("cannot read corpus manifest %s: %s" % (path, e))
    return [CorpusEntry.from_json(directory, row) for row in data['entries']]


def entry_by_id(entry_id, directory=None):
    for entry in corpus_entries(directory):
        if entry.id == entry_id:
            return entry
    raise KeyError(entry_id)


def load_entry(entry):
    return parse_file(entry.path)
