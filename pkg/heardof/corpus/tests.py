from fractions import Fraction
import json
import os
import tempfile

from django.test import SimpleTestCase

from heardof.core.errors import HocError
from heardof.core.types import Fragment, Outcome
from heardof.corpus.entries import MANIFEST, corpus_entries, entry_by_id, load_entry
from heardof.corpus.grid import (GRID, SMALL_GRID, grid_family, grid_id, predicate_grid_family,
    stamp_grid, stamp_predicate_grid)
from heardof.sim.search import check_agreement, check_termination
from heardof.sim.witness import AGREEMENT, TERMINATION
from heardof.verdict.engine import check_instance

REQUIRED = (
    'onethird-2-3', 'onethird-1-2_3-4', 'onethird-1-2_2-3', 'onethird-param-1-3_2-3_2-3',
    'timestamp-1-2', 'timestamp-1-2-weakened', 'timestamp-1-2-eq-round2',
    'paxos-4round', 'paxos-3round', 'coordinator-2-3', 'weak-unifier',
    'onethird-no-uni-round2', 'onethird-no-mult-round1', 'onethird-min-round1',
    'onethird-reordered', 'onethird-only-unifier', 'onethird-mult-round2',
    'onethird-global-eq',
)

SEARCHES = {AGREEMENT: check_agreement, TERMINATION: check_termination}


class ManifestTests(SimpleTestCase):

    def test_required_entries(self):
        ids = [entry.id for entry in corpus_entries()]
        self.assertEqual(len(ids), len(set(ids)))
        for entry_id in REQUIRED:
            self.assertIn(entry_id, ids)

    def test_files_exist(self):
        for entry in corpus_entries():
            self.assertTrue(os.path.exists(entry.path), entry.path)

    def test_goldens(self):
        for entry in corpus_entries():
            verdict, trace = check_instance(load_entry(entry))
            self.assertEqual(verdict.outcome, entry.verdict, entry.id)
            self.assertEqual(tuple(str(r) for r in verdict.reasons), entry.reasons, entry.id)
            self.assertEqual(trace.fragment, entry.fragment, entry.id)
            if entry.verdict is Outcome.ACCEPT:
                self.assertEqual(trace.witness_pair, entry.witness_pair, entry.id)

    def test_rejections_have_reasons(self):
        for entry in corpus_entries():
            if entry.verdict is not Outcome.ACCEPT:
                self.assertTrue(entry.reasons, entry.id)

    def test_witnesses(self):
        for entry in corpus_entries():
            if not entry.witness_kind or entry.verdict is not Outcome.REJECT:
                continue
            witness = SEARCHES[entry.witness_kind](load_entry(entry), entry.witness_n)
            self.assertIsNotNone(witness, entry.id)
            self.assertEqual(witness.kind, entry.witness_kind)

    def test_entry_by_id(self):
        entry = entry_by_id('paxos-4round')
        self.assertEqual(entry.fragment, Fragment.TS_COORD)
        self.assertEqual(os.path.basename(entry.path), 'paxos-4round.ho')
        with self.assertRaises(KeyError):
            entry_by_id('no-such-entry')

    def test_json_round_trip(self):
        entry = entry_by_id('onethird-1-2_2-3')
        data = entry.to_json()
        self.assertEqual(data['witness'], {'kind': AGREEMENT, 'n': 7})
        self.assertNotIn('witness_pair', data)

    def test_missing_manifest(self):
        with tempfile.TemporaryDirectory() as directory:
            with self.assertRaises(HocError):
                corpus_entries(directory)


class GridTests(SimpleTestCase):

    def test_family_size(self):
        self.assertEqual(len(list(grid_family(GRID))), 432)
        self.assertEqual(len(list(grid_family(SMALL_GRID))), 54)
        self.assertEqual(len({entry_id for entry_id, _, _, _ in grid_family(GRID)}), 432)

    def test_stamp(self):
        with tempfile.TemporaryDirectory() as directory:
            entries = stamp_grid(directory, SMALL_GRID)
            self.assertEqual(len(entries), 54)
            with open(os.path.join(directory, MANIFEST)) as f:
                self.assertEqual(len(json.load(f)['entries']), 54)
            for entry in corpus_entries(directory):
                verdict, _ = check_instance(load_entry(entry))
                self.assertEqual(verdict.outcome, entry.verdict, entry.id)

    def test_predicate_family_size(self):
        correct = [e for e in grid_family(GRID, with_eq=(True,)) if e[3] is Outcome.ACCEPT]
        self.assertEqual(len(correct), 83)
        ids = [entry_id for entry_id, _, _, _ in predicate_grid_family(GRID)]
        self.assertEqual(len(ids), 83 * len(GRID) * 2)
        self.assertEqual(len(set(ids)), len(ids))
        self.assertFalse(list(predicate_grid_family(SMALL_GRID)))

    def test_stamp_predicate_grid(self):
        values = (Fraction(2, 3), Fraction(3, 4))
        with tempfile.TemporaryDirectory() as directory:
            entries = stamp_predicate_grid(directory, values)
            self.assertEqual(len(entries), 32)
            loaded = corpus_entries(directory)
            self.assertEqual([e.id for e in loaded], [e.id for e in entries])
            for entry in loaded:
                self.assertEqual(entry.origin, 'OneThird predicate grid')
                verdict, _ = check_instance(load_entry(entry))
                self.assertEqual(verdict.outcome, entry.verdict, entry.id)

    def test_ids(self):
        self.assertEqual(grid_id(SMALL_GRID[0], SMALL_GRID[1], SMALL_GRID[2], with_eq=False),
            grid_id(SMALL_GRID[0], SMALL_GRID[1], SMALL_GRID[2]) + '-noeq')
