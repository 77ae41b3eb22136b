"""No-argument jobs for `manage.py job <name>`."""
import json
import os

from django.conf import settings

from heardof.cli.crossval import UNWITNESSED, crossval, failing_rows
from heardof.core.errors import HocError
from heardof.corpus.entries import corpus_entries
from heardof.corpus.grid import GRID, stamp_grid, stamp_predicate_grid
from heardof.dsl.parser import parse_file
from heardof.verdict.engine import check_instance
from heardof.verdict.explain import report_json

import logging
logger = logging.getLogger(__name__)


def _write(name, data):
    os.makedirs(settings.HOC_ARTIFACT_DIR, exist_ok=True)
    path = os.path.join(settings.HOC_ARTIFACT_DIR, name)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')
    logger.info("wrote %s" % path)
    return path


def corpus_reports():
    """Verdict reports for every corpus entry; fails if any differs from the manifest."""
    reports, mismatches = [], []
    for entry in corpus_entries():
        verdict, trace = check_instance(parse_file(entry.path))
        report = report_json(verdict, trace)
        report['id'] = entry.id
        reports.append(report)
        if verdict.outcome is not entry.verdict:
            mismatches.append(entry.id)
    _write('corpus.json', {'schema': settings.HOC_REPORT_SCHEMA, 'reports': reports})
    if mismatches:
        raise HocError("corpus verdicts differ from the manifest: %s" % ', '.join(mismatches))


def _crossval(name, entries, max_n):
    rows = crossval(entries, max_n, settings.HOC_DEFAULT_DEPTH, workers=settings.HOC_THREADS)
    # rejects whose counterexample needs a larger n than crossval tries
    unwitnessed = [row.id for row in rows if row.status == UNWITNESSED]
    _write(name, {'schema': settings.HOC_REPORT_SCHEMA, 'n': max_n,
        'depth': settings.HOC_DEFAULT_DEPTH, 'rows': [row.to_json() for row in rows],
        'known_unwitnessed': unwitnessed})
    logger.info("%s: %d rows, %d known unwitnessed" % (name, len(rows), len(unwitnessed)))
    failed = failing_rows(rows)
    if failed:
        raise HocError("crossval failed on %s" % ', '.join(row.id for row in failed))
    return rows


def crossval_corpus():
    _crossval('crossval-corpus.json', corpus_entries(), settings.HOC_MAX_N)


def crossval_grid():
    """The threshold grid and the predicate grid against the simulator, up to HOC_MAX_N."""
    entries = stamp_grid(os.path.join(settings.HOC_ARTIFACT_DIR, 'grid'), GRID)
    entries += stamp_predicate_grid(os.path.join(settings.HOC_ARTIFACT_DIR, 'predicate-grid'),
        GRID)
    _crossval('crossval-grid.json', entries, settings.HOC_MAX_N)


def ci():
    corpus_reports()
    crossval_corpus()
    crossval_grid()
