"""The full normalization pipeline run before any verdict."""
from heardof.core import reasons
from heardof.core.errors import ClassifierError
from heardof.core.reasons import make_reason
from heardof.normalize.canonical import canonicalize_rounds
from heardof.normalize.provisos import NormReport, validate_provisos
from heardof.normalize.rewrite import assumption_holds, prune_dead_mults, strengthen_sporadics

import logging
logger = logging.getLogger(__name__)

__all__ = ['normalize']


def normalize(instance, fragment=None, bound=None):
    """Returns the normalized instance and a NormReport.

    ``fragment`` overrides detection; a fragment that does not match the
    algorithm's shape is reported and nothing else is done. The same holds
    for rounds that cannot be put in canonical form.
    """
    alg, spec = instance.algorithm, instance.spec
    detected = alg.fragment
    report = NormReport(fragment or detected)
    if fragment is not None and fragment is not detected:
        report.violations.append(make_reason(reasons.FRAGMENT_MISMATCH, None,
            "requested fragment %s but the algorithm is in %s" % (fragment.value, detected.value)))
        return instance, report

    abstained = []
    alg = canonicalize_rounds(alg, report.rewrites, abstained)
    if abstained:
        for i in abstained:
            report.violations.append(make_reason(reasons.NON_CANONICAL_ROUND, i,
                "round %d cannot be put in canonical form" % i))
        return instance.replace(algorithm=alg), report

    strengthened = strengthen_sporadics(spec)
    if strengthened != spec:
        report.rewrites.append("sporadic predicates conjoined with the global predicate")
        spec = strengthened
    alg = prune_dead_mults(alg, spec.global_predicate, report.rewrites)
    if not assumption_holds(alg, spec.global_predicate):
        raise ClassifierError("%s: a round no ? reaches keeps a threshold below the global one"
            % instance.name)
    alg, report = validate_provisos(alg, spec, report.fragment, report, bound)
    for line in report.rewrites:
        logger.info("%s: %s" % (instance.name, line))
    return instance.replace(algorithm=alg, spec=spec), report
