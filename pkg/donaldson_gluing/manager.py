from logging import getLogger
from threading import Thread
from time import time

from donaldson_gluing.gluing import SplitClass, eval_glued
from donaldson_gluing.pairing_fit import basis_coordinates, fit_diagonal, glued_coordinates, predict_glued
from donaldson_gluing.series import default_probes
from donaldson_gluing.validation import ENTRY_SUITES, SuiteStatus, VerificationError, check_coefficient_match, \
    check_d_zero_congruence, check_rshift_invariance, interpret_results

_logger = getLogger(__name__)
_audit_logger = getLogger("audit_trail")


class VerificationManager(object):
    """Runs the identity suites for catalog entries and gluings, one thread per suite."""

    def __init__(self, entry_suites=None):
        self.entry_suites = dict(entry_suites if entry_suites is not None else ENTRY_SUITES)
        self._last_statuses = {}

    def _run_suites(self, suites):
        statuses = {}

        def run(name, suite):
            try:
                suite()
                statuses[name] = (SuiteStatus.PASSED, "")
            except VerificationError as e:
                statuses[name] = (SuiteStatus.FAILED, str(e))
            except ValueError as e:
                statuses[name] = (SuiteStatus.ERROR, str(e))
            except Exception as e:
                _logger.exception("Suite '%s' crashed.", name)
                statuses[name] = (SuiteStatus.ERROR, "%s: %s" % (type(e).__name__, e))

        time_start = time()
        threads = []
        for name, suite in suites.items():
            _audit_logger.info("Starting suite '%s'.", name)
            thread = Thread(target=run, args=(name, suite))
            thread.start()
            threads.append(thread)

        for thread in threads:
            thread.join()

        _logger.info("Ran %d suites in %f s.", len(suites), time() - time_start)

        self._last_statuses = statuses
        return statuses

    def check_entry(self, entry, suite_names=None):
        _audit_logger.info("Checking catalog entry '%s'.", entry.name)

        names = suite_names if suite_names is not None else list(self.entry_suites)
        unknown = [name for name in names if name not in self.entry_suites]
        if unknown:
            raise ValueError("Unknown suites %s. Available: %s" % (unknown, list(self.entry_suites)))

        return self._run_suites({name: (lambda suite=self.entry_suites[name]: suite(entry)) for name in names})

    def check_gluing(self, glued, shifts=None):
        _audit_logger.info("Checking gluing of '%s' and '%s' along genus %d.",
                           glued.spec.left.entry.name, glued.spec.right.entry.name, glued.spec.genus)

        spec = glued.spec
        suites = {"d0_congruence": lambda: check_d_zero_congruence(spec)}

        probes = gluing_probes(spec)
        if probes:
            suites["rshift_invariance"] = lambda: [check_rshift_invariance(glued, d, shifts) for d in probes]

        if spec.genus >= 2 and not glued.experimental and spec.delta % 2 == 0:
            suites["coefficient_match"] = lambda: check_coefficient_match(glued)

        if spec.genus >= 2 and not glued.experimental and spec.epsilon == 1 and probes:
            suites["cross_validation"] = lambda: check_cross_validation(glued, probes)

        return self._run_suites(suites)

    def get_status(self):
        return interpret_results(self._last_statuses)

    def get_status_details(self):
        return dict(self._last_statuses)


def gluing_probes(spec):
    """Split classes D = (D1, D2) with D1.Sigma1 = D2.Sigma2 = 1 built from named probe classes."""
    left = default_probes(spec.left.series, spec.left.surface)
    right = default_probes(spec.right.series, spec.right.surface)
    return [SplitClass.for_spec(spec, d1, d2, 1) for d1 in left for d2 in right]


def check_cross_validation(glued, probes):
    """predict_glued with a diagonal fitted from this very gluing reproduces eval_glued on every probe."""
    spec = glued.spec
    for d in probes:
        left = basis_coordinates(spec.left.series, spec.left.w, spec.left.surface, d.d1)
        right = basis_coordinates(spec.right.series, spec.right.w, spec.right.surface, d.d2)

        try:
            fitted = fit_diagonal([(left, right, glued_coordinates(glued, d))])
        except ValueError:
            if eval_glued(glued, d):
                raise
            continue

        predicted = predict_glued(left, right, fitted, d.sigma_pairing)
        if predicted != eval_glued(glued, d):
            raise VerificationError("pairing cross validation: D=(%s, %s) predicts %s, gluing gives %s." %
                                    (d.d1, d.d2, predicted, eval_glued(glued, d)))
