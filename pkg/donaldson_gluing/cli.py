import argparse
import json
import logging
import sys

from donaldson_gluing import config
from donaldson_gluing.arithmetic import format_gaussian, gaussian_to_complex, parse_rational
from donaldson_gluing.catalog.store import CatalogStore, build_from_recipe, entry_to_json, load_entry_file
from donaldson_gluing.gluing import GluedSeries, GluingSide, GluingSpec, SplitClass, eval_glued, glue, \
    glue_conjectural, glue_torus
from donaldson_gluing.manager import VerificationManager
from donaldson_gluing.pairing_fit import basis_coordinates, fit_diagonal, glued_coordinates, series_coordinates
from donaldson_gluing.series import default_probes
from donaldson_gluing.validation import SuiteStatus, VerificationError

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

DEFAULT_REFERENCE = "bg:%d@T1,bg:%d@T1,cg:%d@Sigma_hat_2"


def parse_class(lattice, text):
    """A named class of the lattice, or comma separated rational coordinates."""
    text = text.strip()
    if text in lattice.labels():
        return lattice.cls(text)

    coords = [parse_rational(c) for c in text.split(",")]
    if len(coords) != lattice.rank:
        raise ValueError("Class '%s' is neither a named class of '%s' %s nor %d coordinates." %
                         (text, lattice.name, lattice.labels(), lattice.rank))
    return lattice.vector(coords)


def _side(entry, genus, surface_label=None):
    surface = entry.surface(surface_label) if surface_label else entry.surface_of_genus(genus)
    return GluingSide.from_entry(entry, surface.label)


def _probe(entry, surface, label=None):
    """The class D named by label, or the first named class with D.Sigma = 1."""
    if label:
        return parse_class(entry.lattice, label)

    probes = default_probes(entry.series, surface)
    if not probes:
        raise ValueError("Catalog entry '%s' has no named class D with D.%s = 1 to probe with." %
                         (entry.name, surface.label))
    return probes[0]


def _render_scalar(value, as_float):
    return str(gaussian_to_complex(value)) if as_float else format_gaussian(value)


def _render_polynomial(poly, as_float):
    data = poly.to_json()
    if as_float:
        data["terms"] = [{"lambda": _render_scalar(e, True), "c": _render_scalar(c, True)} for e, c in poly.terms]
    return data


def _emit(arguments, data, rows=None):
    if arguments.table and rows is not None:
        for row in rows:
            print("\t".join(str(x) for x in row))
    else:
        print(json.dumps(data, indent=2, sort_keys=True))


def command_catalog(arguments, store):
    if arguments.action == "list":
        stored = store.list()
        _emit(arguments, {"standard": config.STANDARD_CATALOG, "stored": stored},
              [[name, "stored" if name in stored else ""] for name in config.STANDARD_CATALOG])

    elif arguments.action == "populate":
        filenames = store.populate()
        _emit(arguments, {"stored": filenames}, [[f] for f in filenames])

    else:
        if not arguments.name:
            raise ValueError("catalog show needs an entry name.")

        entry = store.get(arguments.name)
        _emit(arguments, entry_to_json(entry),
              [[k.to_list(), str(a)] for k, a in entry.series.entries])

    return EXIT_OK


def command_build(arguments, store):
    entry = build_from_recipe(arguments.recipe)
    store.save(entry)
    _emit(arguments, entry_to_json(entry), [[k.to_list(), str(a)] for k, a in entry.series.entries])
    return EXIT_OK


def _build_spec(arguments, left, right):
    left_side = _side(left, arguments.g, arguments.left_surface)
    right_side = _side(right, arguments.g, arguments.right_surface)
    return GluingSpec(left_side, right_side, arguments.g, arguments.w_sq)


def _glued_rows(glued):
    return [[e.j, e.k, e.sector.value, str(e.coefficient)] for e in glued.entries]


def command_glue(arguments, store):
    spec = _build_spec(arguments, store.get(arguments.left), store.get(arguments.right))
    glued = glue_torus(spec) if arguments.torus else glue(spec)

    _emit(arguments, glued.to_json(), _glued_rows(glued))
    return EXIT_OK


def command_conjecture(arguments, store):
    spec = _build_spec(arguments, load_entry_file(arguments.left), load_entry_file(arguments.right))
    glued = glue_conjectural(spec)

    _emit(arguments, glued.to_json(), _glued_rows(glued))
    return EXIT_OK


def command_eval(arguments, store):
    with open(arguments.glued) as input_file:
        glued = GluedSeries.from_json(json.load(input_file), store.get)

    spec = glued.spec
    d = SplitClass(parse_class(spec.left.lattice, arguments.d1), parse_class(spec.right.lattice, arguments.d2),
                   parse_rational(arguments.sigma_d), spec.left.surface.cls, spec.right.surface.cls)
    value = eval_glued(glued, d)

    data = {"value": _render_polynomial(value, arguments.float)}
    rows = [[_render_scalar(e, arguments.float), _render_scalar(c, arguments.float)] for e, c in value.terms]

    if arguments.expand_order is not None:
        if not 0 <= arguments.expand_order <= config.MAX_EXPAND_ORDER:
            raise ValueError("--expand-order must lie in 0..%d, got %d." %
                             (config.MAX_EXPAND_ORDER, arguments.expand_order))

        coefficients = value.expand(arguments.expand_order)
        data["expansion"] = [_render_scalar(c, arguments.float) for c in coefficients]
        rows += [["t^%d" % n, _render_scalar(c, arguments.float)] for n, c in enumerate(coefficients)]

    _emit(arguments, data, rows)
    return EXIT_OK


def _status_exit_code(status):
    if status == SuiteStatus.FAILED:
        return EXIT_VERIFICATION_FAILED
    if status == SuiteStatus.ERROR:
        return EXIT_USAGE
    return EXIT_OK


def command_check(arguments, store):
    manager = VerificationManager()

    if arguments.glued:
        with open(arguments.glued) as input_file:
            glued = GluedSeries.from_json(json.load(input_file), store.get)
        subject = "%s #_%d %s" % (glued.spec.left.entry.name, glued.spec.genus, glued.spec.right.entry.name)
        manager.check_gluing(glued)
    else:
        entry = store.get(arguments.entry)
        subject = entry.name
        manager.check_entry(entry)

    status = manager.get_status()
    details = manager.get_status_details()

    _emit(arguments,
          {"subject": subject,
           "status": status.value,
           "suites": {name: {"status": s.value, "message": message} for name, (s, message) in details.items()}},
          [[name, s.value, message] for name, (s, message) in sorted(details.items())])

    return _status_exit_code(status)


def _split_probe(part):
    recipe, _, label = part.partition("@")
    return recipe.strip(), label.strip() or None


def _reference_coordinates(reference, genus, store):
    """
    Triple of normalized coordinates for 'LEFT,RIGHT,GLUED'; GLUED is a recipe or the word 'glue'.
    Each part may carry the probe class as RECIPE@LABEL.
    """
    parts = [_split_probe(p) for p in reference.split(",")]
    if len(parts) != 3:
        raise ValueError("Reference '%s' must be LEFT,RIGHT,GLUED." % reference)

    (left_recipe, left_label), (right_recipe, right_label), (glued_recipe, glued_label) = parts

    left, right = store.get(left_recipe), store.get(right_recipe)
    left_side, right_side = _side(left, genus), _side(right, genus)
    d1 = _probe(left, left_side.surface, left_label)
    d2 = _probe(right, right_side.surface, right_label)

    left_coords = basis_coordinates(left.series, left_side.w, left_side.surface, d1)
    right_coords = basis_coordinates(right.series, right_side.w, right_side.surface, d2)

    if glued_recipe == "glue":
        spec = GluingSpec(left_side, right_side, genus)
        glued_coords = glued_coordinates(glue(spec), SplitClass.for_spec(spec, d1, d2, 1))
    else:
        # The closed form must be probed by the class the glued (d1, d2) becomes.
        closed = store.get(glued_recipe)
        surface = closed.surface_of_genus(genus)
        glued_coords = series_coordinates(closed.series, closed.w_for(surface.label), surface,
                                          _probe(closed, surface, glued_label))

    return left_coords, right_coords, glued_coords


def command_fit(arguments, store):
    g = arguments.g
    references = arguments.references or [DEFAULT_REFERENCE % (g, g, g)]

    triples = [_reference_coordinates(reference, g, store) for reference in references]
    fitted = fit_diagonal(triples)

    _emit(arguments, [{"alpha": alpha, "M": m.to_json()} for alpha, m in sorted(fitted.items())],
          [[alpha, str(m)] for alpha, m in sorted(fitted.items())])
    return EXIT_OK


COMMANDS = {
    "catalog": command_catalog,
    "build": command_build,
    "glue": command_glue,
    "eval": command_eval,
    "check": command_check,
    "fit": command_fit,
    "conjecture": command_conjecture
}


def _add_gluing_arguments(parser, left_help, right_help):
    parser.add_argument("--left", required=True, help=left_help)
    parser.add_argument("--right", required=True, help=right_help)
    parser.add_argument("--g", type=int, required=True, help="Genus of the gluing surface.")
    parser.add_argument("--w-sq", dest="w_sq", type=int, default=None,
                        help="w^2 of the glued class; defaults to w1^2 + w2^2.")
    parser.add_argument("--left-surface", dest="left_surface", default=None,
                        help="Label of the left marked surface (default: first of genus g).")
    parser.add_argument("--right-surface", dest="right_surface", default=None,
                        help="Label of the right marked surface (default: first of genus g).")


def get_parser():
    parser = argparse.ArgumentParser(prog="donaldson_gluing",
                                     description="Exact Donaldson series of fibre sums along surfaces.")
    parser.add_argument("--log_level", default=config.DEFAULT_LOGGING_LEVEL,
                        choices=['CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'],
                        help="Log level to use.")
    parser.add_argument("--catalog_directory", default=None,
                        help="Catalog directory (default: $%s or %s)." %
                             (config.CATALOG_DIRECTORY_ENV, config.DEFAULT_CATALOG_DIRECTORY))

    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="JSON output (default).")
    output.add_argument("--table", action="store_true", help="Tab separated table output.")
    parser.add_argument("--float", action="store_true", help="Display evaluated values as floats.")

    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    catalog_parser = subparsers.add_parser("catalog", help="List, show or populate catalog entries.")
    catalog_parser.add_argument("action", choices=["list", "show", "populate"])
    catalog_parser.add_argument("name", nargs="?", default=None)

    build_parser = subparsers.add_parser("build", help="Derive an entry from elliptic:n, bg:g, dia2:g':g or cg:g.")
    build_parser.add_argument("recipe")

    glue_parser = subparsers.add_parser("glue", help="Glue two catalog entries along genus-g surfaces.")
    _add_gluing_arguments(glue_parser, "Left catalog entry.", "Right catalog entry.")
    glue_parser.add_argument("--torus", action="store_true", help="Use the genus-1 three-sector formula.")

    eval_parser = subparsers.add_parser("eval", help="Evaluate a stored glued series on a split class.")
    eval_parser.add_argument("--glued", required=True, help="Glued series JSON file.")
    eval_parser.add_argument("--d1", required=True, help="Left part of D: class label or coordinates.")
    eval_parser.add_argument("--d2", required=True, help="Right part of D: class label or coordinates.")
    eval_parser.add_argument("--sigma-d", dest="sigma_d", required=True, help="Sigma.D as a rational.")
    eval_parser.add_argument("--expand-order", dest="expand_order", type=int, nargs="?", default=None,
                             const=config.DEFAULT_EXPAND_ORDER, help="Also print Taylor coefficients.")

    check_parser = subparsers.add_parser("check", help="Run the verification suites.")
    subject = check_parser.add_mutually_exclusive_group(required=True)
    subject.add_argument("--entry", help="Catalog entry to check.")
    subject.add_argument("--glued", help="Glued series JSON file to check.")

    fit_parser = subparsers.add_parser("fit", help="Fit the diagonal pairing from reference triples.")
    fit_parser.add_argument("--g", type=int, required=True)
    fit_parser.add_argument("--references", nargs="+", default=None,
                            help="LEFT,RIGHT,GLUED triples, each part optionally RECIPE@PROBE; "
                                 "GLUED is a recipe or 'glue' "
                                 "(default: bg:g@T1,bg:g@T1,cg:g@Sigma_hat_2).")

    conjecture_parser = subparsers.add_parser("conjecture", help="Experimental gluing of stabilized series.")
    _add_gluing_arguments(conjecture_parser, "Left stabilized entry JSON file.", "Right stabilized entry JSON file.")

    return parser


def run(arguments):
    store = CatalogStore(arguments.catalog_directory)

    try:
        return COMMANDS[arguments.command](arguments, store)

    except VerificationError as e:
        _logger.debug("Verification failed.", exc_info=True)
        print("Verification failed: %s" % e, file=sys.stderr)
        return EXIT_VERIFICATION_FAILED

    except (ValueError, OSError) as e:
        _logger.debug("Command failed.", exc_info=True)
        print("Error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    arguments = get_parser().parse_args(argv)

    # Setup the logging level.
    logging.basicConfig(level=arguments.log_level, format='[%(levelname)s] %(message)s')

    return run(arguments)


if __name__ == "__main__":
    sys.exit(main())
