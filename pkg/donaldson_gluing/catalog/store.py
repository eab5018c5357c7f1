import json
import os
import re
from logging import getLogger

from donaldson_gluing import config
from donaldson_gluing.arithmetic import parse_rational
from donaldson_gluing.catalog.constructions import CatalogEntry, build_Bg, build_dia2_example, closed_form_Cg, \
    elliptic_surface
from donaldson_gluing.lattice import Lattice, MarkedSurface
from donaldson_gluing.series import DonaldsonSeries

_logger = getLogger(__name__)

_ALIASES = [(re.compile(r"^K3$"), lambda: "elliptic:2"),
            (re.compile(r"^S(\d+)$"), lambda n: "elliptic:%s" % n),
            (re.compile(r"^B(\d+)$"), lambda g: "bg:%s" % g),
            (re.compile(r"^C(\d+)$"), lambda g: "cg:%s" % g)]

_RECIPES = {"elliptic": (1, elliptic_surface),
            "bg": (1, build_Bg),
            "dia2": (2, build_dia2_example),
            "cg": (1, closed_form_Cg)}


def canonical_recipe(name):
    name = name.strip()
    for pattern, target in _ALIASES:
        match = pattern.match(name)
        if match:
            return target(*match.groups())
    return name


def build_from_recipe(recipe):
    recipe = canonical_recipe(recipe)
    kind, _, arguments = recipe.partition(":")

    if kind not in _RECIPES:
        raise ValueError("Unknown catalog entry '%s'. Known recipes: %s; aliases K3, S<n>, B<g>, C<g>." %
                         (recipe, ["%s:..." % k for k in _RECIPES]))

    n_arguments, builder = _RECIPES[kind]
    parts = arguments.split(":") if arguments else []
    if len(parts) != n_arguments or not all(p.lstrip("-").isdigit() for p in parts):
        raise ValueError("Recipe '%s' expects %d integer argument(s), got '%s'." % (kind, n_arguments, arguments))

    entry = builder(*(int(p) for p in parts))
    _logger.debug("Built catalog entry '%s' from recipe '%s'.", entry.name, recipe)
    return entry


def catalog(name, store=None):
    if store is not None:
        return store.get(name)
    return build_from_recipe(name)


def entry_to_json(entry):
    return {"name": entry.name,
            "recipe": canonical_recipe(entry.recipe),
            "provenance": entry.provenance,
            "lattice": entry.lattice.to_descriptor(),
            "series": entry.series.to_json(),
            "surfaces": [{"label": s.label, "class": s.cls.to_list(), "genus": s.genus} for s in entry.surfaces],
            "w_choices": {label: w.to_list() for label, w in entry.w_choices}}


def entry_from_json(data):
    from donaldson_gluing.validation import validate_entry_descriptor
    validate_entry_descriptor(data)

    lattice = Lattice.from_descriptor(data["lattice"])
    series = DonaldsonSeries.from_json(data["series"], lattice)

    def vector(coords):
        return lattice.vector([parse_rational(c) for c in coords])

    surfaces = tuple(MarkedSurface(vector(s["class"]), s["genus"], s["label"]) for s in data["surfaces"])
    w_choices = tuple((label, vector(w)) for label, w in data["w_choices"].items())

    return CatalogEntry(data["name"], data["recipe"], lattice, series, surfaces, w_choices,
                        data.get("provenance", ""))


def dumps_canonical(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load_entry_file(filename):
    with open(filename) as input_file:
        return entry_from_json(json.load(input_file))


def resolve_catalog_directory(directory=None):
    if directory is None:
        directory = os.environ.get(config.CATALOG_DIRECTORY_ENV, config.DEFAULT_CATALOG_DIRECTORY)
    return os.path.expanduser(directory)


class CatalogStore(object):
    """Directory of canonical JSON entries, each re-derivable from its recipe."""

    def __init__(self, directory=None):
        self.directory = resolve_catalog_directory(directory)

    def _filename(self, name):
        return os.path.join(self.directory, canonical_recipe(name).replace(":", "_") + ".json")

    def contains(self, name):
        return os.path.isfile(self._filename(name))

    def list(self):
        if not os.path.isdir(self.directory):
            return []

        names = []
        for filename in sorted(os.listdir(self.directory)):
            if filename.endswith(".json"):
                with open(os.path.join(self.directory, filename)) as input_file:
                    names.append(json.load(input_file)["recipe"])
        return names

    def save(self, entry):
        os.makedirs(self.directory, exist_ok=True)
        filename = self._filename(entry.recipe)

        with open(filename, "w") as output_file:
            output_file.write(dumps_canonical(entry_to_json(entry)))

        _logger.info("Stored catalog entry '%s' in '%s'.", entry.name, filename)
        return filename

    def load(self, name):
        """Read a stored entry and require that its recipe re-derives the same bytes."""
        from donaldson_gluing.validation import VerificationError

        filename = self._filename(name)
        if not os.path.isfile(filename):
            raise ValueError("Catalog entry '%s' is not stored in '%s'." % (name, self.directory))

        with open(filename) as input_file:
            stored = input_file.read()

        data = json.loads(stored)
        rebuilt = build_from_recipe(data["recipe"])
        if dumps_canonical(entry_to_json(rebuilt)) != stored:
            raise VerificationError("catalog round trip: stored entry '%s' does not match its recipe '%s'." %
                                    (name, data["recipe"]))

        return entry_from_json(data)

    def get(self, name):
        if self.contains(name):
            return self.load(name)

        _logger.warning("Catalog entry '%s' not found in '%s', deriving it from its recipe.", name, self.directory)
        entry = build_from_recipe(name)
        self.save(entry)
        return entry

    def populate(self, names=None):
        names = names if names is not None else config.STANDARD_CATALOG
        return [self.save(build_from_recipe(name)) for name in names]
