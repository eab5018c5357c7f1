from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from math import comb

from donaldson_gluing.lattice import HClass, Lattice, LatticeModel, MarkedSurface
from donaldson_gluing.series import DonaldsonSeries, check_adjunction

_logger = getLogger(__name__)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    recipe: str
    lattice: Lattice
    series: DonaldsonSeries
    surfaces: tuple = ()
    # (surface label, w) pairs; each w is allowable for its surface.
    w_choices: tuple = ()
    provenance: str = ""

    def surface(self, label=None):
        if label is None:
            if not self.surfaces:
                raise ValueError("Catalog entry '%s' has no marked surface." % self.name)
            return self.surfaces[0]

        for surface in self.surfaces:
            if surface.label == label:
                return surface

        raise ValueError("Catalog entry '%s' has no surface '%s'. Available: %s" %
                         (self.name, label, [s.label for s in self.surfaces]))

    def w_for(self, surface_label=None):
        label = self.surface(surface_label).label
        for name, w in self.w_choices:
            if name == label:
                return w

        raise ValueError("Catalog entry '%s' has no w choice for surface '%s'." % (self.name, label))

    def surface_of_genus(self, genus):
        for surface in self.surfaces:
            if surface.genus == genus:
                return surface

        raise ValueError("Catalog entry '%s' has no marked surface of genus %d." % (self.name, genus))


def _transport(cls, lattice):
    return HClass(lattice, cls.coords) if cls is not None else None


def _relabel(entry, name, recipe, lattice_name, extra_classes=(), surfaces=None, w_choices=None, provenance=None):
    """Move an entry onto a renamed lattice, adding named classes along the way."""
    old = entry.lattice
    lattice = Lattice(lattice_name, old.gram, old.b_plus, old.b_one,
                      old.classes + tuple((label, cls.coords) for label, cls in extra_classes),
                      old.model, old.carries_series)

    series = entry.series
    moved_series = DonaldsonSeries(lattice, tuple((_transport(k, lattice), a) for k, a in series.entries),
                                   _transport(series.w, lattice), _transport(series.exceptional_class, lattice),
                                   series.simple_type)

    surfaces = entry.surfaces if surfaces is None else surfaces
    w_choices = entry.w_choices if w_choices is None else w_choices

    return CatalogEntry(name, recipe, lattice, moved_series,
                        tuple(MarkedSurface(_transport(s.cls, lattice), s.genus, s.label) for s in surfaces),
                        tuple((label, _transport(w, lattice)) for label, w in w_choices),
                        provenance if provenance is not None else entry.provenance)


def elliptic_surface(n):
    """Minimal elliptic surface S_n (p_g = n - 1) on the {F, sigma} block."""
    if n < 2:
        raise ValueError("Elliptic surface S_%d has b_plus = %d; b_plus = 1 invariants depend on a chamber "
                         "and are not modeled." % (n, 2 * n - 1))

    name = "K3" if n == 2 else "S%d" % n
    lattice = Lattice(name, ((0, 1), (1, -n)), 2 * n - 1, 0,
                      (("F", (1, 0)), ("sigma", (0, 1))), LatticeModel.PARTIAL)
    fibre = lattice.cls("F")

    # (sinh F)^{n-2} expanded: F-levels k = n-2, n-4, ..., -(n-2).
    entries = []
    for j in range(n - 1):
        k = n - 2 - 2 * j
        entries.append((fibre * k, Fraction((-1) ** j * comb(n - 2, j), 2 ** (n - 2))))

    series = DonaldsonSeries(lattice, tuple(entries))

    return CatalogEntry(name, "elliptic:%d" % n, lattice, series,
                        (MarkedSurface(fibre, 1, "F"),),
                        (("F", lattice.cls("sigma")),),
                        "elliptic surface, series e^{Q/2}(sinh F)^{n-2}")


def blow_up(entry, lattice_name=None):
    """Blow up once: orthogonal E with E^2 = -1, each (K, c) -> (K+E, c/2), (K-E, -c/2)."""
    old = entry.lattice
    index = sum(1 for label in old.labels() if label.startswith("E")) + 1
    label = "E%d" % index
    lattice_name = lattice_name or "%s#%dCP2bar" % (old.name.split("#")[0], index)

    gram = [list(row) + [0] for row in old.gram]
    gram.append([0] * old.rank + [-1])
    classes = tuple((name, coords + (Fraction(0),)) for name, coords in old.classes)
    classes += ((label, (Fraction(0),) * old.rank + (Fraction(1),)),)

    lattice = Lattice(lattice_name, gram, old.b_plus, old.b_one, classes, old.model, old.carries_series)
    exceptional = lattice.cls(label)

    series = entry.series
    entries = []
    for k, a in series.entries:
        k = k.embed(lattice)
        entries.append((k + exceptional, a / 2))
        entries.append((k - exceptional, -a / 2))

    w = series.w.embed(lattice) if series.w is not None else None
    blown_up = DonaldsonSeries(lattice, tuple(entries), w, series.exceptional_class.embed(lattice) + exceptional,
                               series.simple_type)

    _logger.debug("Blew up '%s' to '%s' (%d basic classes).", entry.name, lattice_name, len(blown_up.entries))

    return CatalogEntry(lattice_name, entry.recipe + "+blowup", lattice, blown_up,
                        tuple(s.embed(lattice) for s in entry.surfaces),
                        tuple((name, cls.embed(lattice)) for name, cls in entry.w_choices),
                        entry.provenance + "; blown up")


def blow_up_times(entry, count):
    for _ in range(count):
        entry = blow_up(entry)
    return entry


def build_Bg(g):
    if g < 2:
        raise ValueError("B_g needs g >= 2, got %d." % g)

    entry = blow_up_times(elliptic_surface(g), g)
    lattice = entry.lattice

    fibre = lattice.cls("F")
    exceptionals = [lattice.cls("E%d" % i) for i in range(1, g + 1)]
    exceptional_sum = sum(exceptionals, lattice.zero())

    sigma_g = lattice.cls("sigma") + fibre * g - exceptional_sum
    canonical = fibre * (g - 2) + exceptional_sum

    surface = MarkedSurface(sigma_g, g, "Sigma_g")
    torus = entry.surface("F")

    result = _relabel(entry, "B%d" % g, "bg:%d" % g, "B%d" % g,
                      (("T1", fibre), ("Sigma_g", sigma_g), ("K_Bg", canonical)),
                      (surface, torus),
                      (("Sigma_g", fibre), ("F", lattice.cls("sigma"))),
                      "S_g blown up g times with Sigma_g = sigma + gF - E_1 - ... - E_g")

    _check_Bg(result, g)
    return result


def _check_Bg(entry, g):
    surface = entry.surface("Sigma_g")
    sigma = surface.cls
    canonical = entry.lattice.cls("K_Bg")

    if entry.lattice.cls("T1").dot(sigma) != 1:
        raise ValueError("B_%d: T1.Sigma_g must be 1." % g)

    top = [(k, a) for k, a in entry.series.entries if k.dot(sigma) == 2 * g - 2]
    if len(top) != 1 or top[0][0] != canonical:
        raise ValueError("B_%d: K_Bg must be the only basic class with K.Sigma_g = %d." % (g, 2 * g - 2))

    if top[0][1] != Fraction(1, 2 ** (2 * g - 2)):
        raise ValueError("B_%d: coefficient of K_Bg is %s, expected 1/%d." % (g, top[0][1], 2 ** (2 * g - 2)))

    holds, violators = check_adjunction(entry.series, surface)
    if not holds:
        raise ValueError("B_%d violates adjunction against Sigma_g: %s" % (g, violators))


def _k3_st_block():
    lattice = Lattice("K3", ((-2, 1), (1, 0)), 3, 0, (("S", (1, 0)), ("T", (0, 1))), LatticeModel.PARTIAL)
    series = DonaldsonSeries(lattice, ((lattice.zero(), 1),))
    return CatalogEntry("K3", "K3", lattice, series, (MarkedSurface(lattice.cls("T"), 1, "T"),),
                        (("T", lattice.cls("S")),), "K3 on the section/fibre block")


def build_dia2_example(g_prime, g):
    """K3 blown up 2g'-2 times with a genus-g surface whose basic classes stay below 2g-2."""
    if g_prime < 1 or g <= g_prime:
        raise ValueError("Need 1 <= g' < g, got g'=%d, g=%d." % (g_prime, g))

    blow_ups = 2 * g_prime - 2
    entry = blow_up_times(_k3_st_block(), blow_ups)
    lattice = entry.lattice

    exceptional_sum = sum((lattice.cls("E%d" % i) for i in range(1, blow_ups + 1)), lattice.zero())
    sigma_one = lattice.cls("S") + lattice.cls("T") * g_prime + exceptional_sum
    surface = MarkedSurface(sigma_one, g, "Sigma_1")

    name = "dia2:%d:%d" % (g_prime, g)
    result = _relabel(entry, name, name, name,
                      (("Sigma_1", sigma_one),),
                      (surface,) + entry.surfaces,
                      (("Sigma_1", lattice.cls("T")),) + entry.w_choices,
                      "K3 blown up 2g'-2 times, Sigma_1 = S + g'T + E_1 + ... + E_{2g'-2}")

    sigma = result.surface("Sigma_1").cls
    highest = max((abs(k.dot(sigma)) for k in result.series.classes()), default=0)
    if highest != 2 * g_prime - 2:
        raise ValueError("%s: max |K.Sigma_1| is %s, expected %d." % (name, highest, 2 * g_prime - 2))

    return result


def closed_form_Cg(g):
    """Closed-form series of the double of B_g along Sigma_g, stored twisted by Sigma_hat_2."""
    if g < 2:
        raise ValueError("C_g needs g >= 2, got %d." % g)

    name = "C%d" % g
    lattice = Lattice(name, ((0, 1), (1, 0)), 6 * g - 3, 0,
                      (("Sigma_hat_2", (1, 0)), ("Sigma_g", (0, 1)), ("K_Cg", (2 * g - 2, 2))),
                      LatticeModel.PARTIAL)

    canonical = lattice.cls("K_Cg")
    magnitude = Fraction(2) ** (3 * g - 5)
    w = lattice.cls("Sigma_hat_2")

    series = DonaldsonSeries(lattice, ((canonical, -magnitude), (-canonical, (-1) ** g * magnitude)), w)

    return CatalogEntry(name, "cg:%d" % g, lattice, series,
                        (MarkedSurface(lattice.cls("Sigma_g"), g, "Sigma_g"),
                         MarkedSurface(w, 2, "Sigma_hat_2")),
                        (("Sigma_g", w), ("Sigma_hat_2", lattice.cls("Sigma_g"))),
                        "double of B_g along Sigma_g, closed form")
