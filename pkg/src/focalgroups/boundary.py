"""Boundary invariants over the exact distance oracle: translation
numbers, horokernels along the fixed end, the Busemann quasicharacter,
isometry- and action-type classification, Schottky subsemigroups.

Orientation.  The end fixed by the whole group is the limit of the ray
alpha^-1, alpha^-2, ...: the configuration part of any element is
absorbed along it, whereas no nontrivial h fixes the limit of the
forward ray (the Gromov products (alpha^n | h alpha^n) stay bounded).
Horokernels therefore follow the backward ray, and are reported with
the orientation of the height function b that increases along
{alpha^n}, so that beta(alpha) = +1 and hyperbolic elements attracted
to the forward direction get positive values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .metric import QIReport, qi_embedding_check
from .words import alpha_point, identity_point, word_length


class StabilizationError(RuntimeError):
    """A horokernel value failed to settle within the horizon."""

    def __init__(self, message, trace):
        super().__init__(f"{message}; trace={trace}")
        self.trace = trace


# ---------------------------------------------------------------------------
# Translation numbers and isometry types
# ---------------------------------------------------------------------------


@dataclass
class TranslationReport:
    estimate: Fraction
    upper_bound: Fraction
    exact: bool
    value: Fraction | None
    horizon: int

    def as_dict(self):
        return {
            "estimate": float(self.estimate),
            "upper_bound": float(self.upper_bound),
            "exact": self.exact,
            "value": None if self.value is None else float(self.value),
            "horizon": self.horizon,
        }


def orbit_lengths(g, N, unchecked=False):
    """d(1, g^n) for n = 1..N, computed incrementally."""
    out, x = [], identity_point(g.family)
    for _ in range(N):
        x = x * g
        out.append(word_length(x, unchecked=unchecked))
    return out


def translation_number(g, N=32, unchecked=False):
    """Estimate lim d(1, g^n)/n.

    The limit is the infimum of d(1, g^n)/n by subadditivity, so the
    minimum over n <= N is a true upper bound.  For the registered
    families the exact value is |m(g)|: the exponent projection is
    1-Lipschitz, and the orbit excess d(1, g^n) - n|m| stabilizes.
    """
    lengths = orbit_lengths(g, N, unchecked=unchecked)
    estimate = Fraction(lengths[-1], N)
    upper = min(Fraction(dn, n + 1) for n, dn in enumerate(lengths))
    exact = g.family.a_length_validated
    value = Fraction(abs(g.m)) if exact else None
    return TranslationReport(estimate, upper, exact, value, N)


ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"


@dataclass
class IsometryType:
    kind: str
    evidence_horizon: int
    exact: bool
    witness: dict = field(default_factory=dict)

    def as_dict(self):
        return {"type": self.kind, "evidence_horizon": self.evidence_horizon, "exact": self.exact, "witness": self.witness}


def isometry_type(g, N=32, unchecked=False):
    """Elliptic / parabolic / hyperbolic, exact where a family-level
    certificate exists (torsion order, unbounded cyclic growth, m != 0)."""
    family = g.family
    if g.m != 0:
        # translation number |m| > 0, validated for registered families.
        exact = family.a_length_validated
        return IsometryType(HYPERBOLIC, N, exact, {"translation_number": abs(g.m)})
    order = family.element_order(g.h)
    if order is not None:
        return IsometryType(ELLIPTIC, N, True, {"order": order})
    if family.h_unbounded(g.h):
        return IsometryType(PARABOLIC, N, True, {"certificate": "unbounded cyclic growth, zero translation number"})
    lengths = orbit_lengths(g, N, unchecked=unchecked)
    growing = lengths[-1] > lengths[len(lengths) // 2]
    kind = PARABOLIC if growing else ELLIPTIC
    return IsometryType(kind, N, False, {"orbit_lengths": lengths[-4:]})


# ---------------------------------------------------------------------------
# Horokernels and the Busemann quasicharacter
# ---------------------------------------------------------------------------


def horokernel(x, y, N=None, stable_window=6, unchecked=False):
    """Height difference b(y) - b(x) along the fixed end: the stabilized
    value of d(y, alpha^-t) - d(x, alpha^-t) for t -> N.

    When N is omitted it is sized from the word lengths of x and y,
    beyond which the value is provably constant for the registered
    families.  Raises StabilizationError (carrying the trace) when the
    last `stable_window` values do not agree.
    """
    family = x.family
    if N is None:
        depth = word_length(x, unchecked=unchecked) + word_length(y, unchecked=unchecked)
        N = depth + abs(x.m) + abs(y.m) + stable_window + 2
    trace = []
    for t in range(1, N + 1):
        ray = alpha_point(family, -t)
        trace.append(
            word_length(y.inverse() * ray, unchecked=unchecked)
            - word_length(x.inverse() * ray, unchecked=unchecked)
        )
    tail = trace[-stable_window:]
    if len(set(tail)) != 1:
        raise StabilizationError(f"horokernel not constant over the last {stable_window} steps", trace)
    return tail[-1]


@dataclass
class QuasicharacterEstimate:
    value: Fraction
    defect_bound: Fraction
    horizon: int
    estimate: Fraction
    increment: int

    def as_dict(self):
        return {
            "value": float(self.value),
            "defect_bound": float(self.defect_bound),
            "horizon": self.horizon,
            "estimate": float(self.estimate),
            "increment": self.increment,
        }


def busemann_quasicharacter(g, N=16, unchecked=False):
    """Homogeneous quasicharacter of the fixed end, evaluated at g.

    Numerically: h(1, g^N)/N for the oriented horokernel h.  For the
    registered families the value is exactly m(g) (beta(alpha) = 1 and
    beta vanishes on H), and the defect bound is 0; the plain increment
    h(1, g) is reported alongside, staying within a bounded distance of
    the value.
    """
    family = g.family
    one = identity_point(family)
    increment = horokernel(one, g, unchecked=unchecked)
    estimate = Fraction(horokernel(one, g**N, unchecked=unchecked), N)
    if family.a_length_validated:
        value = Fraction(g.m)
        defect = Fraction(0)
    else:
        value = estimate
        defect = abs(estimate - Fraction(increment))
    return QuasicharacterEstimate(value, defect, N, estimate, increment)


# ---------------------------------------------------------------------------
# Action classification
# ---------------------------------------------------------------------------

BOUNDED = "bounded"
HOROCYCLIC = "horocyclic"
LINEAL = "lineal"
FOCAL = "focal"


@dataclass
class ActionVerdict:
    kind: str
    horizon: int
    exact: bool
    witnesses: dict = field(default_factory=dict)
    low_confidence: bool = False

    def as_dict(self):
        return {
            "type": self.kind,
            "horizon": self.horizon,
            "exact": self.exact,
            "witnesses": self.witnesses,
            "low_confidence": self.low_confidence,
        }


def axis_distance(x, unchecked=False):
    """Distance from x to the cyclic axis {alpha^k}."""
    base = word_length(x.inverse() * alpha_point(x.family, x.m), unchecked=unchecked)
    best = base
    for k in range(x.m - base, x.m + base + 1):
        best = min(best, word_length(x.inverse() * alpha_point(x.family, k), unchecked=unchecked))
    return best


def _subgroup_closure(generators, L, cap):
    """Elements reachable by words of length <= L over the generators and
    their inverses; returns (elements, closed, capped)."""
    family = generators[0].family
    gens = []
    seen_gen = set()
    for g in list(generators) + [g.inverse() for g in generators]:
        if g.key() not in seen_gen:
            seen_gen.add(g.key())
            gens.append(g)
    start = identity_point(family)
    elems = {start.key(): start}
    frontier = [start]
    capped = False
    for _ in range(L):
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y.key() not in elems:
                    elems[y.key()] = y
                    nxt.append(y)
                    if len(elems) > cap:
                        capped = True
                        break
            if capped:
                break
        frontier = nxt
        if capped or not frontier:
            break
    closed = not frontier and not capped
    return list(elems.values()), closed, capped


def action_type(generators, L=8, delta=None, cap=20000, unchecked=False):
    """Classify the action of the subgroup generated by `generators`.

    General type is never emitted: these ambient groups fix an end, so
    every subgroup action is bounded, horocyclic, lineal or focal.  The
    lineal/focal split uses the axis neighbourhood of radius
    2*delta + max generator length.
    """
    if not generators:
        raise ValueError("need at least one generator")
    family = generators[0].family
    ms = [g.m for g in generators]

    if any(m != 0 for m in ms):
        if delta is None:
            delta = Fraction(1)
        gen_len = max(word_length(g, unchecked=unchecked) for g in generators)
        radius = 2 * delta + gen_len
        elems, _closed, capped = _subgroup_closure(generators, L, cap)
        worst, witness = 0, None
        for x in elems:
            dist = axis_distance(x, unchecked=unchecked)
            if dist > worst:
                worst, witness = dist, x
        if Fraction(worst) <= radius:
            return ActionVerdict(
                LINEAL,
                L,
                exact=False,
                witnesses={"axis_radius": float(radius), "max_axis_distance": worst},
                low_confidence=capped,
            )
        return ActionVerdict(
            FOCAL,
            L,
            exact=False,
            witnesses={
                "axis_radius": float(radius),
                "escape_witness": repr(witness),
                "escape_distance": worst,
            },
            low_confidence=capped,
        )

    # Everything in the kernel of the exponent: bounded or horocyclic.
    certificate = next((g for g in generators if family.h_unbounded(g.h)), None)
    if certificate is not None:
        return ActionVerdict(
            HOROCYCLIC,
            L,
            exact=True,
            witnesses={"unbounded_generator": repr(certificate)},
        )
    elems, closed, capped = _subgroup_closure(generators, L, cap)
    if closed:
        diameter = max(word_length(x, unchecked=unchecked) for x in elems)
        return ActionVerdict(
            BOUNDED, L, exact=True, witnesses={"subgroup_order": len(elems), "orbit_diameter": diameter}
        )
    diameter = max(word_length(x, unchecked=unchecked) for x in elems)
    return ActionVerdict(
        HOROCYCLIC,
        L,
        exact=False,
        witnesses={"elements_seen": len(elems), "orbit_diameter": diameter},
        low_confidence=capped,
    )


# ---------------------------------------------------------------------------
# Schottky subsemigroups
# ---------------------------------------------------------------------------


@dataclass
class SchottkyReport:
    report: QIReport
    injective: bool
    words_checked: int
    collision: tuple | None

    def as_dict(self):
        out = self.report.as_dict()
        out.update(
            {
                "injective": self.injective,
                "words_checked": self.words_checked,
                "collision": list(self.collision) if self.collision else None,
            }
        )
        return out


def schottky_semigroup_check(a, b, L=10, unchecked=False):
    """Evaluate every positive word in {a, b} of length <= L; report
    injectivity of the evaluation and the tightest embedding constants
    between word length and d(1, value)."""
    if L > 14:
        raise ValueError("more than 2^14 words requested")
    seen = {}
    samples = set()
    collision = None
    frontier = [(identity_point(a.family), "")]
    count = 0
    for _ in range(L):
        nxt = []
        for x, w in frontier:
            for g, tag in ((a, "a"), (b, "b")):
                y, wy = x * g, w + tag
                count += 1
                key = y.key()
                if key in seen and collision is None:
                    collision = (seen[key], wy)
                if key not in seen:
                    seen[key] = wy
                samples.add((len(wy), word_length(y, unchecked=unchecked)))
                nxt.append((y, wy))
        frontier = nxt
    injective = collision is None
    report = qi_embedding_check(sorted(samples))
    report.injective = report.injective and injective
    return SchottkyReport(report, injective, count, collision)
