"""Concrete confined semidirect-product data: a group H, an automorphism
alpha and a distinguished subset A with alpha(A) contained in A, the union
of the alpha^-n(A) exhausting H, and alpha^n0(A.A) back inside A.

Every family here does exact arithmetic (integers, residues, Fractions)
and exposes the same capability surface, so the word-metric and boundary
layers stay family-agnostic.  A is symmetrized and contains the identity
by construction in all families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

INF = float("inf")


class FamilyError(ValueError):
    """Bad element, bad window, or an unsupported family operation."""


class GroupFamily:
    """Capability contract for one confined pair (H, alpha, A).

    Elements of H are plain hashable payloads (tuples, Fractions); the
    family object owns all arithmetic on them.  Stateless and immutable,
    hence freely shareable.
    """

    name = "abstract"
    n0 = 0
    # Set once the closed-form a_length has been checked against the
    # brute-force windowed oracle (validate_a_length below); word_length
    # refuses unvalidated families unless explicitly overridden.
    a_length_validated = False

    # -- group arithmetic ------------------------------------------------
    def identity(self):
        raise NotImplementedError

    def multiply(self, h1, h2):
        raise NotImplementedError

    def invert(self, h):
        raise NotImplementedError

    def alpha(self, h):
        raise NotImplementedError

    def alpha_inv(self, h):
        raise NotImplementedError

    def alpha_pow(self, h, k):
        for _ in range(abs(k)):
            h = self.alpha(h) if k > 0 else self.alpha_inv(h)
        return h

    # -- the confined subset A -------------------------------------------
    def in_A(self, h):
        raise NotImplementedError

    def a_length(self, h):
        """Least k with h a product of k elements of A (0 for identity,
        inf when no power of A reaches h)."""
        raise NotImplementedError

    def a_factorize(self, h):
        """A witness list of a_length(h) elements of A with product h."""
        raise NotImplementedError

    # -- certificates and surrogates ---------------------------------------
    def element_order(self, h):
        """Order of h in H, or None when infinite."""
        raise NotImplementedError

    def h_unbounded(self, h):
        """True when the cyclic subgroup generated by h is certified
        unbounded in the word metric (family-specific closed-form
        argument); False means no certificate, not boundedness."""
        return False

    def compaction_index(self):
        """Counting surrogate for the index [A : alpha(A)]."""
        raise FamilyError(f"{self.name}: no counting surrogate available")

    # -- serialization ------------------------------------------------------
    def canonical_bytes(self, h):
        raise NotImplementedError

    def h_to_json(self, h):
        raise NotImplementedError

    def h_from_json(self, obj):
        raise NotImplementedError

    def format_h(self, h):
        raise NotImplementedError

    def parse_gen(self, text):
        """Parse the payload of a g{...} word token."""
        raise NotImplementedError

    def config(self):
        raise NotImplementedError

    # -- windows ------------------------------------------------------------
    def default_window(self, radius):
        raise NotImplementedError

    def iter_window(self, window):
        """All H-elements inside a finite window."""
        raise NotImplementedError

    def iter_A_window(self, window):
        """All A-elements inside the window."""
        raise NotImplementedError

    def in_window(self, h, window):
        raise NotImplementedError

    # ------------------------------------------------------------------
    def __eq__(self, other):
        return type(other) is type(self) and other.config() == self.config()

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.config().items(), key=repr))))

    def __repr__(self):
        items = ", ".join(f"{k}={v!r}" for k, v in self.config().items() if k != "family")
        return f"{type(self).__name__}({items})"


@dataclass(frozen=True)
class LamplighterWindow:
    """Lamp supports restricted to [lo, hi]; alpha-exponents to [-levels, levels]."""

    lo: int
    hi: int
    levels: int

    def as_dict(self):
        return {"lo": self.lo, "hi": self.hi, "levels": self.levels}


class LamplighterFamily(GroupFamily):
    """H = direct sum over Z of Z_q, alpha shifts lamp positions by +1,
    A = configurations supported on [0, +oo).

    A is a subgroup (A.A = A), so n0 = 0 and a_length takes values in
    {0, 1, inf}.  Elements are sorted tuples of (position, nonzero residue).
    """

    n0 = 0
    a_length_validated = True

    def __init__(self, q):
        if q < 2:
            raise FamilyError("lamplighter needs q >= 2")
        self.q = q

    @property
    def name(self):
        return f"lamplighter(q={self.q})"

    def identity(self):
        return ()

    def multiply(self, h1, h2):
        lamps = dict(h1)
        for pos, val in h2:
            s = (lamps.get(pos, 0) + val) % self.q
            if s:
                lamps[pos] = s
            else:
                lamps.pop(pos, None)
        return tuple(sorted(lamps.items()))

    def invert(self, h):
        return tuple((pos, (self.q - val) % self.q) for pos, val in h)

    def alpha(self, h):
        return tuple((pos + 1, val) for pos, val in h)

    def alpha_inv(self, h):
        return tuple((pos - 1, val) for pos, val in h)

    def alpha_pow(self, h, k):
        return tuple((pos + k, val) for pos, val in h)

    def in_A(self, h):
        return all(pos >= 0 for pos, _ in h)

    def a_length(self, h):
        if not h:
            return 0
        return 1 if self.in_A(h) else INF

    def a_factorize(self, h):
        if not h:
            return []
        if not self.in_A(h):
            raise FamilyError("element outside every power of A")
        return [h]

    def element_order(self, h):
        return math.lcm(*(self.q // math.gcd(val, self.q) for _, val in h)) if h else 1

    def compaction_index(self):
        # [A : alpha(A)]: one lamp position (q residues) is forgotten by
        # the shift, independently of any window placed on the support.
        return self.q

    def canonical_bytes(self, h):
        return ("L:" + ",".join(f"{pos}:{val}" for pos, val in h)).encode()

    def h_to_json(self, h):
        return {"lamps": {str(pos): val for pos, val in h}}

    def h_from_json(self, obj):
        lamps = obj.get("lamps", {})
        out = {}
        for pos, val in lamps.items():
            val = int(val) % self.q
            if val:
                out[int(pos)] = val
        return tuple(sorted(out.items()))

    def format_h(self, h):
        return "{" + ",".join(f"{pos}:{val}" for pos, val in h) + "}"

    def parse_gen(self, text):
        text = text.strip()
        # long form g{lamps:{0:1}} and short form g{0:1} both accepted
        if text.startswith("lamps:"):
            text = text[len("lamps:") :].strip().strip("{}")
        if not text:
            return ()
        out = {}
        for chunk in text.split(","):
            pos, _, val = chunk.partition(":")
            val = int(val) % self.q if val else 1
            if val:
                out[int(pos)] = val
        return tuple(sorted(out.items()))

    def config(self):
        return {"family": "lamplighter", "q": self.q}

    def default_window(self, radius):
        r = max(1, (radius + 1) // 2)
        return LamplighterWindow(lo=-min(r, 3), hi=min(r, 3), levels=radius)

    def _iter_configs(self, lo, hi):
        positions = range(lo, hi + 1)
        for values in itertools.product(range(self.q), repeat=len(positions)):
            yield tuple((p, v) for p, v in zip(positions, values) if v)

    def iter_window(self, window):
        return self._iter_configs(window.lo, window.hi)

    def iter_A_window(self, window):
        return self._iter_configs(max(window.lo, 0), window.hi)

    def in_window(self, h, window):
        return all(window.lo <= pos <= window.hi for pos, _ in h)

    def lamp(self, pos, val=1):
        """Single-lamp configuration."""
        val %= self.q
        return ((pos, val),) if val else ()


class SpoofIdentityFamily(LamplighterFamily):
    """Negative control: lamplighter data with alpha replaced by the
    identity map.  alpha(A) = A is not strictly contained in A, so the
    confining axioms must fail; a_length is deliberately left unvalidated.
    """

    a_length_validated = False

    @property
    def name(self):
        return f"spoof-identity(q={self.q})"

    def alpha(self, h):
        return h

    def alpha_inv(self, h):
        return h

    def alpha_pow(self, h, k):
        return h

    def compaction_index(self):
        return 1  # alpha(A) = A

    def config(self):
        return {"family": "spoof-identity", "q": self.q}


@dataclass(frozen=True)
class NadicWindow:
    """Values |x| <= xmax with denominators dividing n^dpow; exponents
    to [-levels, levels]."""

    xmax: int
    dpow: int
    levels: int

    def as_dict(self):
        return {"xmax": self.xmax, "dpow": self.dpow, "levels": self.levels}


class NadicFamily(GroupFamily):
    """H = Z[1/n] additive, alpha(x) = x/n, A = {|x| <= 1}.

    alpha(A.A) = [-2/n, 2/n] lies in A for n >= 2, so n0 = 1.  Elements
    are Fractions whose denominator is a power of n.
    """

    n0 = 1
    a_length_validated = True

    def __init__(self, n):
        if n < 2:
            raise FamilyError("n-adic needs n >= 2")
        self.n = n

    @property
    def name(self):
        return f"nadic(n={self.n})"

    def _check(self, x):
        d = x.denominator
        while (g := math.gcd(d, self.n)) > 1:
            d //= g
        if d != 1:
            raise FamilyError(f"denominator of {x} is not a power of {self.n}")
        return x

    def element(self, value):
        return self._check(Fraction(value))

    def identity(self):
        return Fraction(0)

    def multiply(self, h1, h2):
        return h1 + h2

    def invert(self, h):
        return -h

    def alpha(self, h):
        return h / self.n

    def alpha_inv(self, h):
        return h * self.n

    def alpha_pow(self, h, k):
        return h / Fraction(self.n) ** k if k >= 0 else h * self.n ** (-k)

    def in_A(self, h):
        return abs(h) <= 1

    def a_length(self, h):
        # ceil(|h|): sums of k unit-interval elements reach exactly |x| <= k.
        return -((-abs(h.numerator)) // h.denominator)

    def a_factorize(self, h):
        k = self.a_length(h)
        if k == 0:
            return []
        sign = 1 if h > 0 else -1
        parts = [Fraction(sign)] * (k - 1)
        parts.append(h - sign * (k - 1))
        return parts

    def element_order(self, h):
        return 1 if h == 0 else None

    def h_unbounded(self, h):
        # d(1, (k*h, 0)) = min_i 2i + ceil(|k h| / n^i) is nondecreasing
        # and unbounded in k, each term being so.
        return h != 0

    def compaction_index(self):
        # Length ratio |A| / |alpha(A)| = 2 / (2/n), exact in Z[1/n]-density.
        ratio = Fraction(2) / (Fraction(2) / self.n)
        assert ratio.denominator == 1
        return int(ratio)

    def lattice_count_ratio(self, dpow):
        """Windowed lattice-point surrogate: points of A over points of
        alpha(A) on the 1/n^dpow grid; tends to the exact index."""
        coarse = 2 * self.n**dpow + 1
        fine = 2 * self.n ** (dpow - 1) + 1
        return Fraction(coarse, fine)

    def canonical_bytes(self, h):
        return f"N:{h.numerator}/{h.denominator}".encode()

    def _den_pow(self, h):
        d, k = h.denominator, 0
        while d > 1:
            d //= self.n
            k += 1
        return k

    def h_to_json(self, h):
        k = self._den_pow(h)
        return {"num": str(h.numerator * self.n**k // h.denominator), "den_pow": k}

    def h_from_json(self, obj):
        return self._check(Fraction(int(obj["num"]), self.n ** int(obj.get("den_pow", 0))))

    def format_h(self, h):
        return f"{{{h}}}"

    def parse_gen(self, text):
        return self._check(Fraction(text.strip()))

    def config(self):
        return {"family": "nadic", "n": self.n}

    def default_window(self, radius):
        return NadicWindow(xmax=max(2, radius - 2), dpow=min(radius, 4), levels=radius)

    def iter_window(self, window):
        den = self.n**window.dpow
        for k in range(-window.xmax * den, window.xmax * den + 1):
            yield Fraction(k, den)

    def iter_A_window(self, window):
        den = self.n**window.dpow
        for k in range(-den, den + 1):
            yield Fraction(k, den)

    def in_window(self, h, window):
        return abs(h) <= window.xmax and (h * self.n**window.dpow).denominator == 1


@dataclass(frozen=True)
class ProductWindow:
    left: object
    right: object
    levels: int
    cap: int = 20000

    def as_dict(self):
        return {"left": self.left.as_dict(), "right": self.right.as_dict(), "levels": self.levels}


class ProductFamily(GroupFamily):
    """Componentwise product of two families, one shared alpha-exponent.

    A = A1 x A2, n0 = max(n0_1, n0_2), and since both A factors contain
    the identity, a_length is the max of the component lengths.
    """

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.n0 = max(left.n0, right.n0)

    @property
    def name(self):
        return f"product({self.left.name}, {self.right.name})"

    @property
    def a_length_validated(self):
        return self.left.a_length_validated and self.right.a_length_validated

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def multiply(self, h1, h2):
        return (self.left.multiply(h1[0], h2[0]), self.right.multiply(h1[1], h2[1]))

    def invert(self, h):
        return (self.left.invert(h[0]), self.right.invert(h[1]))

    def alpha(self, h):
        return (self.left.alpha(h[0]), self.right.alpha(h[1]))

    def alpha_inv(self, h):
        return (self.left.alpha_inv(h[0]), self.right.alpha_inv(h[1]))

    def alpha_pow(self, h, k):
        return (self.left.alpha_pow(h[0], k), self.right.alpha_pow(h[1], k))

    def in_A(self, h):
        return self.left.in_A(h[0]) and self.right.in_A(h[1])

    def a_length(self, h):
        return max(self.left.a_length(h[0]), self.right.a_length(h[1]))

    def a_factorize(self, h):
        f1 = self.left.a_factorize(h[0])
        f2 = self.right.a_factorize(h[1])
        k = max(len(f1), len(f2))
        f1 += [self.left.identity()] * (k - len(f1))
        f2 += [self.right.identity()] * (k - len(f2))
        return list(zip(f1, f2))

    def element_order(self, h):
        o1 = self.left.element_order(h[0])
        o2 = self.right.element_order(h[1])
        return None if o1 is None or o2 is None else math.lcm(o1, o2)

    def h_unbounded(self, h):
        return self.left.h_unbounded(h[0]) or self.right.h_unbounded(h[1])

    def compaction_index(self):
        return self.left.compaction_index() * self.right.compaction_index()

    def canonical_bytes(self, h):
        return b"P:(" + self.left.canonical_bytes(h[0]) + b")x(" + self.right.canonical_bytes(h[1]) + b")"

    def h_to_json(self, h):
        return {"left": self.left.h_to_json(h[0]), "right": self.right.h_to_json(h[1])}

    def h_from_json(self, obj):
        return (self.left.h_from_json(obj["left"]), self.right.h_from_json(obj["right"]))

    def format_h(self, h):
        return f"({self.left.format_h(h[0])}|{self.right.format_h(h[1])})"

    def parse_gen(self, text):
        lhs, sep, rhs = text.partition("|")
        if not sep:
            raise FamilyError("product generator payload needs 'left|right'")
        return (self.left.parse_gen(lhs.strip(" {}")), self.right.parse_gen(rhs.strip(" {}")))

    def config(self):
        return {"family": "product", "left": self.left.config(), "right": self.right.config()}

    def default_window(self, radius):
        return ProductWindow(
            left=self.left.default_window(radius),
            right=self.right.default_window(radius),
            levels=radius,
        )

    def iter_window(self, window):
        pairs = itertools.product(self.left.iter_window(window.left), self.right.iter_window(window.right))
        return itertools.islice(pairs, window.cap)

    def iter_A_window(self, window):
        pairs = itertools.product(self.left.iter_A_window(window.left), self.right.iter_A_window(window.right))
        return itertools.islice(pairs, window.cap)

    def in_window(self, h, window):
        return self.left.in_window(h[0], window.left) and self.right.in_window(h[1], window.right)


def family_from_config(config):
    """Build a family from a config record such as
    {"family": "lamplighter", "q": 2} or the shorthand "lamplighter:2"."""
    if isinstance(config, str):
        config = _parse_shorthand(config)
    kind = config.get("family")
    if kind == "lamplighter":
        return LamplighterFamily(int(config["q"]))
    if kind == "nadic":
        return NadicFamily(int(config["n"]))
    if kind == "product":
        return ProductFamily(family_from_config(config["left"]), family_from_config(config["right"]))
    if kind == "spoof-identity":
        return SpoofIdentityFamily(int(config.get("q", 2)))
    raise FamilyError(f"unknown family {kind!r}")


def _parse_shorthand(text):
    text = text.strip()
    if text.startswith("{"):
        import json

        return json.loads(text)
    if text.startswith("product(") and text.endswith(")"):
        inner = text[len("product(") : -1]
        depth, cut = 0, None
        for idx, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                cut = idx
                break
        if cut is None:
            raise FamilyError(f"cannot split product spec {text!r}")
        return {
            "family": "product",
            "left": _parse_shorthand(inner[:cut]),
            "right": _parse_shorthand(inner[cut + 1 :]),
        }
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "lamplighter":
        return {"family": "lamplighter", "q": int(arg or 2)}
    if kind == "nadic":
        return {"family": "nadic", "n": int(arg or 2)}
    if kind == "spoof-identity":
        return {"family": "spoof-identity", "q": int(arg or 2)}
    raise FamilyError(f"unknown family shorthand {text!r}")


# ---------------------------------------------------------------------------
# Confining-axiom verification and oracles
# ---------------------------------------------------------------------------


@dataclass
class ConfiningReport:
    family: dict
    window: dict
    exhaust_depth: int
    alpha_into_A: bool
    strict_witness: object
    absorbed: bool
    absorption_failures: list = field(default_factory=list)
    product_absorbed: bool = True
    product_failures: list = field(default_factory=list)
    complete: bool = True

    @property
    def passed(self):
        return (
            self.alpha_into_A
            and self.strict_witness is not None
            and self.absorbed
            and self.product_absorbed
        )

    def as_dict(self):
        return {
            "family": self.family,
            "window": self.window,
            "exhaust_depth": self.exhaust_depth,
            "alpha_into_A": self.alpha_into_A,
            "strict_witness": self.strict_witness,
            "absorbed": self.absorbed,
            "absorption_failures": self.absorption_failures,
            "product_absorbed": self.product_absorbed,
            "product_failures": self.product_failures,
            "complete": self.complete,
            "passed": self.passed,
        }


def verify_confining(family, window=None, exhaust_depth=8, max_elements=100000):
    """Check the three confining axioms on a windowed sample.

    (a) alpha(A) inside A, with a strictness witness a in A \\ alpha(A);
    (b) every windowed h has alpha^m(h) in A for some m <= exhaust_depth;
    (c) alpha^n0(a.a') in A for all windowed pairs a, a' in A.
    """
    if window is None:
        window = family.default_window(6)
    report = ConfiningReport(
        family=family.config(),
        window=window.as_dict(),
        exhaust_depth=exhaust_depth,
        alpha_into_A=True,
        strict_witness=None,
        absorbed=True,
    )

    a_window = list(family.iter_A_window(window))
    if len(a_window) > max_elements:
        a_window = a_window[:max_elements]
        report.complete = False

    for a in a_window:
        if not family.in_A(family.alpha(a)):
            report.alpha_into_A = False
            report.absorption_failures.append({"axiom": "alpha(A) in A", "witness": family.format_h(a)})
            break
    for a in a_window:
        # a is outside alpha(A) iff alpha^-1(a) is not in A.
        if not family.in_A(family.alpha_inv(a)):
            report.strict_witness = family.format_h(a)
            break

    count = 0
    for h in family.iter_window(window):
        count += 1
        if count > max_elements:
            report.complete = False
            break
        g, ok = h, False
        for _ in range(exhaust_depth + 1):
            if family.in_A(g):
                ok = True
                break
            g = family.alpha(g)
        if not ok:
            report.absorbed = False
            report.absorption_failures.append({"axiom": "union of alpha^-n(A) = H", "witness": family.format_h(h)})
            if len(report.absorption_failures) > 5:
                break

    pairs = itertools.product(a_window, a_window)
    for k, (a, b) in enumerate(pairs):
        if k >= max_elements:
            report.complete = False
            break
        prod = family.alpha_pow(family.multiply(a, b), family.n0)
        if not family.in_A(prod):
            report.product_absorbed = False
            report.product_failures.append(
                {"a": family.format_h(a), "b": family.format_h(b), "image": family.format_h(prod)}
            )
            if len(report.product_failures) > 5:
                break
    return report


def brute_force_a_length(family, h, window, max_k=8):
    """Independent a_length oracle: breadth-first closure of windowed
    A-power sums, no closed form involved."""
    if h == family.identity():
        return 0
    gens = [a for a in family.iter_A_window(window) if a != family.identity()]
    seen = {family.identity()}
    frontier = [family.identity()]
    for k in range(1, max_k + 1):
        nxt = []
        for x in frontier:
            for a in gens:
                y = family.multiply(x, a)
                if y == h:
                    return k
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return INF


def validate_a_length(family, window, max_k=6, limit=400):
    """Compare the family's closed-form a_length with the brute-force
    oracle on windowed elements; returns the list of mismatches."""
    mismatches = []
    for idx, h in enumerate(family.iter_window(window)):
        if idx >= limit:
            break
        claimed = family.a_length(h)
        if claimed is INF or claimed > max_k:
            continue
        actual = brute_force_a_length(family, h, window, max_k=max_k)
        if actual != claimed:
            mismatches.append((family.format_h(h), claimed, actual))
    return mismatches
