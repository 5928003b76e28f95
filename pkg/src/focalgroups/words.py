"""Word metric on G = H x| Z for the generating set S = A u {alpha+-}:
normal forms, exact distances, geodesic witnesses, and the windowed BFS
oracle used to validate the closed-form length.

Group elements are pairs (h, m) with composition
(h, m) . (h', m') = (h . alpha^m(h'), m + m'), so that alpha h alpha^-1
equals alpha(h).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .families import INF, FamilyError
from .metric import DistanceMatrix

ALPHA = "a+"
ALPHA_INV = "a-"


class WordError(ValueError):
    pass


class UnvalidatedFamilyError(RuntimeError):
    """Raised when word_length is asked to trust an unvalidated a_length."""


@dataclass(frozen=True)
class Gen:
    """A single A-letter; payload is a raw H-element."""

    payload: object


@dataclass(frozen=True)
class GroupPoint:
    family: object
    h: object
    m: int

    def __mul__(self, other):
        if other.family != self.family:
            raise WordError("mixed families")
        f = self.family
        return GroupPoint(f, f.multiply(self.h, f.alpha_pow(other.h, self.m)), self.m + other.m)

    def inverse(self):
        f = self.family
        return GroupPoint(f, f.alpha_pow(f.invert(self.h), -self.m), -self.m)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = identity_point(self.family)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self):
        return self.m == 0 and self.h == self.family.identity()

    def key(self):
        return self.family.canonical_bytes(self.h) + f"@{self.m}".encode()

    def to_json(self):
        obj = self.family.h_to_json(self.h)
        obj["m"] = self.m
        return obj

    def __repr__(self):
        return f"({self.family.format_h(self.h)}, {self.m})"


def identity_point(family):
    return GroupPoint(family, family.identity(), 0)


def alpha_point(family, k=1):
    return GroupPoint(family, family.identity(), k)


def h_point(family, h):
    return GroupPoint(family, h, 0)


def point_from_json(family, obj):
    return GroupPoint(family, family.h_from_json(obj), int(obj.get("m", 0)))


# ---------------------------------------------------------------------------
# Words and normal forms
# ---------------------------------------------------------------------------


def check_word(family, letters):
    for letter in letters:
        if letter in (ALPHA, ALPHA_INV):
            continue
        if isinstance(letter, Gen):
            if not family.in_A(letter.payload):
                raise WordError(f"generator {family.format_h(letter.payload)} is not in A")
        else:
            raise WordError(f"bad letter {letter!r}")


def evaluate(family, letters):
    """Left-to-right product of the letters, starting at the identity."""
    check_word(family, letters)
    x = identity_point(family)
    for letter in letters:
        if letter == ALPHA:
            x = GroupPoint(family, x.h, x.m + 1)
        elif letter == ALPHA_INV:
            x = GroupPoint(family, x.h, x.m - 1)
        else:
            x = GroupPoint(family, family.multiply(x.h, family.alpha_pow(letter.payload, x.m)), x.m)
    return x


@dataclass(frozen=True)
class NormalForm:
    """The canonical shape alpha^-i g_1 ... g_k alpha^j with g_s in A."""

    family: object
    i: int
    gs: tuple
    j: int

    @property
    def k(self):
        return len(self.gs)

    def length(self):
        return self.i + len(self.gs) + self.j

    def to_word(self):
        return [ALPHA_INV] * self.i + [Gen(g) for g in self.gs] + [ALPHA] * self.j

    def evaluate(self):
        return evaluate(self.family, self.to_word())

    def __repr__(self):
        gs = " ".join(self.family.format_h(g) for g in self.gs)
        return f"a^-{self.i} [{gs}] a^{self.j}"


def rewrite_to_normal_form(family, letters):
    """Move negative alpha-powers to the left and positive ones to the
    right, conjugating the A-letters they hop over (each hop applies
    alpha, which keeps them in A).  The result evaluates to the same
    element and is never longer than the input; on geodesic words the
    length is preserved exactly.
    """
    check_word(family, letters)
    i, gs, t = 0, [], 0
    for letter in letters:
        if letter == ALPHA:
            t += 1
        elif letter == ALPHA_INV:
            t -= 1
        else:
            if t >= 0:
                gs.append(family.alpha_pow(letter.payload, t))
            else:
                i += -t
                gs = [family.alpha_pow(g, -t) for g in gs]
                gs.append(letter.payload)
                t = 0
    if t < 0:
        i += -t
        gs = [family.alpha_pow(g, -t) for g in gs]
        t = 0
    return NormalForm(family, i, tuple(gs), t)


def k0_bound(n0):
    """Uniform bound on the A-block length of geodesic normal forms."""
    import math

    return math.ceil(4 * math.log2(n0 + 2))


# ---------------------------------------------------------------------------
# Exact word length
# ---------------------------------------------------------------------------


def word_length(x, unchecked=False):
    """Exact d_S(1, x) = min over i >= max(0, -m) of
    2i + m + a_length(alpha^i(h)), where x = (h, m).

    The minimization stops at the first i with a_length <= 1: beyond it
    the objective strictly increases because a_length(alpha(h)) <=
    a_length(h).  Finiteness is guaranteed by the confining union axiom.
    """
    family = x.family
    if not family.a_length_validated and not unchecked:
        raise UnvalidatedFamilyError(
            f"{family.name}: a_length has not been validated against the "
            "brute-force oracle; pass unchecked=True to override"
        )
    best, i = None, max(0, -x.m)
    g = family.alpha_pow(x.h, i)
    while True:
        la = family.a_length(g)
        if la is not INF:
            cost = 2 * i + x.m + la
            if best is None or cost < best:
                best = cost
            if la <= 1:
                return best
        i += 1
        g = family.alpha(g)
        if i > 10**6:
            raise WordError("word_length failed to terminate; broken family?")


def geodesic_witness(x, unchecked=False):
    """A word of length word_length(x) in normal-form shape evaluating to x."""
    family = x.family
    target = word_length(x, unchecked=unchecked)
    i = max(0, -x.m)
    while True:
        g = family.alpha_pow(x.h, i)
        la = family.a_length(g)
        if la is not INF and 2 * i + x.m + la == target:
            gs = family.a_factorize(g)
            return [ALPHA_INV] * i + [Gen(a) for a in gs] + [ALPHA] * (x.m + i)
        i += 1


def distance(x, y, unchecked=False):
    """Word distance d(x, y) = |x^-1 y|."""
    return word_length(x.inverse() * y, unchecked=unchecked)


# ---------------------------------------------------------------------------
# Windowed BFS oracle
# ---------------------------------------------------------------------------


@dataclass
class BfsResult:
    family: object
    window: object
    radius: int
    points: dict  # key -> GroupPoint
    dist: dict  # key -> int
    trusted: set  # keys whose closed-form geodesic stays inside the window
    truncated: bool
    generators: list

    def trusted_items(self):
        return [(k, self.points[k], self.dist[k]) for k in sorted(self.trusted)]

    def distance_matrix(self):
        """All-pairs distances within the windowed Cayley graph (upper
        bounds for d_S away from the trusted set)."""
        keys = sorted(self.points)
        index = {k: i for i, k in enumerate(keys)}
        n = len(keys)
        adjacency = [[] for _ in range(n)]
        for k in keys:
            x = self.points[k]
            for s in self.generators:
                yk = (x * s).key()
                if yk in index:
                    adjacency[index[k]].append(index[yk])
        d = np.full((n, n), -1, dtype=np.int64)
        for src in range(n):
            d[src, src] = 0
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in adjacency[u]:
                        if d[src, v] < 0:
                            d[src, v] = d[src, u] + 1
                            nxt.append(v)
                frontier = nxt
        if (d < 0).any():
            raise WordError("window graph is disconnected; enlarge the window")
        return DistanceMatrix([k.decode() for k in keys], d)


def _in_window_point(x, window):
    return abs(x.m) <= window.levels and x.family.in_window(x.h, window)


def bfs_oracle(family, window=None, radius=5):
    """Exact distances from the identity in the Cayley graph restricted
    to the window, over generators (windowed A) u {alpha+-}.

    Window distances can only overestimate d_S; an element is marked
    trusted when an explicitly verified geodesic witness stays inside
    the window (then both bounds meet and the value is exact).
    """
    if window is None:
        window = family.default_window(radius)
    by_key = {}
    for a in family.iter_A_window(window):
        if a == family.identity():
            continue
        for g in (a, family.invert(a)):
            if family.in_A(g) and family.in_window(g, window):
                by_key[family.canonical_bytes(g)] = GroupPoint(family, g, 0)
    gens = list(by_key.values()) + [alpha_point(family, 1), alpha_point(family, -1)]

    start = identity_point(family)
    dist = {start.key(): 0}
    points = {start.key(): start}
    frontier = [start]
    truncated = False
    for d in range(radius):
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if not _in_window_point(y, window):
                    truncated = True
                    continue
                k = y.key()
                if k not in dist:
                    dist[k] = d + 1
                    points[k] = y
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break

    trusted = set()
    for k, x in points.items():
        if _witness_in_window(x, window):
            trusted.add(k)
    return BfsResult(family, window, radius, points, dist, trusted, truncated, gens)


def _witness_in_window(x, window):
    """Walk the closed-form geodesic witness and check every prefix stays
    inside the window and every A-letter is a windowed generator."""
    family = x.family
    try:
        letters = geodesic_witness(x, unchecked=True)
    except FamilyError:
        return False
    pos = identity_point(family)
    for letter in letters:
        if isinstance(letter, Gen) and not family.in_window(letter.payload, window):
            return False
        pos = pos * (
            alpha_point(family, 1)
            if letter == ALPHA
            else alpha_point(family, -1) if letter == ALPHA_INV else h_point(family, letter.payload)
        )
        if not _in_window_point(pos, window):
            return False
    return pos == x


# ---------------------------------------------------------------------------
# Ball generation and samplers
# ---------------------------------------------------------------------------


def ball_points(family, radius, window=None, sample=None, seed=0, unchecked=False):
    """Points of B(radius) with exact pairwise distances.

    Exhaustive over the windowed slice of G by default; when `sample` is
    given, a deterministic seeded sample of that size is drawn instead.
    Returns (points, DistanceMatrix).
    """
    if window is None:
        window = family.default_window(radius)
    pts = []
    if sample is None:
        for h in family.iter_window(window):
            for m in range(-window.levels, window.levels + 1):
                x = GroupPoint(family, h, m)
                if word_length(x, unchecked=unchecked) <= radius:
                    pts.append(x)
    else:
        pts = sample_points(family, sample, max_len=radius, seed=seed, window=window)
        pts = [x for x in pts if word_length(x, unchecked=unchecked) <= radius]
    pts.sort(key=lambda x: x.key())

    n = len(pts)
    d = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        xi_inv = pts[i].inverse()
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = word_length(xi_inv * pts[j], unchecked=unchecked)
    ids = [x.key().decode() for x in pts]
    return pts, DistanceMatrix(ids, d)


def random_word(family, rng, max_len, a_letters):
    length = rng.randint(0, max_len)
    letters = []
    for _ in range(length):
        r = rng.random()
        if r < 0.25:
            letters.append(ALPHA)
        elif r < 0.5:
            letters.append(ALPHA_INV)
        else:
            letters.append(Gen(rng.choice(a_letters)))
    return letters


def window_a_letters(family, window):
    return [a for a in family.iter_A_window(window) if a != family.identity()]


def sample_points(family, count, max_len=8, seed=0, window=None):
    """Deterministic sample of distinct group points: evaluates random
    words over windowed A-letters and alpha+-, dropping duplicates."""
    if window is None:
        window = family.default_window(max_len)
    rng = random.Random(seed)
    a_letters = window_a_letters(family, window)
    seen, out = set(), []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        x = evaluate(family, random_word(family, rng, max_len, a_letters))
        if x.key() not in seen:
            seen.add(x.key())
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# Distortion of H inside G
# ---------------------------------------------------------------------------


@dataclass
class DistortionReport:
    family: dict
    window: dict
    m_max: int
    checked: int
    violations: list
    complete: bool

    @property
    def passed(self):
        return not self.violations

    def as_dict(self):
        return {
            "family": self.family,
            "window": self.window,
            "m_max": self.m_max,
            "checked": self.checked,
            "violations": self.violations,
            "complete": self.complete,
            "passed": self.passed,
        }


def distortion_check(family, m_max=3, window=None, samples=1000, seed=0, exhaustive_cap=4096):
    """Verify that products of 2^m windowed A-elements have word length
    <= 2*n0*m + 1 for m <= m_max.

    Exhaustive via iterated set products while the closure stays small
    (the lamplighter case, where A.A = A); falls back to seeded random
    products otherwise.
    """
    if window is None:
        window = family.default_window(6)
    a_window = list(family.iter_A_window(window))
    rng = random.Random(seed)
    violations = []
    checked = 0
    complete = True

    # A contains the identity, so the set of <=2^m-fold products is the
    # set of exactly-2^m-fold products; square the set m times.
    current, exhaustive = set(a_window), True
    for m in range(1, m_max + 1):
        bound = 2 * family.n0 * m + 1
        if exhaustive:
            nxt = set()
            for a in current:
                for b in current:
                    nxt.add(family.multiply(a, b))
                    if len(nxt) > exhaustive_cap:
                        break
                if len(nxt) > exhaustive_cap:
                    break
            if len(nxt) > exhaustive_cap:
                exhaustive = False
                complete = False
            else:
                current = nxt
        if exhaustive:
            batch = current
        else:
            batch = []
            for _ in range(samples):
                h = family.identity()
                for _ in range(2**m):
                    h = family.multiply(h, rng.choice(a_window))
                batch.append(h)
        for h in batch:
            checked += 1
            wl = word_length(h_point(family, h), unchecked=True)
            if wl > bound:
                violations.append({"m": m, "h": family.format_h(h), "length": wl, "bound": bound})
    return DistortionReport(
        family=family.config(),
        window=window.as_dict(),
        m_max=m_max,
        checked=checked,
        violations=violations[:10],
        complete=complete,
    )


# ---------------------------------------------------------------------------
# Word syntax: "a- g{0:1} a+"
# ---------------------------------------------------------------------------


def parse_word(family, text):
    letters = []
    for token in text.split():
        if token == "a+":
            letters.append(ALPHA)
        elif token == "a-":
            letters.append(ALPHA_INV)
        elif token.startswith("g{") and token.endswith("}"):
            letters.append(Gen(family.parse_gen(token[2:-1])))
        else:
            raise WordError(f"bad word token {token!r}")
    check_word(family, letters)
    return letters


def format_word(family, letters):
    parts = []
    for letter in letters:
        if letter == ALPHA:
            parts.append("a+")
        elif letter == ALPHA_INV:
            parts.append("a-")
        else:
            parts.append("g" + family.format_h(letter.payload))
    return " ".join(parts)
