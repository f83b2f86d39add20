"""Cost accounting for multiple-precision computations.

A :class:`CostLedger` records one ``(class, bits)`` event per charged
operation. Events are priced afterwards by a :class:`CostModel`, so the
same trace can be replayed under a linear, power-law, Karatsuba or
tabulated model.

Classes used by this package:

    M     multiplication           S     squaring
    A     addition / scalar op     eval  function evaluation
    D     division                 I     reciprocal
    R     square root              Q     inverse square root

Multiplications are charged as full products truncated afterwards (the
``M*`` flavor: all 2n product bits are formed). Whether that is
asymptotically the same as forming only the leading n bits is not known in
general; it is for FFT-based products. The ratio harness below only uses
ledgers, so it is unaffected.
"""

import csv
import io
import math
from bisect import bisect_left
from collections import namedtuple
from fractions import Fraction

from .errors import ConfigurationError

CLASSES = ("M", "S", "A", "eval", "D", "I", "R", "Q")

Event = namedtuple("Event", "cls bits")


class CostLedger:
    """Append-only trace of charged operations."""

    def __init__(self, events=()):
        self._events = []
        for ev in events:
            self.charge(*ev)

    def charge(self, cls, n):
        if cls not in CLASSES:
            raise ConfigurationError("unknown operation class %r" % (cls,))
        n = int(n)
        if n < 0:
            raise ConfigurationError("negative precision")
        self._events.append(Event(cls, n))
        return self

    @property
    def events(self):
        return tuple(self._events)

    def __len__(self):
        return len(self._events)

    def __iter__(self):
        return iter(tuple(self._events))

    def __add__(self, other):
        return CostLedger(self.events + other.events)

    def totals(self, model=None):
        """Cost per class under ``model`` (linear by default)."""
        model = model or LINEAR
        out = {}
        for ev in self._events:
            out[ev.cls] = out.get(ev.cls, 0) + model.cost(ev.bits)
        return out

    def to_csv(self, fh=None):
        """Write ``class,precision_bits`` rows; return the text if no file given."""
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "precision_bits"])
        for ev in self._events:
            w.writerow([ev.cls, ev.bits])
        if fh is None:
            return buf.getvalue()
        return None

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        return cls((r[0], int(r[1])) for r in rows[1:] if r)


def charge(ledger, cls, n):
    """Append one event; returns the ledger. ``None`` ledgers are ignored."""
    if ledger is None:
        return None
    return ledger.charge(cls, n)


class CostModel:
    """Price of one operation at precision n.

    kind: ``linear`` (n), ``power`` (n**alpha), ``karatsuba`` (n**log2(3))
    or ``tabulated`` (piecewise-linear through ``table`` points, linear
    extrapolation at both ends, clamped at zero).
    """

    KINDS = ("linear", "power", "karatsuba", "tabulated")

    def __init__(self, kind="linear", alpha=None, table=None):
        if kind not in self.KINDS:
            raise ConfigurationError("unknown cost model %r" % (kind,))
        self.kind = kind
        self.alpha = alpha
        if kind == "power":
            if alpha is None or alpha <= 0:
                raise ConfigurationError("power model needs alpha > 0")
        elif kind == "karatsuba":
            self.alpha = math.log2(3)
        elif kind == "linear":
            self.alpha = 1.0
        if kind == "tabulated":
            if not table or len(table) < 2:
                raise ConfigurationError("tabulated model needs at least two points")
            pts = sorted((float(k), float(v)) for k, v in dict(table).items())
            ys = [v for _, v in pts]
            if any(b < a for a, b in zip(ys, ys[1:])) or ys[0] <= 0:
                raise ConfigurationError("tabulated costs must be positive and nondecreasing")
            self._xs = [k for k, _ in pts]
            self._ys = ys

    def cost(self, n):
        if n <= 0:
            return 0.0
        if self.kind == "linear":
            return float(n)
        if self.kind in ("power", "karatsuba"):
            return float(n) ** self.alpha
        xs, ys = self._xs, self._ys
        i = bisect_left(xs, n)
        if i == 0:
            i = 1
        elif i >= len(xs):
            i = len(xs) - 1
        x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
        return max(0.0, y0 + (y1 - y0) * (n - x0) / (x1 - x0))

    def __repr__(self):
        if self.kind == "power":
            return "CostModel('power', alpha=%g)" % self.alpha
        return "CostModel(%r)" % self.kind


LINEAR = CostModel("linear")


def evaluate_trace(ledger, model=None, classes=None, weights=None):
    """Sum of model costs over events.

    ``classes`` keeps only the listed classes; ``weights`` maps a class to a
    multiplier (classes missing from ``weights`` are dropped).
    """
    model = model or LINEAR
    total = 0.0
    for ev in ledger.events:
        if classes is not None and ev.cls not in classes:
            continue
        if weights is not None:
            wgt = weights.get(ev.cls)
            if not wgt:
                continue
            total += wgt * model.cost(ev.bits)
        else:
            total += model.cost(ev.bits)
    return total


# ---------------------------------------------------------------------------
# Table of best known bounds C_XY (time for X in units of one Y)
# ---------------------------------------------------------------------------

OPS = ("D", "I", "M", "Q", "R", "S")

TABLE71 = {
    "D": {"D": 1.0, "I": 1.0, "M": 2.0, "Q": 3.0, "R": 2.0, "S": 2.0},
    "I": {"D": 7.0, "I": 1.0, "M": 6.0, "Q": 15.0, "R": 14.0, "S": 3.0},
    "M": {"D": 4.0, "I": 3.0, "M": 1.0, "Q": 4.5, "R": 5.5, "S": 1.0},
    "Q": {"D": 10.0, "I": 4.0, "M": 6.0, "Q": 1.0, "R": 5.0, "S": 3.0},
    "R": {"D": 7.5, "I": 6.0, "M": 6.0, "Q": 3.0, "R": 1.0, "S": 3.0},
    "S": {"D": 7.5, "I": 5.5, "M": 2.0, "Q": 7.0, "R": 9.0, "S": 1.0},
}
# TABLE71[Y][X] is the bound on C_XY.


def table71_bound(x, y):
    return TABLE71[y][x]


# Implemented reductions. Each entry: X, Y, the value claimed for this route,
# and the class weights that express the trace in units of one Y.
_M_UNITS = {"M": 1.0, "S": 1.0}
_S_UNITS = {"M": 2.0, "S": 1.0}

VARIANTS = {
    "mul":              ("M", "M", 1.0, _M_UNITS),
    "square":           ("S", "M", 1.0, _M_UNITS),
    "recip2":           ("I", "M", 3.0, _M_UNITS),
    "recip3":           ("I", "M", 3.0, _M_UNITS),
    "div_recip":        ("D", "M", 4.0, _M_UNITS),
    "div_km":           ("D", "M", 3.5, _M_UNITS),
    "rsqrt3":           ("Q", "M", 4.5, _M_UNITS),
    "rsqrt2":           ("Q", "M", 5.0, _M_UNITS),
    "sqrt_rsqrt":       ("R", "M", 5.5, _M_UNITS),
    "sqrt_km":          ("R", "M", 4.25, _M_UNITS),
    "mul_via_squares":  ("M", "S", 2.0, _S_UNITS),
    "recip3_s":         ("I", "S", 5.5, _S_UNITS),
    "rsqrt3_s":         ("Q", "S", 7.0, _S_UNITS),
    "sqrt_newton":      ("R", "D", 2.0, {"D": 1.0}),
    "square_via_recip": ("S", "I", 3.0, {"I": 1.0}),
    "rsqrt_via_sqrts":  ("Q", "R", 3.0, {"R": 1.0}),
    "div_via_sqrts":    ("D", "R", 7.5, {"R": 1.0, "S": 3.0}),
}


def _run_variant(name, n, ledger):
    # imported here: newton and mulkernel charge ledgers but never import this module
    from . import mulkernel as mk
    from . import newton as nw
    from .bigfrac import from_fraction

    # fixed, irrational-looking operands so every level does real work
    a = from_fraction(Fraction(7, 5), n + 16)
    b = from_fraction(Fraction(11, 13), n + 16)
    if name == "mul":
        mk.mul(a, b, n, ledger)
    elif name == "square":
        mk.square(a, n, ledger)
    elif name in ("recip2", "recip3"):
        nw.recip(a, n, name, ledger=ledger)
    elif name == "recip3_s":
        nw.recip(a, n, "recip3", ledger=ledger)
    elif name == "div_recip":
        nw.div(b, a, n, "recip2", ledger=ledger)
    elif name == "div_km":
        nw.div(b, a, n, "div_km", ledger=ledger)
    elif name in ("rsqrt3", "rsqrt2"):
        nw.rsqrt(a, n, name, ledger=ledger)
    elif name == "rsqrt3_s":
        nw.rsqrt(a, n, "rsqrt3", ledger=ledger)
    elif name == "sqrt_rsqrt":
        nw.sqrt(a, n, "rsqrt3", ledger=ledger)
    elif name == "sqrt_km":
        nw.sqrt(a, n, "sqrt_km", ledger=ledger)
    elif name == "sqrt_newton":
        nw.sqrt(a, n, "sqrt_newton", ledger=ledger)
    elif name == "mul_via_squares":
        mk.mul_via_squares(a, b, n, ledger)
    # the identity routes lose a fixed fraction of their working precision,
    # so they run at 3n (good to n) or 3n/2 (good to n)
    elif name == "square_via_recip":
        nw.square_via_recip(a, 3 * n, ledger=ledger)
    elif name == "rsqrt_via_sqrts":
        nw.rsqrt_via_sqrts(a, 3 * n // 2, ledger=ledger)
    elif name == "div_via_sqrts":
        nw.div_via_sqrts(b, a, 3 * n // 2, ledger=ledger)
    else:
        raise ConfigurationError("unknown variant %r" % (name,))


def trace_variant(name, n):
    """Ledger of one run of reduction ``name`` producing an n-bit result."""
    if name not in VARIANTS:
        raise ConfigurationError("unknown variant %r" % (name,))
    led = CostLedger()
    _run_variant(name, n, led)
    return led


def measure_variant(name, n, model=None):
    """Measured C_XY for one reduction: trace cost over the cost of one Y at n."""
    x, y, claim, weights = VARIANTS[name]
    model = model or LINEAR
    led = trace_variant(name, n)
    return evaluate_trace(led, model, weights=weights) / model.cost(n)


RatioRow = namedtuple("RatioRow", "n variant x y measured claimed table_bound ok")


def ratio_table(n_list, variants=None, model=None, tolerance=0.10):
    """Measured C_XY for each variant and n, next to the claimed and tabulated bounds.

    ``ok`` requires the measurement not to exceed the route's claimed value by
    more than ``tolerance`` (relative).
    """
    variants = list(VARIANTS) if variants is None else list(variants)
    for v in variants:
        if v not in VARIANTS:
            raise ConfigurationError("unknown variant %r" % (v,))
    rows = []
    for n in n_list:
        for v in variants:
            x, y, claim, _ = VARIANTS[v]
            m = measure_variant(v, n, model)
            rows.append(RatioRow(n, v, x, y, m, claim, table71_bound(x, y),
                                 m <= claim * (1 + tolerance)))
    return rows


def composed_bounds(measured):
    """Close a partial C_XY matrix under C_XZ <= C_XY * C_YZ.

    ``measured`` maps (X, Y) to a value; identity cells are 1. Returns a full
    dict over OPS x OPS (``inf`` where no chain exists).
    """
    c = {(x, y): (1.0 if x == y else math.inf) for x in OPS for y in OPS}
    for k, v in measured.items():
        c[k] = min(c[k], v)
    for z in OPS:
        for x in OPS:
            for y in OPS:
                via = c[(x, z)] * c[(z, y)]
                if via < c[(x, y)]:
                    c[(x, y)] = via
    return c


def table71_report(n, model=None):
    """Full 6x6 grid: best measured route per cell, else a composed bound."""
    rows = ratio_table([n], model=model)
    best = {}
    for r in rows:
        k = (r.x, r.y)
        best[k] = min(best.get(k, math.inf), r.measured)
    comp = composed_bounds(best)
    grid = {}
    for y in OPS:
        for x in OPS:
            if x == y:
                grid[(x, y)] = (1.0, "identity")
            elif (x, y) in best:
                grid[(x, y)] = (best[(x, y)], "measured")
            else:
                grid[(x, y)] = (comp[(x, y)], "composed")
    return grid
