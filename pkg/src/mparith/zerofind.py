"""Variable-precision zero finders and their asymptotic constants.

Every solver follows a *plan*: target accuracies a_0 < a_1 < ... < a_N = n
(bits) for its iterates, and for every function evaluation the absolute
precision it must be made to. The rule for interpolation methods is: when
iteration j combines points U_j (newest first) to produce x_{j+1}, the value
f(x_m) must be good to

    a_{j+1} - sum over newer points l in U_j of (a_l - a_m)

bits, and a point is evaluated once at the largest requirement over all
iterations that use it. For the discrete Newton method N_p iteration j
evaluates f(x_j) to a_{j+1} bits and p further points to a_{j+1}(1+1/p)/2.

Replaying a plan with cost n_i**alpha per evaluation gives the asymptotic
constants directly; the solvers execute the same plan (with guard bits) on
real functions.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import elemfun as ef
from . import mulkernel as mk
from . import newton as nw
from .bigfrac import (
    ONE, ZERO, BigFloat, add, as_precision, cmp, fabs, from_float, from_fraction,
    from_int, round_to, shift2, sub, to_float, working_bits,
)
from .costs import CostLedger, CostModel, evaluate_trace
from .errors import ConfigurationError, ConvergenceError, DegeneracyError, DerivativeError, DomainError

# ---------------------------------------------------------------------------
# orders of convergence
# ---------------------------------------------------------------------------


def _poly_root(f, df, x0):
    x = x0
    for _ in range(100):
        dx = f(x) / df(x)
        x -= dx
        if abs(dx) < 1e-16 * abs(x):
            break
    return x


def order_secant(k):
    """Positive root p_k of x^(k+1) = 1 + x^k."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    return _poly_root(lambda x: x ** (k + 1) - 1 - x ** k,
                      lambda x: (k + 1) * x ** k - k * x ** (k - 1), 2.0)


def order_invquad():
    """Positive root p_Q of x^3 = 1 + x + x^2."""
    return _poly_root(lambda x: x ** 3 - 1 - x - x * x, lambda x: 3 * x * x - 1 - 2 * x, 2.0)


def sigma():
    return 1.0 / order_invquad()


# ---------------------------------------------------------------------------
# analytic constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MethodConstant:
    method: str
    params: dict
    alpha: float
    value: float

    def __post_init__(self):
        assert self.value > 1.0, "asymptotic constant must exceed 1"

    def __float__(self):
        return self.value


def _cn(p, a):
    return (1 + p * ((p + 1) / (2.0 * p)) ** a) / (1 - 2.0 ** -a)


def const_newton(p, alpha):
    if p < 1:
        raise DomainError("p must be a positive integer")
    return MethodConstant("N", {"p": p}, alpha, _cn(p, alpha))


def const_newton_opt(alpha):
    best = min(range(1, math.ceil(alpha) + 3), key=lambda p: _cn(p, alpha))
    return const_newton(best, alpha)


def _cs(k, a, pk=None):
    p = order_secant(k) if pk is None else pk
    return (1 - p ** (-k * a) + (2 * p ** (-(k + 1))) ** a) / (1 - p ** -a)


def const_secant(k, alpha):
    return MethodConstant("S", {"k": k}, alpha, _cs(k, alpha))


def const_secant_opt(alpha):
    k = min((1, 2), key=lambda k: _cs(k, alpha))
    return const_secant(k, alpha)


def _cq(a):
    s = sigma()
    return 1 + (1 - s + s * s) ** a + (3 * s ** 3) ** a / (1 - s ** a)


def const_invquad(alpha):
    return MethodConstant("Q", {}, alpha, _cq(alpha))


def s_sequence(mu, tol=1e-15, cap=200000):
    """s_0 = 1, s_j = max(mu s_{j-1}, 1 + j mu^(j+1) - mu(1 - mu^j)/(1 - mu))."""
    s = [1.0]
    j = 1
    while j < cap:
        a = mu * s[-1]
        b = 1 + j * mu ** (j + 1) - mu * (1 - mu ** j) / (1 - mu)
        v = max(a, b)
        s.append(v)
        if v < tol:
            break
        j += 1
    return s


def _ci(mu, a):
    if not 0.5 <= mu < 1:
        raise DomainError("mu must lie in [1/2, 1)")
    total = 1.0
    prev = 1.0
    j = 1
    while j < 500000:
        v = max(mu * prev, 1 + j * mu ** (j + 1) - mu * (1 - mu ** j) / (1 - mu))
        t = v ** a
        total += t
        prev = v
        j += 1
        # once mu*s_{j-1} wins the max the tail is geometric with ratio mu^a
        if j > 3 and t * mu ** a / (1 - mu ** a) < 1e-12:
            break
    return total


def const_invinterp(mu, alpha):
    return MethodConstant("I", {"mu": mu}, alpha, _ci(mu, alpha))


def _mu_opt(alpha):
    grid = np.linspace(0.5, 0.9, 401)
    vals = [_ci(m, alpha) for m in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda m: _ci(m, alpha), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-9})
    # the minimum can sit on a kink; keep whichever is lower
    cands = [(vals[i], grid[i]), (res.fun, res.x), (_ci(sigma(), alpha), sigma())]
    return float(min(cands)[1])


def const_invinterp_opt(alpha):
    mu = _mu_opt(alpha)
    return MethodConstant("I", {"mu": mu}, alpha, _ci(mu, alpha))


COLUMNS = ("C_N", "C_S1", "C_S2", "C_Q", "C_I", "C_Ihalf")
TABLE81_ALPHAS = (1.0, 1.1, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 15.0, 20.0)


def column_values(alpha):
    return {
        "C_N": const_newton_opt(alpha).value,
        "C_S1": _cs(1, alpha),
        "C_S2": _cs(2, alpha),
        "C_Q": _cq(alpha),
        "C_I": const_invinterp_opt(alpha).value,
        "C_Ihalf": _ci(0.5, alpha),
    }


@dataclass
class Table81Row:
    alpha: float
    values: dict
    flagged: tuple     # every column at the 4-decimal minimum
    best: str          # first flagged column


def table81(alphas=None):
    rows = []
    for a in (TABLE81_ALPHAS if alphas is None else alphas):
        vals = column_values(float(a))
        rounded = {c: round(v, 4) for c, v in vals.items()}
        lo = min(rounded.values())
        flagged = tuple(c for c in COLUMNS if rounded[c] == lo)
        rows.append(Table81Row(float(a), vals, flagged, flagged[0]))
    return rows


def table81_csv(rows):
    out = ["alpha," + ",".join(COLUMNS) + ",best"]
    for r in rows:
        out.append("%s,%s,%s" % (_fmt_alpha(r.alpha),
                                 ",".join("%.4f" % r.values[c] for c in COLUMNS), r.best))
    return "\n".join(out) + "\n"


def _fmt_alpha(a):
    return repr(float(a))


def _c_s_opt(a):
    return min(_cs(1, a), _cs(2, a))


def _mu_boundary_fn(a, eps=1e-7):
    s = sigma()
    # left derivative of C_I(., a) at sigma; negative while sigma is optimal
    return (_ci(s, a) - _ci(s - eps, a)) / eps


def crossovers():
    """Labeled crossover points in alpha."""
    specs = [
        ("S1=S2", lambda a: _cs(1, a) - _cs(2, a), 4.0, 5.0),
        ("S=N", lambda a: _c_s_opt(a) - const_newton_opt(a).value, 8.0, 9.5),
        ("Q=S", lambda a: _cq(a) - _c_s_opt(a), 4.7, 5.5),
        ("Q=N", lambda a: _cq(a) - const_newton_opt(a).value, 6.5, 7.5),
        ("I=S", lambda a: const_invinterp_opt(a).value - _c_s_opt(a), 4.8, 5.5),
        ("mu=sigma", _mu_boundary_fn, 4.0, 5.2),
    ]
    return [(label, float(brentq(fn, lo, hi, xtol=1e-9))) for label, fn, lo, hi in specs]


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------

@dataclass
class MpFunction:
    """f evaluated to absolute error 2**-bits by ``evaluator(x, bits)``."""

    name: str
    evaluator: object
    alpha: float = 1.0
    x0: float = 1.0
    bracket: tuple = ()
    root: object = None      # root(bits) -> BigFloat oracle, optional

    def __call__(self, x, bits):
        return self.evaluator(x, int(bits))


def _sq2(x, bits):
    w = bits + 4
    return sub(mk.square(x, w), from_int(2), w)


def _cube2(x, bits):
    w = bits + 4
    return sub(mk.mul(mk.square(x, w), x, w), from_int(2), w)


def _exp2(x, bits):
    w = bits + 4
    return sub(ef.exp(x, w), from_int(2), w)


def _sinhalf(x, bits):
    w = bits + 4
    return sub(ef.sin(x, w), shift2(ONE, -1), w)


CATALOG = {
    "sq2": MpFunction("sq2", _sq2, 1.0, 1.5, (1.5, 1.4), lambda b: nw.sqrt(from_int(2), b)),
    "cube2": MpFunction("cube2", _cube2, 1.0, 1.3, (1.3, 1.25, 1.27),
                        lambda b: ef.exp(nw.div(ef.ln(from_int(2), b + 8), from_int(3), b + 8), b)),
    "exp2": MpFunction("exp2", _exp2, 1.0, 0.7, (0.7, 0.69, 0.68), lambda b: ef.ln(from_int(2), b)),
    "sinhalf": MpFunction("sinhalf", _sinhalf, 1.0, 0.5, (0.5, 0.52, 0.53),
                          lambda b: nw.div(ef.const_pi(b + 8), from_int(6), b)),
}


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

START_BITS = 16       # accuracy assumed for the newest starting point
STARTUP_BITS = 96     # fixed precision of the startup phase
MAX_WINDOW = 8
_EPS = 1e-9


def _ceil(v):
    return max(1, math.ceil(v - _EPS))


@dataclass
class Plan:
    method: str
    n: int
    acc: list                 # a_0 .. a_N (floats); a_N = n
    n_start: int = 1          # points supplied by the startup phase
    uses: dict = field(default_factory=dict)       # iteration j -> points (newest first)
    evals: list = field(default_factory=list)      # (iteration, point, bits, role)
    p: int = 1                                     # Newton points

    @property
    def N(self):
        return len(self.acc) - 1

    def precisions(self):
        return [e[2] for e in self.evals]

    def iteration_costs(self, alpha):
        c = {}
        for it, _, bits, _ in self.evals:
            c[it] = c.get(it, 0.0) + float(bits) ** alpha
        return [c[k] for k in sorted(c)]


def _geometric_acc(n, ratio, newest_start_index, start_bits=START_BITS):
    """a_j = n * ratio^(N-j), N minimal with a_{newest_start_index} <= start_bits."""
    N = newest_start_index + 1
    while n * ratio ** (N - newest_start_index) > start_bits:
        N += 1
    return [n * ratio ** (N - j) for j in range(N + 1)], N


def newton_plan(n, p=1, start_bits=START_BITS):
    if p < 1:
        raise DomainError("p must be a positive integer")
    acc, N = _geometric_acc(n, 0.5, 0, start_bits)
    plan = Plan("newton%d" % p, n, acc, 1, p=p)
    for j in range(N):
        plan.evals.append((j, j, _ceil(acc[j + 1]), "f"))
        for _ in range(p):
            plan.evals.append((j, j, _ceil(acc[j + 1] * (1 + 1.0 / p) / 2), "g"))
    return plan


def _interp_plan(name, n, mu, n_start, offsets_fn, start_bits=START_BITS):
    acc, N = _geometric_acc(n, mu, n_start - 1, start_bits)
    plan = Plan(name, n, acc, n_start)
    req = [0.0] * N
    for j in range(n_start - 1, N):
        pts = [m for m in offsets_fn(j) if m >= 0]
        plan.uses[j] = pts
        for idx, m in enumerate(pts):
            r = acc[j + 1] - sum(acc[l] - acc[m] for l in pts[:idx])
            req[m] = max(req[m], r)
    for m in range(N):
        # a point is evaluated as soon as it exists
        it = max(m, n_start - 1)
        plan.evals.append((it, m, _ceil(req[m]), "f"))
    return plan


def secant_plan(n, k=1, start_bits=START_BITS):
    p = order_secant(k)
    return _interp_plan("secant%d" % k, n, 1.0 / p, k + 1, lambda j: [j, j - k], start_bits)


def invquad_plan(n, start_bits=START_BITS):
    return _interp_plan("invquad", n, sigma(), 3, lambda j: [j, j - 1, j - 2], start_bits)


def invinterp_window(mu):
    """Offsets d whose requirement 1/mu^(d+1) - sum_{i<=d} (1/mu^i - 1) is positive."""
    ds = []
    for d in range(MAX_WINDOW):
        r = mu ** -(d + 1) - sum(mu ** -i - 1 for i in range(1, d + 1))
        if r > _EPS:
            ds.append(d)
        else:
            break
    return ds


def invinterp_plan(n, mu, start_bits=START_BITS):
    if not 0.5 <= mu < 1:
        raise DomainError("mu must lie in [1/2, 1)")
    ds = invinterp_window(mu)
    return _interp_plan("invinterp", n, mu, 3, lambda j: [j - d for d in ds], start_bits)


def make_plan(method, n, mu=None, alpha=None):
    m = method.lower()
    if m.startswith("newton"):
        return newton_plan(n, int(m[6:] or 1))
    if m.startswith("secant"):
        return secant_plan(n, int(m[6:] or 1))
    if m == "invquad":
        return invquad_plan(n)
    if m == "invinterp":
        if mu is None:
            mu = _mu_opt(alpha if alpha is not None else 1.0)
        return invinterp_plan(n, mu)
    raise ConfigurationError("unknown method %r" % (method,))


# ---------------------------------------------------------------------------
# solver machinery
# ---------------------------------------------------------------------------

GUARD = 12


def _bf(x, bits=64):
    if isinstance(x, BigFloat):
        return x
    if isinstance(x, Fraction):
        return from_fraction(x, bits)
    return from_float(float(x))


def _absbits(x):
    """-log2|x| as a float (inf for zero)."""
    if x.sign == 0:
        return math.inf
    return -(x.exponent - 1 + math.log2(to_float(shift2(fabs(x), 1 - x.exponent))))


class _Evaluator:
    """Evaluations with ledger charging and a per-solve cache."""

    def __init__(self, f, ledger, final):
        self.f = f
        self.ledger = ledger
        self.final = final
        self.cache = {}
        self.count = 0

    def _eval(self, x, nominal, extra):
        key = (x.sign, x.man, x.exp2, nominal + extra)
        if self.ledger is not None:
            self.ledger.charge("eval", nominal)
        self.count += 1
        if key not in self.cache:
            self.cache[key] = self.f(x, nominal + extra)
        return self.cache[key]

    def __call__(self, x, nominal, extra=GUARD):
        v = self._eval(x, nominal, extra)
        # a zero below the final precision only says |f| is under the noise
        if v.sign == 0 and nominal < self.final:
            v = self._eval(x, self.final, extra)
        return v


def _interp_step(xs, fs, bits):
    """Inverse interpolation at y = 0 through (f_m, x_m); xs/fs newest first."""
    w = bits + 8
    k = len(xs)
    total = ZERO
    for m in range(k):
        num = ONE
        den = ONE
        for l in range(k):
            if l == m:
                continue
            d = sub(fs[l], fs[m], w + 64)
            if d.sign == 0:
                raise DegeneracyError("coincident function values")
            num = mk.mul(num, fs[l], w)
            den = mk.mul(den, d, w)
        total = add(total, mk.mul(xs[m], nw.div(num, den, w), w), w)
    return round_to(total, w)


def _secant_step(x1, f1, x0, f0, bits):
    w = bits + 8
    df = sub(f1, f0, w + 64)
    if df.sign == 0:
        raise DegeneracyError("secant through equal function values")
    return sub(x1, nw.div(mk.mul(f1, sub(x1, x0, w + 64), w), df, w), w)


def _lagrange_weights(offsets):
    """Derivative at 0 of the Lagrange basis polynomials on integer nodes."""
    ws = []
    for t in offsets:
        tot = Fraction(0)
        for r in offsets:
            if r == t:
                continue
            prod = Fraction(1, t - r)
            for s in offsets:
                if s in (t, r):
                    continue
                prod *= Fraction(-s, t - s)
            tot += prod
        ws.append(tot)
    return ws


def newton_offsets(p):
    return list(range(-(p // 2), -(-p // 2) + 1))


def _newton_step(ev, x, p, a_j, f_bits, g_bits):
    """One N_p step; returns (x_new, f(x), step)."""
    offs = newton_offsets(p)
    ws = _lagrange_weights(offs)
    hb = _ceil(a_j / p)
    f0 = ev(x, f_bits)
    if f0.sign == 0:
        return x, f0, ZERO
    w = max(f_bits, g_bits) + GUARD + 8
    g = ZERO
    for t, wt in zip(offs, ws):
        if wt == 0:
            continue
        ft = f0 if t == 0 else ev(add(x, shift2(from_int(t), -hb), w + hb), g_bits)
        g = add(g, mk.mul(from_fraction(wt, w), ft, w), w)
    # compared as -log2 magnitudes: both sides underflow doubles at large n
    noise_bits = g_bits + GUARD - 2 - math.log2(float(sum(abs(v) for v in ws)))
    if g.sign == 0 or _absbits(g) >= noise_bits:
        raise DerivativeError("finite-difference slope below the noise floor")
    g = shift2(g, hb)
    step = nw.div(f0, g, f_bits + GUARD)
    return sub(x, step, w), f0, step


def _basin_ok(steps):
    if len(steps) < 3:
        return False
    # steps are -log2|step|: two consecutive reductions, the last one small
    s2, s1, s0 = steps[-3:]
    return s2 < s1 < s0 and s0 > START_BITS


def _startup_newton(ev, x, cap=100):
    xs = [x]
    steps = []
    for _ in range(cap):
        xn, f0, st = _newton_step(ev, x, 1, 40, STARTUP_BITS, STARTUP_BITS)
        if f0.sign == 0 or st.sign == 0:
            return x, True, STARTUP_BITS
        steps.append(_absbits(st))
        x = round_to(xn, STARTUP_BITS + 8)
        xs.append(x)
        if _basin_ok(steps):
            # quadratic convergence: the new point is about twice as good
            return x, False, 2 * steps[-1]
    raise ConvergenceError("startup did not reach the convergence basin")


def _startup_interp(ev, starts, need, offsets, cap=100):
    """Fixed-precision run of the method itself.

    Returns the ``need`` points before the newest iterate, their values, an
    exact-zero flag and the accuracy estimate -log2|x_t - x_{t-1}| of the
    newest returned point (x_t being far more accurate).
    """
    xs = [round_to(_bf(s), STARTUP_BITS + 8) for s in starts]
    fs = [ev(x, STARTUP_BITS) for x in xs]
    for x, fx in zip(xs, fs):
        if fx.sign == 0:
            return [x], [fx], True, STARTUP_BITS
    steps = []
    for _ in range(cap):
        t = len(xs) - 1
        pts = [m for m in offsets(t) if m >= 0]
        if len(pts) < 2:
            pts = [t, t - 1]
        px = [xs[m] for m in pts]
        pf = [fs[m] for m in pts]
        try:
            xn = _interp_step(px, pf, STARTUP_BITS)
        except DegeneracyError:
            # one precision bump before giving up
            pf = [ev(v, 2 * STARTUP_BITS) for v in px]
            xn = _interp_step(px, pf, 2 * STARTUP_BITS)
        xn = round_to(xn, STARTUP_BITS + 8)
        st = sub(xn, xs[-1], STARTUP_BITS + 16)
        xs.append(xn)
        fn = ev(xn, STARTUP_BITS)
        fs.append(fn)
        if fn.sign == 0:
            return [xn], [fn], True, STARTUP_BITS
        if st.sign == 0:
            # settled at the startup precision: the previous point is good to it
            xs.pop()
            fs.pop()
            while len(xs) < need:
                # pad at the old end with points further out
                x = round_to(sub(shift2(xs[0], 1), xs[1], STARTUP_BITS + 8), STARTUP_BITS + 8)
                xs.insert(0, x)
                fs.insert(0, ev(x, STARTUP_BITS))
            return xs[-need:], fs[-need:], False, STARTUP_BITS - 8
        steps.append(_absbits(st))
        if len(xs) > need and _basin_ok(steps):
            return xs[-need - 1:-1], fs[-need - 1:-1], False, steps[-1]
    raise ConvergenceError("startup did not reach the convergence basin")


@dataclass
class SolveResult:
    root: BigFloat
    iterates: list
    plan: Plan
    ledger: CostLedger
    evaluations: int
    n_start: int = 1     # iterates[:n_start] come from the startup phase


def _resolve(f):
    if isinstance(f, str):
        if f not in CATALOG:
            raise ConfigurationError("unknown function %r" % (f,))
        return CATALOG[f]
    if isinstance(f, MpFunction):
        return f
    if callable(f):
        return MpFunction(getattr(f, "__name__", "f"), f)
    raise ConfigurationError("not a function")


def _run_newton(f, x0, n, p, ledger):
    ev = _Evaluator(f, None, n)
    x, exact, sb = _startup_newton(ev, _bf(x0))
    plan = newton_plan(n, p, _start_bits(sb, n))
    ev.ledger = ledger
    its = [x]
    if exact:
        return SolveResult(x, its, plan, ledger, ev.count)
    for j in range(plan.N):
        fb = _ceil(plan.acc[j + 1])
        gb = _ceil(plan.acc[j + 1] * (1 + 1.0 / p) / 2)
        xn, f0, st = _newton_step(ev, x, p, plan.acc[j], fb, gb)
        if f0.sign == 0:
            return SolveResult(x, its, plan, ledger, ev.count)
        x = round_to(xn, fb + GUARD + 8)
        its.append(x)
    _check_final(its, plan)
    return SolveResult(x, its, plan, ledger, ev.count)


def _check_final(its, plan):
    if len(its) < 2:
        return
    st = sub(its[-1], its[-2], plan.n + 64)
    if st.sign and _absbits(st) < plan.acc[-2] / 2:
        raise ConvergenceError("iteration did not settle at the planned accuracy")


def _start_bits(step_bits, n):
    return max(START_BITS, min(step_bits - 2, STARTUP_BITS - 32, n / 2))


def _run_interp(f, starts, n, plan_fn, ledger):
    ev = _Evaluator(f, None, n)
    proto = plan_fn(START_BITS)
    offsets = lambda t: [t - (proto.uses[j][0] - m) for j in (max(proto.uses),) for m in proto.uses[j]]
    xs0, _, exact, sb = _startup_interp(ev, starts, proto.n_start, offsets)
    plan = plan_fn(_start_bits(sb, n))
    if exact:
        return SolveResult(xs0[0], xs0, plan, ledger, ev.count)
    ev.ledger = ledger
    ev.cache.clear()
    N = plan.N
    xs = list(xs0) + [None] * (N + 1 - plan.n_start)
    fs = [None] * N
    bits = {m: b for _, m, b, _ in plan.evals}
    for m in range(plan.n_start):
        fs[m] = ev(xs[m], bits[m])
        if fs[m].sign == 0:
            return SolveResult(xs[m], xs[:m + 1], plan, ledger, ev.count)
    for j in range(plan.n_start - 1, N):
        pts = plan.uses[j]
        tb = _ceil(plan.acc[j + 1]) + GUARD
        px = [xs[m] for m in pts]
        pf = [fs[m] for m in pts]
        try:
            xn = _interp_step(px, pf, tb)
        except DegeneracyError:
            pf = [ev(xs[m], 2 * bits[m]) for m in pts]
            xn = _interp_step(px, pf, 2 * tb)
        xs[j + 1] = round_to(xn, tb + 8)
        if j + 1 < N:
            fs[j + 1] = ev(xs[j + 1], bits[j + 1])
            if fs[j + 1].sign == 0:
                return SolveResult(xs[j + 1], xs[:j + 2], plan, ledger, ev.count)
    _check_final(xs, plan)
    return SolveResult(xs[N], xs, plan, ledger, ev.count, plan.n_start)


def _nbits(p):
    return as_precision(p).n


def solve_newton(f, x0, p, points=1, ledger=None, full=False):
    """Discrete Newton N_p; ``points`` is p (derivative from p+1 nodes)."""
    res = _run_newton(_resolve(f), x0, _nbits(p), int(points), ledger)
    return res if full else round_to(res.root, working_bits(p))


def solve_secant(f, x0, x1, p, k=1, ledger=None, full=False):
    """Secant method S_k: x_{i+1} from x_i and x_{i-k}."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    n = _nbits(p)
    res = _run_interp(_resolve(f), [x0, x1], n, lambda sb: secant_plan(n, k, sb), ledger)
    return res if full else round_to(res.root, working_bits(p))


def solve_invquad(f, x0, x1, x2, p, ledger=None, full=False):
    n = _nbits(p)
    res = _run_interp(_resolve(f), [x0, x1, x2], n, lambda sb: invquad_plan(n, sb), ledger)
    return res if full else round_to(res.root, working_bits(p))


def solve_invinterp(f, starts, p, mu, ledger=None, full=False):
    n = _nbits(p)
    if len(starts) < 2:
        raise DomainError("need at least two starting points")
    res = _run_interp(_resolve(f), list(starts), n, lambda sb: invinterp_plan(n, mu, sb), ledger)
    return res if full else round_to(res.root, working_bits(p))


METHODS = ("newton1", "newton2", "newton3", "secant1", "secant2", "secant3", "invquad", "invinterp")


def solve(method, f, p, starts=None, mu=None, ledger=None):
    """Dispatch by method name; returns a :class:`SolveResult`."""
    fn = _resolve(f)
    st = list(starts) if starts else list(fn.bracket or (fn.x0, fn.x0 * 0.99, fn.x0 * 1.01))
    m = method.lower()
    if m.startswith("newton"):
        return solve_newton(fn, st[0], p, int(m[6:] or 1), ledger, full=True)
    if m.startswith("secant"):
        return solve_secant(fn, st[0], st[1], p, int(m[6:] or 1), ledger, full=True)
    if m == "invquad":
        while len(st) < 3:
            st.append(to_float(_bf(st[-1])) * 1.01)
        return solve_invquad(fn, st[0], st[1], st[2], p, ledger, full=True)
    if m == "invinterp":
        return solve_invinterp(fn, st, p, sigma() if mu is None else mu, ledger, full=True)
    raise ConfigurationError("unknown method %r" % (method,))


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def measured_order(errors):
    """Least-squares slope of log e_{j+1} against log e_j."""
    L = [math.log2(e) for e in errors if e > 0]
    if len(L) < 3:
        raise ConvergenceError("too few iterates to fit an order")
    slope, _ = np.polyfit(L[:-1], L[1:], 1)
    return float(slope)


def iterate_errors(iterates, root, lo_bits=24, hi_bits=None):
    """|x_j - root| for iterates whose error lies in [2^-hi_bits, 2^-lo_bits]."""
    out = []
    for x in iterates:
        d = sub(x, root, max(hi_bits or 0, 64) + 64)
        if d.sign == 0:
            continue
        b = _absbits(d)
        if b >= lo_bits and (hi_bits is None or b <= hi_bits):
            out.append(2.0 ** -b)
    return out


def _window_fit(costs, window=5):
    """Last ``window`` iteration costs exactly, earlier ones by geometric extension."""
    if len(costs) <= window:
        return sum(costs)
    w = costs[-window:]
    rho = w[0] / w[1] if w[1] else 0.0
    if not 0 <= rho < 1:
        return sum(costs)
    return sum(w) + w[0] * rho / (1 - rho)


def measure_constant(method, f, alpha, n, mu=None, synthetic=True, window=5):
    """Measured asymptotic constant: evaluation costs n_i^alpha over n^alpha.

    With ``synthetic`` the method's plan is replayed without evaluating f and
    the per-iteration costs are fitted over the final ``window`` iterations
    plus a geometric tail. Otherwise f is really solved and every charged
    evaluation (startup excluded) is priced.
    """
    model = CostModel("power", alpha=float(alpha))
    if synthetic:
        plan = make_plan(method, n, mu=mu, alpha=alpha)
        return _window_fit(plan.iteration_costs(float(alpha)), window) / model.cost(n)
    led = CostLedger()
    solve(method, f, n, mu=mu, ledger=led)
    return evaluate_trace(led, model, classes=("eval",)) / model.cost(n)


def plan_constant(method, alpha, n, mu=None):
    """Exact replay sum (no fit) of a plan's evaluation costs."""
    plan = make_plan(method, n, mu=mu, alpha=alpha)
    return sum(float(b) ** alpha for b in plan.precisions()) / float(n) ** alpha
