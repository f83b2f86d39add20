"""Command-line front end.

    mparith eval exp 1 31          value to 31 places after the point
    mparith const pi 21            21 significant digits, two methods cross-checked
    mparith table7 --bits 4096     measured reduction constants vs bounds
    mparith table8 --alpha 2.5     asymptotic constants of the zero finders
    mparith solve secant1 sq2 256  root, iteration trace, order and constant
    mparith bench 1024 8192        limb work per multiplication route

Exit codes: 0 ok, 2 usage, 3 domain/parse, 4 convergence, 5 cross-check.
"""

import argparse
import contextlib
import math
import random
import sys

from . import costs
from . import elemfun as ef
from . import mulkernel as mk
from . import zerofind as zf
from .bigfrac import sub
from .costs import CostLedger
from .errors import (
    ConfigurationError, ConvergenceError, CrossCheckError, DivisionByZero,
    DomainError, ParseError, RangeError,
)

LOG2_10 = math.log2(10)
EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_CROSSCHECK = 2, 3, 4, 5


def _bits_for_digits(digits, extra=32):
    return int(math.ceil(digits * LOG2_10)) + extra


def _write_ledger(args, ledger):
    if args.ledger and ledger is not None:
        with open(args.ledger, "w", newline="") as fh:
            ledger.to_csv(fh)


def _digits(args, default):
    d = args.digits_pos if args.digits_pos is not None else args.digits
    d = default if d is None else d
    if d < 0:
        raise DomainError("digits must be nonnegative")
    return d


def cmd_eval(args, out):
    places = _digits(args, 30)
    ledger = CostLedger() if args.ledger else None
    bits = args.bits or _bits_for_digits(places, 48)
    name = args.function
    if name == "atan_recip":
        try:
            j = int(args.x)
        except ValueError:
            raise ParseError("atan_recip takes an integer j") from None
        val = ef.atan_recip(j, bits)
    else:
        x = ef.from_decimal(args.x, bits)
        fn = {"exp": ef.exp, "ln": ef.ln, "sin": ef.sin}[name]
        val = fn(x, bits, ledger)
    out.write(ef.to_fixed(val, places) + "\n")
    _write_ledger(args, ledger)


_CONST_METHODS = {"e": (ef.const_e, "direct", "scaled"), "pi": (ef.const_pi, "machin", "euler")}


def cmd_const(args, out):
    digits = _digits(args, 30)
    if digits < 1:
        raise DomainError("need at least one digit")
    fn, m1, m2 = _CONST_METHODS[args.name]
    bits = args.bits or _bits_for_digits(digits, 24)
    a = fn(bits, method=m1)
    b = fn(bits, method=m2)
    diff = sub(a, b, bits + 16)
    if diff.sign and diff.exponent > a.exponent - bits + 4:
        raise CrossCheckError("%s: %s and %s disagree" % (args.name, m1, m2))
    out.write(ef.to_decimal(a, digits) + "\n")
    _write_ledger(args, CostLedger() if args.ledger else None)


def cmd_table7(args, out):
    n = args.bits or 4096
    grid = costs.table71_report(n)
    out.write("Y,X,bound,value,kind,within_bound\n")
    for y in costs.OPS:
        for x in costs.OPS:
            val, kind = grid[(x, y)]
            bound = costs.table71_bound(x, y)
            # only measured routes are held to the published bound
            if kind == "measured":
                ok = "yes" if val <= bound * 1.10 else "no"
            else:
                ok = "-"
            shown = "%.4f" % val if math.isfinite(val) else "none"
            out.write("%s,%s,%.4f,%s,%s,%s\n" % (y, x, bound, shown, kind, ok))
    if args.ledger:
        led = CostLedger()
        for name in costs.VARIANTS:
            led = led + costs.trace_variant(name, n)
        _write_ledger(args, led)


def cmd_table8(args, out):
    alphas = args.alpha if args.alpha else None
    for a in alphas or ():
        if a < 1:
            raise DomainError("alpha must be at least 1")
    out.write(zf.table81_csv(zf.table81(alphas)))


def _analytic(method, alpha, mu):
    m = method.lower()
    if m.startswith("newton"):
        return zf.const_newton(int(m[6:] or 1), alpha).value
    if m.startswith("secant"):
        return zf.const_secant(int(m[6:] or 1), alpha).value
    if m == "invquad":
        return zf.const_invquad(alpha).value
    return zf.const_invinterp(mu, alpha).value


def cmd_solve(args, out):
    if args.method not in zf.METHODS:
        raise ConfigurationError("unknown method %r (choose from %s)" % (args.method, ", ".join(zf.METHODS)))
    if args.function not in zf.CATALOG:
        raise ConfigurationError("unknown function %r (choose from %s)"
                                 % (args.function, ", ".join(sorted(zf.CATALOG))))
    n = args.bits_pos or args.bits or 256
    alpha = args.alpha[0] if args.alpha else 1.0
    mu = zf._mu_opt(alpha) if args.method == "invinterp" else None
    fn = zf.CATALOG[args.function]
    ledger = CostLedger()
    res = zf.solve(args.method, fn, n, mu=mu, ledger=ledger)
    oracle = fn.root(n + 32)
    err = sub(res.root, oracle, n + 64)
    if err.sign and err.exponent > -n + 4:
        raise CrossCheckError("root disagrees with the independent oracle")
    digits = max(1, int(n / LOG2_10))
    out.write("method,%s\nfunction,%s\nbits,%d\n" % (args.method, args.function, n))
    if mu is not None:
        out.write("mu,%.6f\n" % mu)
    out.write("root,%s\n" % ef.to_decimal(res.root, digits))
    out.write("iter,error_bits\n")
    errs = []
    for i, x in enumerate(res.iterates):
        d = sub(x, oracle, n + 64)
        eb = zf._absbits(d) if d.sign else math.inf
        out.write("%d,%s\n" % (i, "exact" if eb == math.inf else "%.1f" % eb))
        if i >= res.n_start - 1 and 24 <= eb <= n - 8:
            errs.append(2.0 ** -eb)
    try:
        order = "%.4f" % zf.measured_order(errs)
    except ConvergenceError:
        order = "n/a"
    out.write("order,%s\n" % order)
    out.write("evaluations,%d\n" % res.evaluations)
    out.write("alpha,%s\n" % alpha)
    out.write("constant_measured,%.4f\n" % zf.measure_constant(args.method, fn, alpha, 1 << 20, mu=mu))
    out.write("constant_analytic,%.4f\n" % _analytic(args.method, alpha, mu))
    _write_ledger(args, ledger)


def cmd_bench(args, out):
    sizes = args.sizes or [1024, 4096, 16384]
    rng = random.Random(12345)
    out.write("bits,op,limb_mults,limb_adds\n")
    for bits in sizes:
        if bits < 1:
            raise DomainError("sizes must be positive")
        u = rng.getrandbits(bits) | (1 << (bits - 1))
        v = rng.getrandbits(bits) | (1 << (bits - 1))
        for op, f in (("school", mk.int_mul_school), ("karatsuba", mk.int_mul_karatsuba)):
            c = mk.WorkCounter()
            f(u, v, counter=c)
            out.write("%d,%s,%d,%d\n" % (bits, op, c.limb_mults, c.limb_adds))


def _global_flags(parser, default):
    parser.add_argument("--digits", type=int, default=default, help="decimal digits")
    parser.add_argument("--bits", type=int, default=default, help="precision in bits")
    parser.add_argument("--alpha", type=float, nargs="+", default=default, help="cost exponent(s)")
    parser.add_argument("--ledger", metavar="CSV", default=default, help="write the cost trace here")


def build_parser():
    # the flags work before or after the subcommand; the copy on each
    # subcommand must not reset a value given before it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="mparith", description="multiple-precision arithmetic tools")
    _global_flags(p, None)
    sub_ = p.add_subparsers(dest="command", required=True)

    e = sub_.add_parser("eval", parents=[common], help="evaluate an elementary function")
    e.add_argument("function", choices=["exp", "ln", "sin", "atan_recip"])
    e.add_argument("x")
    e.add_argument("digits_pos", nargs="?", type=int, metavar="places")
    e.set_defaults(func=cmd_eval)

    c = sub_.add_parser("const", parents=[common], help="digits of e or pi")
    c.add_argument("name", choices=["e", "pi"])
    c.add_argument("digits_pos", nargs="?", type=int, metavar="digits")
    c.set_defaults(func=cmd_const)

    t7 = sub_.add_parser("table7", parents=[common], help="measured reduction constants")
    t7.set_defaults(func=cmd_table7)

    t8 = sub_.add_parser("table8", parents=[common], help="zero-finder constants")
    t8.set_defaults(func=cmd_table8)

    s = sub_.add_parser("solve", parents=[common], help="run a zero finder")
    s.add_argument("method")
    s.add_argument("function")
    s.add_argument("bits_pos", nargs="?", type=int, metavar="bits")
    s.set_defaults(func=cmd_solve)

    b = sub_.add_parser("bench", parents=[common], help="limb work per multiplication")
    b.add_argument("sizes", nargs="*", type=int)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except ConfigurationError as exc:
        err.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except CrossCheckError as exc:
        err.write("cross-check failed: %s\n" % exc)
        return EXIT_CROSSCHECK
    except ConvergenceError as exc:
        err.write("no convergence: %s\n" % exc)
        return EXIT_CONVERGENCE
    except (DomainError, ParseError, RangeError, DivisionByZero) as exc:
        err.write("error: %s\n" % exc)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
