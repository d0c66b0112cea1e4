#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The mertens-lattice Authors
"""Offline oracle: zeta zeros rho = 1/2 + i*gamma with alpha = |rho zeta'(rho)|^-1
and psi = arg(rho zeta'(rho)), written in the canonical `mertens-zeros v1` format.

Uses Arb (python-flint) ball arithmetic; every emitted digit is checked against
the ball radius, so the table is correct to the last printed place (+-1 ulp from
rounding).
"""
import argparse
import sys

from flint import acb, acb_series, arb, ctx


def to_decimal(x: arb, digits: int) -> str:
    """Round the midpoint of x to `digits` significant decimal digits, no exponent.
    Raises if the ball radius is too wide for that many digits."""
    man, exp = x.mid().man_exp()
    man, exp = int(man), int(exp)
    if man == 0:
        raise ValueError("zero value")
    neg = man < 0
    man = abs(man)
    # value = man * 2^exp; find k with 10^(digits-1) <= value*10^k < 10^digits
    approx_log10 = (man.bit_length() + exp) * 0.30102999566398
    k = digits - int(approx_log10) - 1
    for _ in range(4):
        num = man * (10 ** k if k >= 0 else 1)
        den = 10 ** (-k) if k < 0 else 1
        if exp >= 0:
            num <<= exp
        else:
            den <<= -exp
        q, r = divmod(num, den)
        if 2 * r >= den:
            q += 1
        if q >= 10 ** digits:
            k -= 1
            continue
        if q < 10 ** (digits - 1):
            k += 1
            continue
        break
    # radius check: rad * 10^k must be well below 0.5
    rad_ok = (x.rad() * arb(10) ** k) < arb("0.01")
    if not rad_ok:
        raise ValueError("insufficient precision for %d digits" % digits)
    s = str(q)
    if k <= 0:
        body = s + "0" * (-k)
    elif k >= len(s):
        body = "0." + "0" * (k - len(s)) + s
    else:
        body = s[:-k] + "." + s[-k:]
    return ("-" if neg else "") + body


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma-max", type=float, default=14000.0,
                    help="emit zeros until the first one with gamma >= this value")
    ap.add_argument("--digits", type=int, default=256)
    ap.add_argument("--prec", type=int, default=1100, help="Arb working precision in bits")
    ap.add_argument("--batch", type=int, default=200)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    ctx.prec = args.prec
    rows = []
    n = 1
    done = False
    while not done:
        for rho in acb.zeta_zeros(n, args.batch):
            d = acb_series([rho, 1], 2).zeta().coeffs()[1]
            w = rho * d
            gamma = rho.imag
            alpha = 1 / w.abs_lower() if w.abs_lower() == w.abs_upper() else 1 / abs(w)
            psi = w.arg()
            rows.append((n, to_decimal(gamma, args.digits), to_decimal(alpha, args.digits),
                         to_decimal(psi, args.digits)))
            n += 1
            if gamma > args.gamma_max:
                done = True
                break
        print("zeros:", n - 1, file=sys.stderr, flush=True)

    with open(args.out, "w", encoding="ascii") as f:
        f.write("# mertens-zeros v1\n")
        f.write("# count=%d digits=%d\n" % (len(rows), args.digits))
        for r in rows:
            f.write("%d %s %s %s\n" % r)
    return 0


if __name__ == "__main__":
    sys.exit(main())
