"""Search Z[theta] for small multiplicatively independent units.

For a monic f with unit rank r = s + t - 1, enumerates elements
sum(c_i theta^i) with small coefficients, keeps those of norm +-1 and
greedily picks r of them that are independent in the log embedding.
Prints the units as a JSON list of power-basis coordinates, ready for
`pcaag build-group --units`.

The result generates a finite-index subgroup of the unit group, which is
all the Hirsch length depends on.
"""

import argparse
import itertools
import json
import sys

import numpy as np


def parse_poly(text):
    text = text.strip()
    if text.startswith("["):
        return [int(c) for c in json.loads(text)]
    import sympy
    from sympy.parsing.sympy_parser import (
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    x = sympy.Symbol("x")
    transformations = standard_transformations + (implicit_multiplication_application,)
    expr = parse_expr(text.replace("^", "**"), transformations=transformations)
    return [int(c) for c in sympy.Poly(expr, x).all_coeffs()]


def companion(coeffs):
    n = len(coeffs) - 1
    m = np.zeros((n, n), dtype=object)
    for i in range(n - 1):
        m[i][i + 1] = 1
    for k in range(n):
        m[n - 1][k] = -coeffs[n - k]
    return m


def int_det(m):
    """Bareiss fraction-free determinant."""
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature(coeffs):
    roots = np.roots(np.array(coeffs, dtype=float))
    real = [r for r in roots if abs(r.imag) < 1e-9]
    upper = [r for r in roots if r.imag > 1e-9]
    return real, upper


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("poly")
    ap.add_argument("--bound", type=int, default=1, help="coefficient bound")
    ap.add_argument("--max-terms", type=int, default=4, help="max nonzero coefficients")
    ap.add_argument(
        "--quotients",
        type=int,
        default=0,
        help="also try a/b for elements of equal |norm| up to this bound",
    )
    args = ap.parse_args()

    coeffs = parse_poly(args.poly)
    if coeffs[0] != 1:
        sys.exit("polynomial must be monic")
    n = len(coeffs) - 1
    real, upper = signature(coeffs)
    embeddings = real + upper
    rank = len(real) + len(upper) - 1
    comp = companion(coeffs)
    powers = [np.identity(n, dtype=object)]
    for _ in range(n - 1):
        powers.append(powers[-1].dot(comp))

    def log_vector(c):
        vals = [sum(ci * z**i for i, ci in enumerate(c)) for z in embeddings]
        return np.log(np.abs(vals))[:rank]

    all_roots = np.roots(np.array(coeffs, dtype=float))
    vander = np.array([[z**i for i in range(n)] for z in all_roots])
    chosen, logs = [], []

    def consider(c):
        lv = log_vector(c)
        trial = np.array(logs + [lv])
        if np.linalg.matrix_rank(trial, tol=1e-7) == len(logs) + 1:
            chosen.append(c)
            logs.append(lv)
        return len(chosen) == rank

    def mult_matrix(c):
        return sum((ci * p for ci, p in zip(c, powers) if ci), np.zeros((n, n), dtype=object))

    by_norm = {}
    values = [v for v in range(-args.bound, args.bound + 1) if v != 0]
    for terms in range(1, args.max_terms + 1):
        for support in itertools.combinations(range(n), terms):
            for vals in itertools.product(values, repeat=terms):
                c = [0] * n
                for i, v in zip(support, vals):
                    c[i] = v
                if terms == 1 and support == (0,):
                    continue
                vals = vander.dot(np.array(c, dtype=float))
                approx = abs(np.prod(vals).real)
                nearest = round(approx)
                if nearest == 0 or abs(approx - nearest) > 1e-6 * max(1.0, approx):
                    continue
                if nearest > 1:
                    if nearest <= args.quotients:
                        by_norm.setdefault(nearest, []).append(c)
                    continue
                if abs(int_det(mult_matrix(c).tolist())) != 1:
                    continue
                if consider(c):
                    print(json.dumps(chosen))
                    return
    for norm, elems in sorted(by_norm.items()):
        elems = [c for c in elems if abs(int_det(mult_matrix(c).tolist())) == norm]
        for b in elems:
            mb = mult_matrix(b)
            inv = np.linalg.inv(mb.astype(float))
            for a in elems:
                if a is b:
                    continue
                q = np.array(a, dtype=float).dot(inv)
                qi = [int(round(v)) for v in q]
                if np.max(np.abs(q - qi)) > 1e-6:
                    continue
                if list(np.array(qi, dtype=object).dot(mb)) != a:
                    continue
                if consider(qi):
                    print(json.dumps(chosen))
                    return
    sys.exit(f"found only {len(chosen)} of {rank} independent units: {json.dumps(chosen)}")


if __name__ == "__main__":
    main()
