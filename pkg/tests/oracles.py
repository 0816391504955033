"""Independent reference computations used to freeze expected values.

Nothing here imports the elimination or coboundary-assembly code of the
package; the algebras are read only through their raw structure-constant
tables.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def dense_rank(rows, inv=lambda x: 1 / x):
    """Plain Gaussian elimination on a list of lists (first nonzero pivot)."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rk = 0
    for c in range(n):
        p = next((r for r in range(rk, m) if a[r][c] != 0), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        piv = inv(a[rk][c])
        a[rk] = [x * piv for x in a[rk]]
        for r in range(m):
            if r != rk and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        rk += 1
        if rk == m:
            break
    return rk


def dense_rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    a = rows
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rk = 0
    for c in range(n):
        pr = next((r for r in range(rk, m) if a[r][c] % p), None)
        if pr is None:
            continue
        a[rk], a[pr] = a[pr], a[rk]
        piv = pow(a[rk][c], -1, p)
        a[rk] = [x * piv % p for x in a[rk]]
        for r in range(m):
            if r != rk and a[r][c] % p:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rk])]
        rk += 1
    return rk


# -- raw algebra tables ----------------------------------------------------------
# An algebra is given here as (dim, mult, unit) with mult[i][j] a list of
# coefficients; elements are plain lists of Fractions.


def amul(alg, x, y):
    d, mult, _ = alg
    out = [Fraction(0)] * d
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            for k, c in enumerate(mult[i][j]):
                if c:
                    out[k] += xi * yj * c
    return out


def basis(d, i):
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return v


def lin(d, terms):
    out = [Fraction(0)] * d
    for c, v in terms:
        for k in range(d):
            out[k] += c * v[k]
    return out


def dual_numbers():
    return (2, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])


def ground():
    return (1, [[[1]]], [1])


def truncated(d):
    mult = [[[1 if (i + j == k) else 0 for k in range(d)] for j in range(d)] for i in range(d)]
    return (d, mult, [1] + [0] * (d - 1))


def cyclic_group_algebra(m):
    mult = [[[1 if (i + j) % m == k else 0 for k in range(m)] for j in range(m)] for i in range(m)]
    return (m, mult, [1] + [0] * (m - 1))


def upper_triangular():
    # basis e11, e12, e22
    E = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    inv = {v: k for k, v in E.items()}
    mult = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for a in range(3):
        for b in range(3):
            (i, j), (k, l) = inv[a], inv[b]
            if j == k:
                mult[a][b][E[(i, l)]] = 1
    return (3, mult, [1, 0, 1])


# -- naive cochain evaluation ------------------------------------------------------


def pairs(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def eval_cochain(coeffs, dA, dB, dM, n, a_elems, b_elems):
    """Evaluate a cochain (flat coefficient list, M slowest, then A-lex, then B-lex)
    on general elements by full multilinear expansion. Returns a list of length dM."""
    out = [Fraction(0)] * dM
    nb = n * (n - 1) // 2
    for s in range(dM):
        idx_a = list(itertools.product(range(dA), repeat=n))
        idx_b = list(itertools.product(range(dB), repeat=nb))
        flat = s * len(idx_a) * len(idx_b)
        for ia in idx_a:
            ca = Fraction(1)
            for t, i in enumerate(ia):
                ca *= a_elems[t][i]
                if not ca:
                    break
            if not ca:
                flat += len(idx_b)
                continue
            for ib in idx_b:
                c = coeffs[flat]
                flat += 1
                if not c:
                    continue
                cb = ca
                for t, j in enumerate(ib):
                    cb *= b_elems[t][j]
                    if not cb:
                        break
                out[s] += c * cb
    return out


def basis_cochain(col, dA, dB, dM, n):
    """The evaluator of the basis cochain with flat index ``col``."""
    nb = n * (n - 1) // 2
    rest, ib = col, []
    for _ in range(nb):
        rest, j = divmod(rest, dB)
        ib.append(j)
    ia = []
    for _ in range(n):
        rest, i = divmod(rest, dA)
        ia.append(i)
    s = rest
    ia.reverse()
    ib.reverse()

    def F(a_elems, b_elems):
        c = Fraction(1)
        for t, i in enumerate(ia):
            c *= a_elems[t][i]
        for t, j in enumerate(ib):
            c *= b_elems[t][j]
        out = [Fraction(0)] * dM
        out[s] = c
        return out

    return F


def naive_secondary_coboundary(A, B, eps, n, M=None):
    """Dense matrix of the tensor-matrix differential, built column by column
    by evaluating delta(f) for every basis cochain f on every basis argument.

    ``eps`` is a list of A-vectors, one per basis element of B. M defaults to
    the regular bimodule of A."""
    dA, dB = A[0], B[0]
    dM = dA
    left = lambda a, m: amul(A, a, m)
    right = lambda m, a: amul(A, m, a)
    n1 = n + 1
    P1 = pairs(n1)
    src_dim = dM * dA ** n * dB ** (n * (n - 1) // 2)
    args = []
    for t in range(dM):
        for ia in itertools.product(range(dA), repeat=n1):
            for ib in itertools.product(range(dB), repeat=len(P1)):
                args.append((t, ia, ib))

    def eps_of(bvec):
        return lin(dA, [(c, eps[j]) for j, c in enumerate(bvec)])

    def bprod(vs):
        out = [Fraction(x) for x in B[2]]
        for v in vs:
            out = amul(B, out, v)
        return out

    cols = []
    for col in range(src_dim):
        F = basis_cochain(col, dA, dB, dM, n)
        column = []
        cache = {}
        for (t, ia, ib) in args:
            key = (ia, ib)
            if key not in cache:
                a = [basis(dA, i) for i in ia]
                b = {p: basis(dB, j) for p, j in zip(P1, ib)}
                total = [Fraction(0)] * dM
                # term 0
                z = amul(A, a[0], eps_of(bprod([b[(0, v)] for v in range(1, n1)])))
                inner = F(a[1:], [b[(u + 1, v + 1)] for (u, v) in pairs(n)])
                total = lin(dM, [(1, total), (1, left(z, inner))])
                # merge terms
                for i in range(1, n1):
                    keep = [k for k in range(n1) if k != i]
                    newa = []
                    for k in keep:
                        if k == i - 1:
                            newa.append(amul(A, amul(A, eps_of(b[(i - 1, i)]), a[i - 1]), a[i]))
                        else:
                            newa.append(a[k])
                    newb = []
                    for (u, v) in pairs(n):
                        ou, ov = keep[u], keep[v]
                        if ov == i - 1:
                            newb.append(amul(B, b[(ou, i - 1)], b[(ou, i)]))
                        elif ou == i - 1:
                            newb.append(amul(B, b[(i - 1, ov)], b[(i, ov)]))
                        else:
                            newb.append(b[(ou, ov)])
                    total = lin(dM, [(1, total), ((-1) ** i, F(newa, newb))])
                # last term
                w = eps_of(bprod([b[(u, n)] for u in range(n)]))
                inner = F(a[:n], [b[p] for p in pairs(n)])
                total = lin(dM, [(1, total), ((-1) ** n1, left(w, right(inner, a[n])))])
                cache[key] = total
            column.append(cache[key][t])
        cols.append(column)
    return [[cols[c][r] for c in range(src_dim)] for r in range(len(args))]


def naive_hochschild_coboundary(A, n):
    """Dense classical Hochschild coboundary C^n(A,A) -> C^{n+1}(A,A)."""
    dA = A[0]
    src_dim = dA * dA ** n
    args = [(t, ia) for t in range(dA) for ia in itertools.product(range(dA), repeat=n + 1)]
    cols = []
    for col in range(src_dim):
        G = basis_cochain(col, dA, 1, dA, n)
        ones = [[Fraction(1)]] * (n * (n - 1) // 2)
        F = lambda aa: G(aa, ones)
        vals = {}
        column = []
        for (t, ia) in args:
            if ia not in vals:
                a = [basis(dA, i) for i in ia]
                tot = amul(A, a[0], F(a[1:]))
                for i in range(1, n + 1):
                    merged = a[: i - 1] + [amul(A, a[i - 1], a[i])] + a[i + 1 :]
                    tot = lin(dA, [(1, tot), ((-1) ** i, F(merged))])
                tot = lin(dA, [(1, tot), ((-1) ** (n + 1), amul(A, F(a[:n]), a[n]))])
                vals[ia] = tot
            column.append(vals[ia][t])
        cols.append(column)
    return [[cols[c][r] for c in range(src_dim)] for r in range(len(args))]


def dense_matmul(x, y):
    return [[sum((x[i][k] * y[k][j] for k in range(len(y))), Fraction(0)) for j in range(len(y[0]))] for i in range(len(x))]
