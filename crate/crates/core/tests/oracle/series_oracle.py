"""Independent sympy oracle for frozen test values.

Substitutes the ansatz v = sum v_k t^k, g = h + sum g_k t^k into
    4 d_z d_zbar v + c g_t = 0,    t v_t = -1 + c e^{-v} det g
and solves order by order for the unknown coefficient functions, working with
exact expressions. Taylor coefficients at the origin are printed for freezing.
"""
import sympy as sp

x1, y1, x2, y2, t, eps = sp.symbols("x1 y1 x2 y2 t eps")
I = sp.I


def hess(f, xs, ys, i, j):
    # 4 d_{z_i} d_{zbar_j} f
    return (sp.diff(f, xs[i], xs[j]) + sp.diff(f, ys[i], ys[j])
            + I * (sp.diff(f, xs[i], ys[j]) - sp.diff(f, ys[i], xs[j])))


def solve_series(h, xs, ys, c, order):
    n = len(xs)
    vs = [sp.symbols(f"V{k}") for k in range(order + 1)]
    v_funcs = [sp.log(c * h.det())]
    g_funcs = [h]
    for m in range(order):
        # order m of the first equation gives g_{m+1}
        gm1 = sp.zeros(n, n)
        for i in range(n):
            for j in range(n):
                gm1[i, j] = -hess(v_funcs[m], xs, ys, i, j) / (c * (m + 1))
        g_funcs.append(sp.simplify(gm1))
        # order m+1 of the second equation, solved for the unknown symbol
        V = sum(v_funcs[k] * t**k for k in range(m + 1)) + vs[m + 1] * t**(m + 1)
        G = sum((g_funcs[k] * t**k for k in range(m + 2)), sp.zeros(n, n))
        expr = t * sp.diff(V, t) + 1 - c * sp.exp(-V) * G.det()
        coeff = sp.series(expr, t, 0, m + 2).removeO().coeff(t, m + 1)
        sol = sp.solve(sp.Eq(coeff, 0), vs[m + 1])[0]
        v_funcs.append(sp.simplify(sol))
    return v_funcs, g_funcs


def solve_series_fast(h, xs, ys, c, order):
    # same recursion, no simplification; e^{-v_0} = 1/(c det h) keeps it rational
    n = len(xs)
    dh = h.det()
    v_funcs = [sp.log(c * dh)]
    g_funcs = [h]
    for m in range(order):
        gm1 = sp.zeros(n, n)
        for i in range(n):
            for j in range(n):
                gm1[i, j] = -hess(v_funcs[m], xs, ys, i, j) / (c * (m + 1))
        g_funcs.append(gm1)
        W = sum((v_funcs[k] * t**k for k in range(1, m + 1)), sp.Integer(0))
        ew = sum(((-W)**j / sp.factorial(j) for j in range(m + 2)), sp.Integer(0))
        G = sum((g_funcs[k] * t**k for k in range(m + 2)), sp.zeros(n, n))
        prod = sp.expand(ew * G.det(method="berkowitz"), deep=False)
        e_m1 = prod.coeff(t, m + 1)
        v_funcs.append(e_m1 / dh / (m + 2))
    return v_funcs, g_funcs


def taylor_coeff(f, mono):
    # coefficient of prod v^e at the origin: d^|e| f / prod e! evaluated at 0
    d = f
    den = 1
    for v, e in mono:
        if e:
            d = sp.diff(d, v, e)
            den *= sp.factorial(e)
    return sp.nsimplify(sp.expand(d.subs({a: 0 for a in (x1, y1, x2, y2)}) / den))


print("== n=1, h = 1 + x1, c = 1")
h = sp.Matrix([[1 + x1]])
v, g = solve_series(h, [x1], [y1], 1, 3)
for k in range(1, 4):
    print(f"v{k} =", sp.factor(v[k]))
    print(f"g{k} =", sp.factor(g[k][0, 0]))
for k in range(4):
    print(f"v{k} x1-coeffs:", [taylor_coeff(v[k], [(x1, d)]) for d in range(0, 7)])
    print(f"v{k} [x1^2 y1^2]:", taylor_coeff(v[k], [(x1, 2), (y1, 2)]))

print("== n=1 Fubini-Study chart, scale 1, c = 1")
r2 = x1**2 + y1**2
h = sp.Matrix([[1 / (1 + r2)**2]])
v, g = solve_series(h, [x1], [y1], 1, 3)
for k in range(1, 4):
    print(f"v{k} =", sp.simplify(v[k]), "  g{k}/h =", sp.simplify(g[k][0, 0] / h[0, 0]))
W = sp.series(sp.integrate(1 + 8 * t, (t, 0, t)) / (1 + 8 * t), t, 0, 7)
print("w_inv closed:", W)

print("== n=2 inline metric, c = 1 (exact truncated polynomials, degree 6)")
VARS = (x1, y1, x2, y2)
DEG = 6


def tr(p):
    p = sp.Poly(sp.expand(p), *VARS, domain="QQ_I")
    return sp.Poly.from_dict({m: c for m, c in p.as_dict().items() if sum(m) <= DEG}, *VARS, domain="QQ_I")


def tmul(a, b):
    return tr((a * b).as_expr())


def tlog1p(r):
    # log(1 + r), r without constant term
    acc, pw = tr(0), tr(1)
    for k in range(1, DEG + 1):
        pw = tmul(pw, r)
        acc = acc + pw * sp.Rational((-1) ** (k + 1), k)
    return acc


def texp0(r):
    # exp(r), r without constant term
    acc, pw = tr(1), tr(1)
    for k in range(1, DEG + 1):
        pw = tmul(pw, r) * sp.Rational(1, k)
        acc = acc + pw
    return acc


def thess(f, i, j):
    xs, ys = (x1, x2), (y1, y2)
    e = f.as_expr()
    return tr(hess(e, xs, ys, i, j))


h = sp.Matrix([[1 + x1 * x2, sp.Rational(1, 5) * (x1 + I * y2)],
               [sp.Rational(1, 5) * (x1 - I * y2), 1 + y1**2]])
dh = tr(h.det())
assert dh.as_expr().subs({a: 0 for a in VARS}) == 1
inv_dh = texp0(-tlog1p(dh - 1))
vs = [tlog1p(dh - 1)]
gs = [[[tr(h[i, j]) for j in range(2)] for i in range(2)]]
order = 2
for m in range(order):
    gs.append([[thess(vs[m], i, j) * sp.Rational(-1, m + 1) for j in range(2)] for i in range(2)])
    # t-series with truncated-polynomial coefficients, as lists
    W = [tr(0)] + [vs[k] for k in range(1, m + 1)] + [tr(0)] * (m + 2 - m - 1)
    W = (W + [tr(0)] * (m + 2))[: m + 2]

    def smul(a, b):
        return [sum((tmul(a[i], b[k - i]) for i in range(k + 1)), tr(0)) for k in range(m + 2)]

    ew = [tr(1)] + [tr(0)] * (m + 1)
    pw = [tr(1)] + [tr(0)] * (m + 1)
    for j in range(1, m + 2):
        pw = smul(pw, [-w for w in W])
        ew = [e + p * sp.Rational(1, sp.factorial(j)) for e, p in zip(ew, pw)]
    G = [[[gs[k][i][j] for k in range(m + 2)] for j in range(2)] for i in range(2)]
    det = [a - b for a, b in zip(smul(G[0][0], G[1][1]), smul(G[0][1], G[1][0]))]
    E = smul(ew, det)
    vs.append(tmul(E[m + 1], inv_dh) * sp.Rational(1, m + 2))


def cf(p, mono):
    e = [0, 0, 0, 0]
    for v, k in mono:
        e[VARS.index(v)] = k
    return p.as_dict().get(tuple(e), 0)


for k in (1, 2):
    print(f"v{k} @0 =", cf(vs[k], []))
    for mono in [[(x1, 1)], [(y1, 1)], [(x2, 1)], [(y2, 1)], [(x1, 2)], [(x1, 1), (x2, 1)], [(y1, 1), (y2, 1)], [(x1, 1), (y2, 1)]]:
        print(f"  v{k}[{mono}] =", cf(vs[k], mono))
for k in (1, 2):
    for (i, j) in [(0, 0), (0, 1), (1, 1)]:
        print(f"g{k}[{i}{j}] @0 =", cf(gs[k][i][j], []), " x1-coeff:", cf(gs[k][i][j], [(x1, 1)]),
              " y2-coeff:", cf(gs[k][i][j], [(y2, 1)]))

print("== closed-form eigenvalue 1, n = 1")
print(sp.series((t + t**2 / 2) / (1 + t), t, 0, 7))
