"""Independent reference values for tests/oracles.rs.

Evaluates the defining formulas directly in 50-digit arithmetic (mpmath);
nothing here shares code with the Rust implementation. Run with
`python3 gen_oracles.py` and paste the printed constants.
"""
from mpmath import mp, mpf, sinh, cosh, cos, exp, sqrt, asin, log

mp.dps = 50
MASK = (1 << 64) - 1


def big_f(lam, mu):
    n = len(lam)
    out = []
    for sgn in (1, -1):
        for a in range(n):
            v = mpf(1)
            for i in range(n):
                if i != a:
                    la, li = lam[a], lam[i]
                    v *= sinh(la + li + sgn * mu) * sinh(la - li + sgn * mu) / (sinh(la - li) * sinh(la + li))
            out.append(v)
    return out


def calf(lam, mu, u):
    n = len(lam)
    y2 = exp(-2 * u)
    f = big_f(lam, mu)
    out = []
    for a in range(n):
        out.append(exp(-mu) * (exp(2 * lam[a]) - y2) * sinh(mu) / sinh(2 * lam[a]) * f[a])
    for a in range(n):
        out.append(exp(-mu) * (y2 - exp(-2 * lam[a])) * sinh(mu) / sinh(2 * lam[a]) * f[n + a])
    return out


def potential(lam, mu, u, v):
    n = len(lam)
    s2 = sinh(mu) ** 2
    p1 = mpf(1)
    p2 = mpf(1)
    for l in lam:
        p1 *= 1 - s2 / sinh(l) ** 2
        p2 *= 1 + s2 / cosh(l) ** 2
    c0 = n * exp(u - v) + cosh(v - u) / s2
    # cosh(v) in the second product term: with cos(v) the constant C0 does
    # not make the potential vanish at the vertex limit
    return exp(v - u) * (sinh(v) * sinh(u) / s2 * p1 - cosh(v) * cosh(u) / s2 * p2 + c0)


def h_main(lam, th, mu, u, v):
    n = len(lam)
    s2 = sinh(mu) ** 2
    kin = mpf(0)
    for j in range(n):
        lj = lam[j]
        t = cos(th[j]) / cosh(lj) ** 2 * sqrt(1 - sinh(v) ** 2 / sinh(lj) ** 2) * sqrt(1 - sinh(u) ** 2 / sinh(lj) ** 2)
        for k in range(n):
            if k != j:
                t *= sqrt(1 - s2 / sinh(lj - lam[k]) ** 2) * sqrt(1 - s2 / sinh(lj + lam[k]) ** 2)
        kin += t
    return potential(lam, mu, u, v) + exp(v - u) * kin


def h_hat(hat, th, mu, u, v):
    n = len(hat)
    s2 = sinh(mu) ** 2
    U = (exp(-2 * u) + exp(2 * v)) / 2 * sum(exp(-2 * h) for h in hat)
    kin = mpf(0)
    for j in range(n):
        e = exp(-2 * hat[j])
        u1 = 1 - (1 + exp(2 * (v - u))) * e + exp(2 * (v - u)) * e * e
        t = cos(th[j]) * sqrt(u1)
        for k in range(n):
            if k != j:
                t *= sqrt(1 - s2 / sinh(hat[j] - hat[k]) ** 2)
        kin += t
    return U - kin


def splitmix64(seed, count):
    state = seed & MASK
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def show(name, values):
    print(f"const {name}: [f64; {len(values)}] = [")
    for v in values:
        print(f"    {float(v):.17e},")
    print("];")


m = mpf
show("BIG_F_N2", big_f([m("1.8"), m("1.1")], m("0.5")))
show("CALF_N2", calf([m("1.8"), m("1.1")], m("0.5"), m(-1)))
show("CALF_N1_LN2", calf([m("1.5")], log(2), m(-1)))
show("H_N2", [h_main([m("2.2"), m("1.3")], [m("0.4"), m("-0.7")], m("0.5"), m(-1), m("0.3"))])
show("H_N3", [h_main([m("3.1"), m("2.2"), m("1.4")], [m("0.3"), m("1.9"), m("-2.5")], m("0.5"), m(-1), m("0.3"))])
show("HHAT_N2", [h_hat([m("-0.4"), m("-1.2")], [m("0.4"), m("-0.7")], m("0.5"), m(-1), m("0.3"))])
show("VERTEX_N2", [cosh(3) + cosh(2)])
show("COS_ASIN", [cos(2 * j * asin(exp(m("-0.3")))) for j in (1, 2, 3)])
show("V_N1_V0", [potential([m("1.7")], m("0.5"), m(-1), m(0))])
print("# golden/splitmix64_seed0.txt")
for x in splitmix64(0, 8):
    print(f"{x:016x}")
