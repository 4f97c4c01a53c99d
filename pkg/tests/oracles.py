"""Independent reference implementations and frozen values for the tests.

The loops here deliberately work observation by observation with plain
Python arithmetic; they share no code with the package.
"""
import math

# Frozen closed-form values (computed by hand from elementary formulas).
EXP4_CDF_01 = 1.0 - math.exp(-0.4)                     # 0.32968...
BETA23_CDF_05 = 0.6875                                  # 11/16 from the polynomial CDF
MODEL_A_JOINT_01 = math.exp(-0.6)                       # 0.548811...
MODEL_A_JOINT_01_02 = math.exp(-0.1 - 0.4 - 0.6)        # exp(-l1 t - l2 s - l3 max)
MODEL_A_SIGMA44_01 = 4.0 / 6.0 * (math.exp(0.6) - 1.0)  # 0.548079...
MO_TAU_HALF_HALF = 1.0 / 3.0

# Hand-built samples (y, d4, d5) with n <= 8; the second, third and fourth
# contain tied times.
HAND_SAMPLES = [
    ([1.0, 2.0, 3.0, 4.0], [1, 0, 1, 0], [0, 1, 1, 1]),
    ([0.5, 0.5, 1.5, 2.0, 2.0, 3.0], [1, 1, 0, 1, 0, 1], [0, 1, 1, 1, 1, 0]),
    ([3.0, 1.0, 2.0, 2.0, 5.0, 4.0, 4.0, 0.2], [1, 1, 0, 1, 1, 1, 0, 0], [1, 0, 1, 1, 0, 0, 1, 1]),
    ([1.0, 1.0, 1.0], [1, 1, 0], [1, 0, 1]),
    ([2.0, 7.0], [1, 1], [1, 1]),
    ([0.3, 1.1, 0.7, 2.4, 1.9, 0.1, 3.3], [0, 1, 1, 1, 0, 1, 1], [1, 1, 0, 0, 1, 1, 0]),
]


def beta23_cdf(x):
    # F(x) = 6x^2 - 8x^3 + 3x^4 for Beta(2, 3)
    return 6 * x**2 - 8 * x**3 + 3 * x**4


def risk_left(y, i):
    """#{j : y_j >= y_i}, the risk set just before y_i."""
    return sum(1 for v in y if v >= y[i])


def nelson_aalen_brute(y, d, t):
    """Sum over observations with y_i <= t of d_i / #{y_j >= y_i}."""
    return sum(d[i] / risk_left(y, i) for i in range(len(y)) if y[i] <= t)


def kaplan_meier_brute(y, d, t):
    """Product over distinct times u <= t of (1 - events(u) / at risk(u)), 0 from max(y) on."""
    if t >= max(y):
        return 0.0
    out = 1.0
    for u in sorted(set(y)):
        if u > t:
            break
        ev = sum(d[i] for i in range(len(y)) if y[i] == u)
        r = sum(1 for v in y if v >= u)
        out *= 1.0 - ev / r
    return out


def kendall_tau_brute(y, d4, d5):
    n = len(y)
    order = sorted(range(n), key=lambda i: (y[i], i))
    total = 0.0
    for rank, i in enumerate(order, start=1):
        total += d4[i] * d5[i] * (n - rank + 1) / n
    return 2.0 / n * total


def sigma_plugin_brute(y, dk, dl, t, s, same):
    """Observation-level plug-in sigma_{k,l}(t, s).

    Empirical dH_k puts 1/n on each y_i with d_k = 1; dLambda_k = dH_k / Hbar(u-)
    with Hbar(u-) = #{y_j >= u} / n.
    """
    n = len(y)
    hb = [risk_left(y, i) / n for i in range(n)]
    lo = min(t, s)
    if same:
        return sum(dk[i] / n / hb[i] ** 2 for i in range(n) if y[i] <= lo)
    double = 0.0
    for i in range(n):
        if not (dk[i] and y[i] <= t):
            continue
        for j in range(n):
            if not (dl[j] and y[j] <= s):
                continue
            m = i if y[i] >= y[j] else j
            double += hb[m] / (hb[i] * hb[j]) * (1 / (n * hb[i])) * (1 / (n * hb[j]))

    def lam(d, x):
        return sum(d[i] / (n * hb[i]) for i in range(n) if y[i] <= x)

    comp_k = sum((lam(dk, t) - lam(dk, y[j])) / hb[j] * dl[j] / (n * hb[j])
                 for j in range(n) if y[j] <= lo)
    comp_l = sum((lam(dl, s) - lam(dl, y[j])) / hb[j] * dk[j] / (n * hb[j])
                 for j in range(n) if y[j] <= lo)
    joint = sum(1.0 / hb[i] ** 2 for i in range(n) if y[i] <= lo and dk[i] and dl[i]) / n
    return double - comp_k - comp_l + joint


def tau_variance_brute(y, d3):
    """sigma^2 = I1 + I2 + I3 with empirical measures, by explicit double loops."""
    n = len(y)
    hb = [sum(1 for v in y if v > y[i]) / n for i in range(n)]
    h3 = [sum(d3[j] for j in range(n) if y[j] <= y[i]) / n for i in range(n)]
    i1 = i2 = i3 = 0.0
    for a in range(n):
        for b in range(n):
            if d3[a] and d3[b]:
                i1 += (min(hb[a], hb[b]) - hb[a] * hb[b]) / n**2
            i2 += (min(h3[a], h3[b]) - h3[a] * h3[b]) / n**2
            if d3[a]:
                # P(y_a < Y <= y_b, d3 = 1) empirically
                p = sum(d3[c] for c in range(n) if y[a] < y[c] <= y[b]) / n
                i3 += (p - hb[a] * h3[b]) / n**2
    return 4 * i1 + 4 * i2 + 8 * i3


def tau_variance_influence(y, d3):
    """Same sigma^2 from the empirical influence values: mean(eta_i^2).

    eta_i = 2 int (1{y_i > x} - Hbar_n(x)) dH3_n(x)
            + 2 int (1{y_i <= x, d3_i = 1} - H3_n(x)) dH_n(x)
    """
    n = len(y)
    hb = [sum(1 for v in y if v > y[i]) / n for i in range(n)]
    h3 = [sum(d3[j] for j in range(n) if y[j] <= y[i]) / n for i in range(n)]
    etas = []
    for i in range(n):
        a = sum((1.0 if y[i] > y[x] else 0.0) - hb[x] for x in range(n) if d3[x]) / n
        b = sum((1.0 if (y[i] <= y[x] and d3[i]) else 0.0) - h3[x] for x in range(n)) / n
        etas.append(2 * a + 2 * b)
    return sum(e * e for e in etas) / n
