"""Release acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (shown in the pytest terminal
summary and printed to stdout) and then asserts on the same outcome.
"""
import math
import time

import numpy as np
from scipy.optimize import bisect

from conftest import ACCEPTANCE_LINES
from coopdim import cli, coupling as cp, dynamics as dy, specfun, verify
from coopdim.geometry import Dipole

X1, X2, X3 = np.eye(3)


class Criterion:
    """Collects named sub-checks and reports them as one line."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failures, self.notes = [], []
        self.start = time.perf_counter()

    def check(self, name, ok, detail=""):
        if not ok:
            self.failures.append(f"{name} ({detail})" if detail else name)
        return ok

    def note(self, text):
        self.notes.append(text)

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.check("runtime", elapsed < self.budget, f"{elapsed:.1f} s > {self.budget} s")
        status = "FAIL" if self.failures else "PASS"
        detail = "; ".join(self.failures) if self.failures else "; ".join(self.notes)
        line = f"{status} criterion {self.number}: {self.title} [{elapsed:.2f} s] {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failures, line


def first_zero(f, r_max=20.0, points=4000):
    """First sign change of f on a grid, refined by bisection."""
    r = np.linspace(1e-3, r_max, points)
    v = np.array([f(x) for x in r])
    k = int(np.argmax(np.sign(v[1:]) != np.sign(v[:-1])))
    assert np.sign(v[k + 1]) != np.sign(v[k])
    return bisect(f, r[k], r[k + 1], xtol=1e-15, rtol=1e-15, maxiter=200)


def pair(r, mu=X3, r_hat=X1, mu_j=None):
    return Dipole(r * np.asarray(r_hat), mu), Dipole(np.zeros(3), mu if mu_j is None else mu_j)


def theta_prime_free(d):
    """Orientation in the x1-x3 plane with vanishing near-field factor for r_hat = x1."""
    if d <= 2.0:
        return X3
    phi = math.atan(math.sqrt((d - 1.0) / (d - 2.0)))
    return np.array([math.cos(phi), 0.0, math.sin(phi)])


def test_criterion_1_single_atom_rates():
    c = Criterion(1, "single-atom rates", 1.0)
    rng = np.random.default_rng(1)
    worst = 0.0
    for mu in [X1, X2, X3, *rng.standard_normal((50, 3))]:
        g = cp.gamma_self(3, Dipole(np.zeros(3), mu / np.linalg.norm(mu)))
        worst = max(worst, abs(g / (4 / 3) - 1))
    c.check("3D rate 4/3", worst <= 1e-12, f"rel err {worst:.1e}")
    inline = cp.gamma_self(1, Dipole(np.zeros(3), X1))
    c.check("1D in-line zero", inline == 0.0, f"got {inline!r}")
    ratio = cp.gamma_self(2, Dipole(np.zeros(3), X1)) / cp.gamma_self(2, Dipole(np.zeros(3), X3))
    c.check("2D in/out ratio", abs(ratio - 0.5) <= 1e-12 * 0.5, f"ratio {ratio!r}")
    c.note(f"3D worst rel err {worst:.1e}, 2D ratio {ratio:.15f}")
    c.finish()


def test_criterion_2_oracle_equivalence():
    c = Criterion(2, "closed form vs direction quadrature", 30.0)
    recs = verify.check_oracle_equivalence(1e-8, pairs=20, seed=0)
    worst = max(r["rel_err"] for r in recs)
    c.check("grid", len(recs) == 3 * 7 * 20, f"{len(recs)} records")
    c.check("agreement", all(r["pass"] for r in recs), f"worst rel err {worst:.1e}")
    c.note(f"{len(recs)} configurations, worst rel err {worst:.1e}")
    c.finish()


def test_criterion_3_dyadic_finite_difference():
    c = Criterion(3, "dyadic operator by finite differences", 10.0)
    recs = verify.check_dyadic_finite_difference(1e-6, 0.05)
    fd = [r for r in recs if r["check"] == "dyadic_finite_difference"]
    rich = [r for r in recs if r["check"] == "dyadic_richardson"]
    c.check("grid", len(fd) == len(rich) == 4 * 5)
    worst = max(r["rel_err"] for r in fd)
    c.check("elementwise", all(r["pass"] for r in fd), f"worst {worst:.1e}")
    ratios = [r["got"] for r in rich]
    c.check("richardson", all(r["pass"] for r in rich), f"ratios {min(ratios):.3f}..{max(ratios):.3f}")
    c.note(f"worst rel err {worst:.1e}, halving ratios {min(ratios):.3f}..{max(ratios):.3f}")
    c.finish()


NEAR_FIELD_CASES = [
    # (d, mu, expected log-log slope or None for logarithmic)
    (3.0, X3, -3.0),
    (2.5, X3, -2.5),
    (2.0, X1, -2.0),
    (1.5, X1, -1.5),
    (3.0, theta_prime_free(3.0), -1.0),
    (2.5, theta_prime_free(2.5), -0.5),
    (1.5, theta_prime_free(1.5), 0.5),
    (1.0, X3, 1.0),
    (2.0, X3, None),
]


def test_criterion_4_asymptotics():
    c = Criterion(4, "far-field, near-field and Dicke-limit asymptotics", 10.0)
    # (a) far field
    r = np.geomspace(50, 500, 200)
    spread = {}
    for d in (1.0, 1.5, 2.0, 2.5, 3.0):
        mu = theta_prime_free(d)
        out = cp.coupling_sweep(d, r, mu, mu, X1)
        scaled = np.abs(out["gamma_big"]) * r ** ((d - 1) / 2)
        spread[d] = scaled.max() / scaled.min() - 1
        c.check(f"far-field modulus d={d}", spread[d] < 0.01, f"spread {spread[d]:.2e}")
    r_far = np.array([100.0, 200.0, 500.0])
    offsets = []
    for d in (1.0, 2.0):
        lo = cp.coupling_sweep(d, r_far, X3, X3, X1)["gamma_big"]
        hi = cp.coupling_sweep(d + 1, r_far, X3, X3, X1)["gamma_big"]
        offsets += list(np.angle(lo / hi))
    worst_phase = max(abs(o - math.pi / 4) for o in offsets)
    c.check("far-field phase step", worst_phase <= 0.02, f"max |offset - pi/4| {worst_phase:.3e}")
    # (b) near field
    r = np.geomspace(1e-3, 1e-2, 25)
    for d, mu, expect in NEAR_FIELD_CASES:
        omega = cp.coupling_sweep(d, r, mu, mu, X1)["omega"]
        tn = float(cp.coupling_sweep(d, 1.0, mu, mu, X1)["theta_near"])
        if expect is None:
            # omega ~ (2/pi) c_d Theta ln r~ for the order-0 cardinal Y
            coeff = np.polyfit(np.log(r), omega, 1)[0]
            predicted = 2 / math.pi * cp.coupling_prefactor(d)
            c.check(f"near-field log d={d}", abs(coeff / predicted - 1) <= 0.05 and abs(tn) < 1e-12,
                    f"coefficient {coeff:.4f} vs {predicted:.4f}")
            continue
        slope = np.polyfit(np.log(r), np.log(np.abs(omega)), 1)[0]
        c.check(f"near-field slope d={d} theta'={tn:.2g}", abs(slope - expect) <= 0.05,
                f"slope {slope:.3f} vs {expect}")
    # (c) Dicke limit
    r = np.array([1e-3, 3e-3, 1e-2])
    for d in np.linspace(1, 3, 9):
        g = cp.coupling_sweep(d, r, X3, X3, X1)["gamma_norm"]
        q = (1 - g) / r**2
        ok = np.all(q > 0) and np.all(q < 10) and abs(q[0] / q[-1] - 1) < 0.01
        c.check(f"Dicke limit d={d:g}", ok, f"(1 - g)/r^2 = {q}")
    c.note(f"far-field spread <= {max(spread.values()):.1e}, phase err {worst_phase:.1e}")
    c.finish()


def max_jump_ratio(g):
    """Largest adjacent-d jump over the largest jump in the surrounding patch.

    The patch is two d-steps either side (the pair under test excluded) and
    two r-samples either side, so a step discontinuity at one d shows up as a
    ratio well above 1 while smooth extrema do not.
    """
    jumps = np.abs(np.diff(g, axis=0))
    n, m = jumps.shape
    worst = 0.0
    for i in range(n):
        rows = [k for k in range(i - 2, i + 3) if k != i and 0 <= k < n]
        for j in range(m):
            local = jumps[rows, max(j - 2, 0):j + 3].max()
            worst = max(worst, jumps[i, j] / max(local, np.finfo(float).tiny))
    return worst


def test_criterion_5_fig3():
    c = Criterion(5, "(d, r~) surface and integer-d slices", 20.0)
    d = np.linspace(1.0, 3.0, 201)
    r = np.linspace(0.05, 20.0, 400)
    rows = np.array(cli.fig3_rows(d, r))
    slices = np.array(cli.fig3_rows((1.0, 2.0, 3.0), r))
    one = slices[slices[:, 0] == 1.0]
    err = np.max(np.abs(one[:, 3] - np.cos(one[:, 1])))
    c.check("d=1 slice is cos r~", err <= 1e-10, f"max err {err:.1e}")
    ratios = {}
    for name, col in (("omega_norm", 2), ("gamma_norm", 3)):
        ratios[name] = max_jump_ratio(rows[:, col].reshape(len(d), len(r)))
        c.check(f"continuity {name}", ratios[name] < 2.0, f"jump ratio {ratios[name]:.2f}")
    planted = rows[:, 3].reshape(len(d), len(r)).copy()
    planted[d > 2.0] += 1e-3
    c.check("continuity metric detects a planted step", max_jump_ratio(planted) > 2.0)
    z1 = first_zero(lambda x: float(cp.coupling_sweep(1.0, x, X3, X3, X1)["gamma_norm"]))
    c.check("d=1 first zero", abs(z1 - math.pi / 2) <= 1e-9, f"{z1!r}")
    zeros = []
    for points in (400, 800, 1600):
        zeros.append(first_zero(lambda x: float(cp.coupling_sweep(3.0, x, X3, X3, X1)["gamma_norm"]),
                                points=points))
    z3 = zeros[0]
    c.check("d=3 zero stable", max(zeros) - min(zeros) <= 1e-12, f"{zeros}")
    # frozen from the perpendicular-pair closed form (3/2)(sin r/r + cos r/r^2 - sin r/r^3)
    c.check("d=3 zero value", abs(z3 - 2.74370726999226938) <= 1e-12, f"{z3!r}")
    c.note(f"d=1 zero {z1:.12f}, d=3 zero {z3:.12f}, jump ratios "
           f"{ratios['omega_norm']:.2f}/{ratios['gamma_norm']:.2f}")
    c.finish()


def test_criterion_6_fig2():
    c = Criterion(6, "orientation surfaces at r~ = 0.05", 20.0)
    rows = np.array(cli.fig2_rows(0.05, 91, 181))
    cols = {k: rows[:, i] for i, k in enumerate(cli.FIG2_COLUMNS)}
    # four-leaf sign structure in 2D on the equator
    sel = (cols["d"] == 2.0) & np.isclose(cols["theta1"], math.pi / 2)
    t2, w = cols["theta2"][sel], cols["omega_norm"][sel]
    flips = 0
    for k in range(4):
        edge = math.pi / 4 + k * math.pi / 2
        below = w[np.argmin(np.abs(t2 - (edge - math.radians(1))))]
        above = w[np.argmin(np.abs(t2 - (edge + math.radians(1))))]
        flips += np.sign(below) == -np.sign(above) != 0
    c.check("2D four-leaf", flips == 4, f"{flips} of 4 sign flips")
    # cylindrical symmetry about x1: rotate mu about x1 and compare
    a = np.linspace(0, math.pi, 61)[:, None]
    b = np.linspace(0, 2 * math.pi, 121)[None, :]
    mu = np.stack(np.broadcast_arrays(np.cos(a), np.sin(a) * np.cos(b), np.sin(a) * np.sin(b)), -1)
    variation = {}
    for d in (1.0, 3.0):
        w = cp.coupling_sweep(d, 0.05, mu, mu, X1)["omega"] / cp.max_self_rate(d)
        variation[d] = np.max(np.abs(w - w[:, :1])) / np.max(np.abs(w))
    c.check("1D rotation invariance", variation[1.0] < 1e-10, f"{variation[1.0]:.1e}")
    c.check("3D rotation invariance", variation[3.0] < 1e-10, f"{variation[3.0]:.1e}")
    # 3D: the angular shape follows Theta' = 1 - 3 cos^2 a away from its zero cone
    w3 = cp.coupling_sweep(3.0, 0.05, mu, mu, X1)["omega"][:, 0]
    tp = 1 - 3 * np.cos(a[:, 0]) ** 2
    far = np.abs(tp) > 0.2
    shape = w3[far] / tp[far]
    dev = np.max(np.abs(shape / shape.mean() - 1))
    c.check("3D Theta' shape", dev < 0.01, f"deviation {dev:.1e}")
    c.note(f"rotation variation 1D {variation[1.0]:.1e}, 3D {variation[3.0]:.1e}, "
           f"Theta' shape dev {dev:.1e}")
    c.finish()


def test_criterion_7_two_atom_dynamics():
    c = Criterion(7, "two-atom dynamics and collective modes", 10.0)
    a, b = pair(0.5)
    g = cp.coupling_matrix(3, [a, b])
    ref = cp.collective_coupling(3, a, b)
    gam = cp.gamma_self(3, a)
    for kind, sign in (("symmetric_pair", 1), ("antisymmetric_pair", -1)):
        rate = gam + sign * ref.gamma
        tr = dy.evolve(dy.prepare_state(kind), g, 5 / gam, dy.max_step(g))
        err = np.max(np.abs(tr.populations.sum(axis=1) / np.exp(-rate * tr.times) - 1))
        c.check(f"{kind} population", err <= 1e-6, f"rel err {err:.1e}")
        c.check(f"{kind} trace drift", tr.trace_drift <= 1e-9, f"{tr.trace_drift:.1e}")
    modes = dy.collective_modes(g)
    sym = int(np.argmax(np.abs(modes.vectors[0] + modes.vectors[1])))
    anti = 1 - sym
    rates_ok = (abs(modes.rates[sym] - (gam + ref.gamma)) <= 1e-12 * gam
                and abs(modes.rates[anti] - (gam - ref.gamma)) <= 1e-12 * gam)
    c.check("rates gamma +- gamma12", rates_ok, f"{modes.rates}")
    want = np.array([-ref.omega, ref.omega])
    got = np.array([modes.shifts[sym], modes.shifts[anti]])
    c.check("shifts: symmetric -omega12, antisymmetric +omega12",
            np.all(np.abs(got - want) <= 1e-12 * abs(ref.omega)),
            f"symmetric {got[0]:+.6f}, antisymmetric {got[1]:+.6f}, omega12 {ref.omega:+.6f}")
    # |E> -> |+-> transition frequencies, measured from omega0 (both atoms excited = 2 omega0)
    to_sym, to_anti = -modes.shifts[sym], -modes.shifts[anti]
    c.note(f"|E>->|+-> transitions omega0{to_sym:+.6f}/omega0{to_anti:+.6f}")
    sub = [dy.collective_modes(cp.coupling_matrix(3, list(pair(r)))).rates[1] for r in (1e-2, 1e-3, 1e-4)]
    c.check("Dicke subradiant rate", sub[0] > sub[1] > sub[2] >= 0 and sub[2] < 1e-7 * gam, f"{sub}")
    c.finish()


def test_criterion_8_special_functions():
    c = Criterion(8, "special-function identities over x in [0.05, 500]", 10.0)
    x = np.geomspace(0.05, 500.0, 400)
    worst = {}
    for alpha in np.linspace(-0.5, 2.0, 11):
        j0, y0 = specfun.bessel_jy(alpha, x)
        j1, y1 = specfun.bessel_jy(alpha + 1, x)
        w = 2 / (math.pi * x)
        worst["wronskian"] = max(worst.get("wronskian", 0), np.max(np.abs(j1 * y0 - j0 * y1 - w) / w))
    for alpha in np.linspace(0.5, 2.0, 7):
        lo, mid, hi = (np.array(specfun.bessel_jy(a, x)) for a in (alpha - 1, alpha, alpha + 1))
        rhs = 2 * alpha / x * mid
        res = np.max(np.abs(lo + hi - rhs) / (np.abs(lo) + np.abs(hi) + np.abs(rhs)))
        worst["recurrence"] = max(worst.get("recurrence", 0), res)
    h = 1e-4 * np.minimum(x, 1.0)
    for alpha in (-0.5, 0.0, 0.5, 1.0, 1.5):
        num = (specfun.cardinal_j(alpha, x + h) - specfun.cardinal_j(alpha, x - h)) / (2 * h)
        exact = -x * specfun.cardinal_j(alpha + 1, x)
        scale = x * np.abs(specfun.cardinal_h1(alpha + 1, x))
        worst["cardinal_derivative"] = max(worst.get("cardinal_derivative", 0),
                                           np.max(np.abs(num - exact) / scale))
    s = np.sqrt(2 / (math.pi * x))
    closed = {(-0.5, "j"): s * np.cos(x), (-0.5, "y"): s * np.sin(x),
              (0.5, "j"): s * np.sin(x), (0.5, "y"): -s * np.cos(x),
              (1.5, "j"): s * (np.sin(x) / x - np.cos(x))}
    for (alpha, kind), ref in closed.items():
        got = specfun.bessel_jy(alpha, x)[0 if kind == "j" else 1]
        worst["half_integer"] = max(worst.get("half_integer", 0), np.max(np.abs(got - ref) / s))
    for n in (0, 1, 2):
        base = specfun.bessel_y(n, x)
        env = np.abs(specfun.hankel1(n, x))
        for a in (n - 1e-7, n + 1e-7):
            if a >= -0.5:
                worst["continuity"] = max(worst.get("continuity", 0),
                                          np.max(np.abs(specfun.bessel_y(a, x) - base) / env))
    tol = {"wronskian": 1e-9, "recurrence": 1e-9, "cardinal_derivative": 1e-6,
           "half_integer": 1e-12, "continuity": 1e-5}
    for name, t in tol.items():
        c.check(name, worst[name] <= t, f"{worst[name]:.1e} > {t}")
    c.note(", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    c.finish()


def test_criterion_9_dielectric_rescaling():
    c = Criterion(9, "dielectric rescaling of the first zero", 5.0)
    worst = 0.0
    for d in (1.0, 2.0, 2.5, 3.0):
        vac = first_zero(lambda x: float(cp.coupling_sweep(d, x, X3, X3, X1)["gamma_norm"]),
                         r_max=6.0, points=120)
        for eps in (2.25, 4.0, 5.7):
            medium = cp.MediumParams(epsilon=eps)

            def g(x):
                a, b = pair(x)
                return cp.dielectric_rescale(cp.collective_coupling, medium, a, b, d).gamma_norm

            # zeros of gamma_norm are about pi apart, so a 0.05 grid brackets the first one
            z = first_zero(g, r_max=6.0, points=120)
            err = abs(z * math.sqrt(eps) / vac - 1)
            worst = max(worst, err)
            c.check(f"d={d} eps={eps}", err <= 1e-6, f"rel err {err:.1e}")
    c.note(f"worst rel err {worst:.1e}")
    c.finish()
