from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from lemmas.report import LemmaError, LemmaReport

DEFAULT_DELTA = 0.9415
DEFAULT_EPSILON = 1e-6
DEFAULT_GRID_STEP = 1e-5
FD_STEP = 1e-7


def s_of(t, delta):
    return 3 + 3 * t - 4 * delta


def gamma_of(t, delta, epsilon):
    return (6 * t - 2 * (2 * delta - 1) ** 2) / (9 + 9 * t - 12 * delta) - epsilon


def g1(gamma):
    return (325 * gamma ** 2 - 400 * gamma + 124) / 3


def quad_coeff(gamma):
    """Coefficient 12 g^2 - (31/2) g + 5 = 12 (g - 2/3)(g - 5/8) of alpha^2."""
    return 12 * gamma ** 2 - 15.5 * gamma + 5


def t_star(delta) -> float:
    return ((31 - 32 * delta) ** 2 + 15) / 48


def dgamma_dt(t, delta):
    return 8 * (1 - delta) ** 2 / s_of(t, delta) ** 2


def r1_of(s, delta):
    c = 1 - delta
    return 0.5 * np.sqrt(s) / c / np.sqrt(64 * c * c - s) * (s - 2 * c)


def dr1_ds(s, delta):
    c = 1 - delta
    return (0.5 / c * s ** -0.5 * (64 * c * c - s) ** -1.5
            * (32 * (s + 2 * delta - 2) * c * c + s * (64 * c * c - s)))


def residual_exact(t, delta, epsilon) -> Fraction:
    """(6t - 3g)(2 - 3g) - (3g - 4 delta + 2)^2 at gamma(t), in rational arithmetic on the float inputs."""
    t, delta, epsilon = Fraction(t), Fraction(delta), Fraction(epsilon)
    gamma = (6 * t - 2 * (2 * delta - 1) ** 2) / (3 * s_of(t, delta)) - epsilon
    return (6 * t - 3 * gamma) * (2 - 3 * gamma) - (3 * gamma - 4 * delta + 2) ** 2


def d2g1_dt2(t, delta, epsilon):
    c2 = (1 - delta) ** 2
    s = s_of(t, delta)
    return 8 / 3 * c2 * s ** -4 * (15600 * c2 - 200 * s) + 10400 * c2 * s ** -3 * epsilon


@dataclass
class LllParams:
    """
    One point (delta, t, epsilon) with the derived quantities

    Parameters:
    - delta: minimum-degree fraction
    - t: K_4-free density e(H)/n^2
    - epsilon: shift subtracted from gamma
    """
    delta: float
    t: float
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.epsilon < 0:
            raise LemmaError("epsilon must be nonnegative")
        if self.s <= 0:
            raise LemmaError(f"s = {self.s} is not positive")

    @property
    def s(self) -> float:
        return s_of(self.t, self.delta)

    @property
    def gamma(self) -> float:
        return gamma_of(self.t, self.delta, self.epsilon)

    @property
    def t_star(self) -> float:
        return t_star(self.delta)

    @property
    def g1(self) -> float:
        return g1(self.gamma)

    @property
    def r1(self) -> float:
        return float(r1_of(self.s, self.delta))

    def to_dict(self):
        return {"delta": self.delta, "t": self.t, "epsilon": self.epsilon, "s": self.s, "gamma": self.gamma,
                "t_star": self.t_star, "g1": self.g1}


def t_prime(delta: float, epsilon: float) -> float:
    """The t at which gamma(t) = 8/13."""
    return brentq(lambda t: gamma_of(t, delta, epsilon) - 8 / 13, delta / 3, 1.0, xtol=1e-12)


def t_prime_closed_form(delta: float, epsilon: float) -> float:
    s = 8 * (1 - delta) ** 2 / (3 * (2 / 3 - 8 / 13 - epsilon))
    return (s - 3 + 4 * delta) / 3


def r1_unit_root(delta: float) -> float:
    """The t below t* at which r_1 = 1."""
    upper = t_star(delta) - 1e-9
    lower = (2 * (1 - delta) - 3 + 4 * delta) / 3 + 1e-9
    return brentq(lambda t: r1_of(s_of(t, delta), delta) - 1.0, lower, upper, xtol=1e-12)


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    count = int(np.floor((stop - start) / step)) + 1
    t = start + step * np.arange(count)
    if t[-1] < stop:
        t = np.append(t, stop)
    return t


def verify_lll(delta: float = DEFAULT_DELTA, epsilon: float = DEFAULT_EPSILON, grid_step: float = DEFAULT_GRID_STEP,
               on_event=None) -> LemmaReport:
    """
    Grid certification of the four items at (delta, epsilon) plus the located constants

    Strict inequalities pass only when the sampled minimum clears the Lipschitz slack of the grid.

    Parameters:
    - delta: minimum-degree fraction
    - epsilon: shift subtracted from gamma
    - grid_step: spacing of the t grid over [delta/3, 1]

    Returns:
    - LemmaReport
    """
    if not 0 < delta < 1:
        raise LemmaError(f"delta must lie in (0, 1), got {delta}")
    if grid_step <= 0:
        raise LemmaError("grid step must be positive")
    report = LemmaReport("lll", {"delta": delta, "epsilon": epsilon, "grid_step": grid_step})
    add = lambda *args, **kw: report.add(*args, on_event=on_event, **kw)
    half = grid_step / 2

    t0 = delta / 3
    t = _grid(t0, 1.0, grid_step)
    s = s_of(t, delta)
    gamma = gamma_of(t, delta, epsilon)
    slope = dgamma_dt(t, delta)
    slope_max = 8 / 9

    add("s > 0 on the grid", ">", float(s.min()), 0.0)
    add("dgamma/dt > 0", ">", float(slope.min()), 0.0)
    add("dgamma/dt <= 8/9", "<=", float(slope.max()), slope_max, 1e-12)
    fd = (gamma_of(t + FD_STEP, delta, epsilon) - gamma_of(t - FD_STEP, delta, epsilon)) / (2 * FD_STEP)
    add("dgamma/dt finite difference", "<=", float(np.max(np.abs(fd - slope) / slope)), 1e-6)

    # (i)
    add("(i) gamma - 11/18 > 0", "margin>", float((gamma - 11 / 18).min()), slope_max * half)
    add("(i) 2t - gamma > 0", "margin>", float((2 * t - gamma).min()), (2 + slope_max) * half)

    # (ii) through the identity (6t - 3g)(2 - 3g) - (3g - 4delta + 2)^2 = 6 s epsilon
    # O(1) terms cancel down to O(eps); evaluated exactly
    exact_t = [Fraction(u) for u in t.tolist()]
    exact_delta, exact_eps = Fraction(delta), Fraction(epsilon)
    residual = [residual_exact(u, exact_delta, exact_eps) for u in exact_t]
    if epsilon > 0:
        target = [6 * s_of(u, exact_delta) * exact_eps for u in exact_t]
        add("(ii) residual = 6 s eps", "<=", float(max(abs(r - q) / q for r, q in zip(residual, target))), 1e-9)
        add("(ii) residual > 0", "margin>", float(min(residual)), 18 * epsilon * half + 1e-15)
    else:
        add("(ii) residual = 0 at eps = 0", "<=", float(max(abs(r) for r in residual)), 1e-12)

    ts = t_star(delta)
    report.values["t_star"] = ts
    # past t*, gamma = 5/8 is used instead; (ii) with 5/8 is linear in t and vanishes at t*
    fallback = lambda u: 3 * (2 * u - 5 / 8) * (2 - 15 / 8) - (15 / 8 - 4 * delta + 2) ** 2
    add("t >= t*: (ii) with 5/8 vanishes at t*", "==", fallback(ts), 0.0, 1e-12)
    add("t >= t*: (ii) with 5/8 increases in t", ">", fallback(ts + 1.0) - fallback(ts), 0.0)
    add("t >= t*: 11/18 < 5/8 < 2t*", "<", 5 / 8, 2 * ts)

    # (iii) on [delta/3, min(t', t*)]
    tp = t_prime(delta, epsilon)
    report.values["t_prime"] = tp
    add("t' closed form", "==", tp, t_prime_closed_form(delta, epsilon), 1e-10)
    upper3 = min(tp, ts)
    mask3 = t <= upper3
    t3 = np.append(t[mask3], upper3)
    gamma3 = gamma_of(t3, delta, epsilon)
    h3 = t3 - g1(gamma3)
    lip3 = 1 + float(np.max(np.abs(650 * gamma3 - 400)) / 3 + 650 / 3 * slope_max * grid_step) * slope_max
    add("(iii) t - g1(gamma) > 0", "margin>", float(h3.min()), lip3 * half)
    add("(iii) d2 g1/dt2 > 0", ">", float(d2g1_dt2(t3, delta, epsilon).min()), 0.0)
    step = 1e-4
    inner = t3[(t3 - step >= t0) & (t3 + step <= upper3)]
    if inner.size:
        fd2 = (g1(gamma_of(inner + step, delta, epsilon)) - 2 * g1(gamma_of(inner, delta, epsilon))
               + g1(gamma_of(inner - step, delta, epsilon))) / step ** 2
        add("(iii) d2 g1/dt2 > 0 by finite differences", ">", float(fd2.min()), 0.0)

    # (iv) on [delta/3, t*): c(g) > 0 and max over alpha in [0, 1] of c alpha^2 + g/2 stays below t
    mask4 = t < ts
    t4, gamma4 = t[mask4], gamma[mask4]
    if t4.size:
        add("(iv) 12g^2 - 31g/2 + 5 > 0", ">", float(quad_coeff(gamma4).min()), 0.0)
        phi = t4 - gamma4 / 2 - quad_coeff(gamma4)
        lip4 = 1 + float(np.max(np.abs(0.5 + 24 * gamma4 - 15.5)) + 24 * slope_max * grid_step) * slope_max
        add("(iv) no alpha in [0, 1]", "margin>", float(phi.min()), lip4 * half)
        s4 = s_of(t4, delta)
        add("(iv) r1 > 1 on the grid", ">", float(r1_of(s4, delta).min()), 1.0)
        add("(iv) dr1/ds > 0", ">", float(dr1_ds(s4, delta).min()), 0.0)

    root = r1_unit_root(delta)
    report.values["r1_root"] = root
    add("r1 = 1 below delta/3", "<", root, t0)

    start = LllParams(delta, t0, epsilon)
    report.values["gamma_at_delta_over_3"] = start.gamma
    report.values["s_at_delta_over_3"] = start.s
    g_start = start.gamma
    add("gamma(delta/3) = (8 delta - 2)/9 - eps", "==", g_start, (8 * delta - 2) / 9 - epsilon, 1e-12)
    add("gamma(delta/3)", "==", g_start, 0.61465, 0.00015, reference="0.6146-0.6147")
    add("t' with gamma(t') = 8/13", "==", tp, 0.3146, 0.0002, reference="0.3146 +- 0.0001")
    add("r1 = 1 at t", "==", root, 0.31379, 0.00005, reference="0.31379 +- 0.00001")
    gap_start = t0 - g1(g_start)
    gap_prime = tp - g1(8 / 13)
    report.values["delta/3 - g1"] = gap_start
    report.values["t' - g1(8/13)"] = gap_prime
    add("delta/3 - g1(gamma(delta/3))", "==", gap_start, 0.0060, 0.0002, reference="0.0060 +- 0.0001")
    add("t' - g1(8/13)", "==", gap_prime, 0.0069, 0.0002, reference="0.0069 +- 0.0001")
    add("g1(8/13) = 4/13", "==", g1(Fraction(8, 13)), Fraction(4, 13))
    return report
