from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog, minimize

from graphs.constructions import make_wheel
from graphs.graph import Graph
from graphs.utils import format_fraction, to_fraction
from lemmas.report import LemmaError, LemmaReport

SUM_TOLERANCE = 1e-12
FEASIBILITY_SLACK = 1e-12


@lru_cache(maxsize=None)
def wheel_graph(d: int) -> Graph:
    """F_d + K_1; rim vertices 0..3d-2, apex 3d-1."""
    return make_wheel(d)


@lru_cache(maxsize=None)
def _adjacency(d: int) -> np.ndarray:
    a = wheel_graph(d).adjacency_matrix()
    a.setflags(write=False)
    return a


def gamma_ceiling(d: int) -> Fraction:
    """Largest gamma for which g_i >= gamma can hold on every vertex: (3d-1)/(5d-2)."""
    return Fraction(3 * d - 1, 5 * d - 2)


def forced_weights(d: int) -> List[Fraction]:
    """The only admissible weighting at gamma = (3d-1)/(5d-2): 1/(5d-2) on the rim, (2d-1)/(5d-2) on the apex."""
    return [Fraction(1, 5 * d - 2)] * (3 * d - 1) + [Fraction(2 * d - 1, 5 * d - 2)]


def bound_general(d: int, gamma):
    return (125 * d * d * gamma ** 2 - 150 * d * d * gamma + 45 * d * d - 175 * d * gamma ** 2 + 200 * d * gamma
            - 57 * d + 50 * gamma ** 2 - 50 * gamma + 14) / 6


def bound_d2(gamma):
    return 12 * gamma ** 2 - 15 * gamma + 5


@dataclass
class WeightedWheelInstance:
    """
    Nonnegative weights on F_d + K_1 summing to 1

    Parameters:
    - d: at least 2
    - gamma: lower bound required of every neighbourhood sum g_i
    - x: 3d weights, apex last
    """
    d: int
    gamma: float
    x: np.ndarray

    def __post_init__(self):
        if self.d < 2:
            raise LemmaError(f"weighted wheel needs d >= 2, got {self.d}")
        self.x = np.asarray(self.x, dtype=float)
        if self.x.shape != (3 * self.d,):
            raise LemmaError(f"expected {3 * self.d} weights, got {self.x.shape}")
        if (self.x < -SUM_TOLERANCE).any() or abs(self.x.sum() - 1.0) > SUM_TOLERANCE:
            raise LemmaError("weights must be nonnegative and sum to 1")

    @property
    def g(self) -> np.ndarray:
        return _adjacency(self.d) @ self.x

    @property
    def energy(self) -> float:
        return 0.5 * float(self.x @ _adjacency(self.d) @ self.x)

    def min_g(self) -> float:
        return float(self.g.min())

    def is_feasible(self, slack: float = FEASIBILITY_SLACK) -> bool:
        return self.min_g() >= float(self.gamma) - slack

    def to_dict(self) -> Dict:
        return {"d": self.d, "gamma": float(self.gamma), "x": self.x.tolist(), "g": self.g.tolist(),
                "energy": self.energy}


def wheel_energy(inst: WeightedWheelInstance) -> float:
    return inst.energy


def wheel_energy_exact(d: int, x: Sequence) -> Fraction:
    """Sum of x_u x_v over the edges of F_d + K_1, in exact arithmetic."""
    xs = [to_fraction(v) for v in x]
    return sum((xs[u] * xs[v] for u, v in wheel_graph(d).edges()), Fraction(0))


def neighbourhood_sums_exact(d: int, x: Sequence) -> List[Fraction]:
    g = wheel_graph(d)
    xs = [to_fraction(v) for v in x]
    return [sum((xs[u] for u in g.neighbors(v)), Fraction(0)) for v in range(g.n)]


def _rational_point(x: np.ndarray, max_denominator: int = 10000) -> List[Fraction]:
    xs = [Fraction(float(max(v, 0.0))).limit_denominator(max_denominator) for v in x]
    total = sum(xs)
    return [v / total for v in xs]


@dataclass
class GameValue:
    """Largest gamma with a feasible weighting, bracketed by a primal and a dual rational point."""
    d: int
    lower: Fraction
    upper: Fraction
    primal: List[Fraction]
    dual: List[Fraction]
    lp_value: float = 0.0

    @property
    def certified(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        return self.lower

    def to_dict(self) -> Dict:
        return {"d": self.d, "lower": format_fraction(self.lower), "upper": format_fraction(self.upper),
                "certified": self.certified, "lp_value": self.lp_value}


@lru_cache(maxsize=None)
def wheel_gamma_max(d: int) -> GameValue:
    """
    Solve max_x min_i g_i(x) over the simplex by linear programming and certify it exactly

    Parameters:
    - d: 2..4

    Returns:
    - GameValue; lower comes from a rational primal point, upper from a rational dual point
    """
    _check_range(d)
    a = _adjacency(d)
    m = a.shape[0]
    # variables (x_0..x_{m-1}, gamma): maximise gamma subject to gamma - A x <= 0
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-a, np.ones((m, 1))])
    a_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    bounds = [(0, None)] * m + [(None, None)]
    primal = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0], bounds=bounds, method="highs")
    # dual: minimise mu subject to A y - mu <= 0
    dual = linprog(-c, A_ub=np.hstack([a, -np.ones((m, 1))]), b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                   bounds=bounds, method="highs")
    if primal.status != 0 or dual.status != 0:
        raise LemmaError(f"game-value LP failed for d={d}: {primal.message} / {dual.message}")
    x = _rational_point(primal.x[:m])
    y = _rational_point(dual.x[:m])
    lower = min(neighbourhood_sums_exact(d, x))
    upper = max(neighbourhood_sums_exact(d, y))
    # the forced weighting has all g_i equal, so it serves as primal and dual point at once
    forced = forced_weights(d)
    level = min(neighbourhood_sums_exact(d, forced))
    if level > lower:
        lower, x = level, forced
    if level < upper:
        upper, y = level, forced
    return GameValue(d, lower, upper, x, y, float(-primal.fun))


def is_gamma_feasible(d: int, gamma) -> bool:
    """Exact decision of whether some weighting has every g_i >= gamma."""
    game = wheel_gamma_max(d)
    gamma = to_fraction(gamma)
    if gamma <= game.lower:
        return True
    if gamma > game.upper:
        return False
    raise LemmaError(f"gamma {gamma} falls inside the uncertified bracket [{game.lower}, {game.upper}]")


def _check_range(d: int) -> None:
    if not 2 <= d <= 4:
        raise LemmaError(f"the weighted-wheel oracle covers 2 <= d <= 4, got d={d}")


@dataclass
class WheelMaxResult:
    d: int
    gamma: float
    feasible: bool
    value: Optional[float] = None
    argmax: Optional[WeightedWheelInstance] = None
    vertices: int = 0
    starts: int = 0

    @property
    def bound(self) -> float:
        return float(bound_general(self.d, self.gamma))

    @property
    def bound_d2(self) -> Optional[float]:
        return float(bound_d2(self.gamma)) if self.d == 2 else None

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "gamma": self.gamma,
            "feasible": self.feasible,
            "value": self.value,
            "bound_general": self.bound,
            "bound_d2": self.bound_d2,
            "argmax": self.argmax.x.tolist() if self.argmax is not None else None,
            "vertices": self.vertices,
            "starts": self.starts,
        }


def _repair(x: np.ndarray, anchor: np.ndarray, a: np.ndarray, gamma: float) -> np.ndarray:
    """Project to the simplex, then mix towards the anchor just enough to restore g_i >= gamma."""
    x = np.clip(x, 0.0, None)
    total = x.sum()
    x = x / total if total > 0 else anchor.copy()
    gx, ga = a @ x, a @ anchor
    short = gx < gamma
    if short.any():
        mu = np.max((gamma - gx[short]) / np.maximum(ga[short] - gx[short], 1e-300))
        mu = min(1.0, mu + 1e-12)
        x = (1.0 - mu) * x + mu * anchor
    return x


def _polytope_vertices(a: np.ndarray, gamma: float, rng: np.random.Generator, samples: int) -> List[np.ndarray]:
    m = a.shape[0]
    found: Dict[Tuple[float, ...], np.ndarray] = {}
    for _ in range(samples):
        c = rng.normal(size=m)
        res = linprog(c, A_ub=-a, b_ub=-gamma * np.ones(m), A_eq=np.ones((1, m)), b_eq=[1.0],
                      bounds=[(0, None)] * m, method="highs")
        if res.status == 0:
            key = tuple(np.round(res.x, 10))
            found.setdefault(key, res.x)
    return [found[k] for k in sorted(found)]


def _segment_max(p: np.ndarray, q: np.ndarray, a: np.ndarray) -> Tuple[float, np.ndarray]:
    dv = q - p
    c0 = 0.5 * p @ a @ p
    c1 = p @ a @ dv
    c2 = 0.5 * dv @ a @ dv
    best_t, best = 0.0, c0
    for t in (1.0, -c1 / (2 * c2) if c2 < 0 else None):
        if t is not None and 0.0 <= t <= 1.0:
            val = c0 + c1 * t + c2 * t * t
            if val > best:
                best_t, best = t, val
    return best, p + best_t * dv


def _triangle_grid(steps: int) -> np.ndarray:
    pts = [(i, j, steps - i - j) for i in range(steps + 1) for j in range(steps + 1 - i)]
    return np.array(pts, dtype=float) / steps


def wheel_max(d: int, gamma, restarts: int = 200, seed: int = 0, tol: float = 1e-9,
              vertex_samples: int = 48, face_vertices: int = 12, grid_steps: int = 12) -> WheelMaxResult:
    """
    Feasible-point lower estimate of max e over weightings of F_d + K_1 with every g_i >= gamma

    Every candidate is a feasible point, so the returned value never exceeds the true maximum.

    Parameters:
    - d: 2..4
    - gamma: required neighbourhood sum
    - restarts: SLSQP ascents from mixed starting points
    - seed: numpy generator seed
    - tol: SLSQP tolerance
    - vertex_samples: random LP objectives used to collect vertices of the feasible polytope
    - face_vertices: vertices whose pairwise segments and triangles are searched
    - grid_steps: grid resolution on each triangle

    Returns:
    - WheelMaxResult
    """
    _check_range(d)
    gamma_f = float(gamma)
    if not is_gamma_feasible(d, to_fraction(gamma)):
        return WheelMaxResult(d, gamma_f, False)
    a = _adjacency(d)
    m = a.shape[0]
    rng = np.random.default_rng(seed)
    anchor = np.array([float(v) for v in forced_weights(d)])

    best_val = 0.5 * anchor @ a @ anchor
    best_x = anchor

    def consider(x: np.ndarray) -> None:
        nonlocal best_val, best_x
        if (a @ x).min() < gamma_f - FEASIBILITY_SLACK or abs(x.sum() - 1.0) > SUM_TOLERANCE:
            return
        val = 0.5 * x @ a @ x
        if val > best_val:
            best_val, best_x = val, x

    vertices = _polytope_vertices(a, gamma_f, rng, vertex_samples)
    pool = [anchor] + vertices
    for v in pool:
        consider(v / v.sum())
    face = pool[:face_vertices]
    for p, q in combinations(face, 2):
        _, x = _segment_max(p, q, a)
        consider(x / x.sum())
    grid = _triangle_grid(grid_steps)
    for p, q, r in combinations(face, 3):
        pts = grid @ np.vstack([p, q, r])
        pts = pts / pts.sum(axis=1, keepdims=True)
        ok = (pts @ a).min(axis=1) >= gamma_f - FEASIBILITY_SLACK
        if ok.any():
            vals = 0.5 * np.einsum("ij,jk,ik->i", pts[ok], a, pts[ok])
            i = int(np.argmax(vals))
            consider(pts[ok][i])

    constraints = [
        {"type": "ineq", "fun": lambda x: a @ x - gamma_f, "jac": lambda x: a},
        {"type": "eq", "fun": lambda x: x.sum() - 1.0, "jac": lambda x: np.ones((1, m))},
    ]
    for _ in range(restarts):
        lam = rng.uniform()
        base = pool[int(rng.integers(len(pool)))]
        x0 = lam * rng.dirichlet(np.ones(m)) + (1.0 - lam) * base
        res = minimize(lambda x: -0.5 * x @ a @ x, x0, jac=lambda x: -(a @ x), method="SLSQP",
                       bounds=[(0.0, 1.0)] * m, constraints=constraints, options={"ftol": tol, "maxiter": 200})
        consider(_repair(res.x, anchor, a, gamma_f))

    inst = WeightedWheelInstance(d, gamma_f, best_x / best_x.sum())
    return WheelMaxResult(d, gamma_f, True, float(inst.energy), inst, len(vertices), restarts)


def sweep_gammas(d: int, points: int, start=Fraction(11, 20)) -> List[Fraction]:
    """Evenly spaced rational gammas from start up to the exact ceiling of d, both ends included."""
    if points < 2:
        raise LemmaError("a sweep needs at least two points")
    start, ceiling = to_fraction(start), gamma_ceiling(d)
    return [start + (ceiling - start) * Fraction(i, points - 1) for i in range(points)]


def sweep_rows(d: int, gammas: Sequence[float], restarts: int = 20, seed: int = 0) -> List[Dict]:
    """One row per gamma: oracle value, bounds and the gap, for CSV hand-off."""
    rows = []
    for gamma in gammas:
        res = wheel_max(d, gamma, restarts=restarts, seed=seed)
        rows.append({
            "d": d,
            "gamma": float(gamma),
            "feasible": res.feasible,
            "oracle": res.value,
            "bound_general": res.bound,
            "bound_d2": res.bound_d2,
            "gap": (res.bound - res.value) if res.feasible else None,
        })
    return rows


def verify_min_lemma(d: int, gamma, restarts: int = 200, seed: int = 0, tol: float = 1e-6,
                     on_event=None) -> LemmaReport:
    """
    Run the weighted-wheel oracle at (d, gamma) and compare it with the closed-form bounds

    At the ceiling gamma the weighting is forced, so the bound must be attained there.

    Parameters:
    - d: 2..4
    - gamma: required neighbourhood sum
    - restarts: SLSQP restarts
    - seed: numpy generator seed
    - tol: slack allowed above the bound

    Returns:
    - LemmaReport
    """
    _check_range(d)
    gamma = to_fraction(gamma)
    ceiling = gamma_ceiling(d)
    report = LemmaReport("minlemma", {"d": d, "gamma": gamma, "restarts": restarts, "seed": seed, "tol": tol})
    res = wheel_max(d, gamma, restarts=restarts, seed=seed)
    report.add("feasible", "is", res.feasible, gamma <= ceiling, on_event=on_event)
    report.values.update(res.to_dict())
    if not res.feasible:
        return report
    report.add("oracle <= general bound", "<=", res.value, res.bound, tol, on_event=on_event)
    if d == 2:
        report.add("oracle <= 12g^2-15g+5", "<=", res.value, res.bound_d2, tol, on_event=on_event)
    if gamma == ceiling:
        forced = wheel_energy_exact(d, forced_weights(d))
        report.add("forced weighting attains the bound", "==", forced, bound_general(d, gamma),
                   reference=format_fraction(bound_general(d, gamma)), on_event=on_event)
        report.add("oracle attains the bound", "==", res.value, float(forced), 1e-9, on_event=on_event)
    return report
