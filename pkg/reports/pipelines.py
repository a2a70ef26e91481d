from fractions import Fraction
from typing import Dict, Optional

from graphs.constructions import (DEFAULT_THETA, GrLayout, construction_pair_filter, make_Gr, recursive_spec_for,
                                  turan_number, witness_edge_count)
from graphs.graph import Graph
from graphs.utils import format_fraction
from lemmas.bounds import upper_delta
from reports.records import graph_stats
from solvers import emit
from solvers.caps import CapGuard, SolverError
from solvers.certificates import CliqueSurvivesError, PartitionCertificate
from solvers.homomorphism import check_degree_hypothesis, minimal_wheel_type
from solvers.krfree import krfree_from_parts, max_krfree_exact
from solvers.partition import greedy_partition, max_kcut_exact, max_kcut_local
from solvers.peeling import peel, replay_peel

EXPERIMENT_CONSTANT = Fraction(184, 605)


def lower_threshold(r: int) -> Fraction:
    """Degree fraction (3r-4)/(3r-1) below which equality is known to fail."""
    return Fraction(3 * r - 4, 3 * r - 1)


def _best_partition(g: Graph, k: int, seed: int, restarts: int) -> PartitionCertificate:
    local = max_kcut_local(g, k, seed=seed, restarts=restarts)
    greedy = greedy_partition(g, k)
    return local if local.value >= greedy.value else greedy


def solve_pair(g: Graph, r: int, guard: CapGuard, exact: bool = False, threads: int = 1, seed: int = 0,
               restarts: int = 10, on_event=None, debug: bool = False) -> Dict:
    """
    P_{r-1}(G) and K_r f(G), exactly when the caps allow it and as labelled bounds otherwise

    Parameters:
    - g: graph
    - r: forbidden clique order, at least 3
    - guard: CapGuard
    - exact: refuse (CapExceededError) instead of degrading to bounds
    - threads: worker processes for max_kcut_exact
    - seed, restarts: local-search settings for bound mode

    Returns:
    - Dict with one entry per quantity: mode, value or [lower, upper], certificate
    """
    if r < 3:
        raise SolverError(f"r must be at least 3, got {r}")
    k = r - 1
    ceiling = min(g.num_edges, turan_number(g.n, k))

    if exact or guard.allows("max_kcut", g.n, k):
        cut = max_kcut_exact(g, k, guard, threads=threads, on_event=on_event, debug=debug)
        p = {"mode": "exact", "value": cut.value, "lower": cut.value, "upper": cut.value,
             "certificate": cut.to_dict()}
    else:
        cut = _best_partition(g, k, seed, restarts)
        emit(on_event, type="bounds", solver="max_kcut", lower=cut.value, upper=ceiling)
        p = {"mode": "bounds", "value": None, "lower": cut.value, "upper": ceiling, "certificate": cut.to_dict()}

    if exact or guard.allows("max_krfree", g.n, r):
        free = max_krfree_exact(g, r, guard, on_event=on_event, debug=debug)
        f = {"mode": "exact", "value": free.value, "lower": free.value, "upper": free.value,
             "certificate": free.to_dict()}
    else:
        # an (r-1)-partite subgraph has no K_r
        free = krfree_from_parts(g, cut.parts(), r)
        emit(on_event, type="bounds", solver="max_krfree", lower=free.value, upper=ceiling)
        f = {"mode": "bounds", "value": None, "lower": free.value, "upper": ceiling,
             "certificate": free.to_dict()}

    if p["mode"] == f["mode"] == "exact":
        equal = p["value"] == f["value"]
    elif p["upper"] < f["lower"]:
        equal = False
    elif p["lower"] == f["upper"]:
        equal = True
    else:
        equal = None
    return {"P": p, "Kf": f, "equal": equal}


def gap_report(g: Graph, r: int, guard: CapGuard, exact: bool = False, threads: int = 1, seed: int = 0,
               restarts: int = 10, on_event=None, debug: bool = False) -> Dict:
    """
    Compare P_{r-1}(G) with K_r f(G) and place delta(G)/n against the known thresholds

    Returns:
    - JSON-ready dict; "equal" is null when bounds cannot decide
    """
    pair = solve_pair(g, r, guard, exact, threads, seed, restarts, on_event, debug)
    ratio = Fraction(g.min_degree(), g.n) if g.n else Fraction(0)
    lower = lower_threshold(r)
    out = {
        "r": r,
        "graph": graph_stats(g),
        f"P_{r - 1}": pair["P"],
        f"K_{r}f": pair["Kf"],
        "equal": pair["equal"],
        "min_degree_ratio": format_fraction(ratio),
        "lower_threshold": format_fraction(lower),
        "above_lower_threshold": ratio > lower,
    }
    if r >= 4:
        upper = upper_delta(r)
        out["upper_threshold"] = format_fraction(upper)
        out["at_least_upper_threshold"] = ratio >= upper
    return out


def experiment_delta4(n: int, theta=DEFAULT_THETA, seed: int = 0, mode: str = "seeded-random",
                      guard: CapGuard = None, exact: bool = False, threads: int = 1, restarts: int = 10,
                      on_event=None, debug: bool = False) -> Dict:
    """
    Build G_4 at apportioned part sizes and compare P_3, K_4 f and the parts witness with (184/605) n^2

    Parameters:
    - n: total vertex count
    - theta: density of the V_i - V_{i+2} edges
    - seed, mode: theta-edge sampling
    - guard: CapGuard; exact solving happens only inside its caps
    - exact: refuse instead of degrading to bounds

    Returns:
    - JSON-ready dict
    """
    guard = guard or CapGuard()
    spec = recursive_spec_for(n, 4, theta, seed, mode)
    g = make_Gr(spec)
    layout = GrLayout(spec.sizes)
    try:
        witness = krfree_from_parts(g, layout.parts, 4, construction_pair_filter(len(layout.parts)))
    except CliqueSurvivesError as e:
        raise SolverError(f"parts witness of G_4 contains K_4 {list(e.witness)}") from e
    expected = witness_edge_count(spec.sizes)
    if debug:
        print(f"DEBUG: G_4 sizes {spec.sizes}, witness {witness.value} edges, formula {expected}")

    pair = solve_pair(g, 4, guard, exact, threads, seed, restarts, on_event, debug)
    threshold = EXPERIMENT_CONSTANT * n * n
    kf_lower = max(pair["Kf"]["lower"], witness.value)
    if pair["P"]["upper"] < kf_lower:
        strict_gap = True
    elif pair["equal"] is None:
        strict_gap = None
    else:
        strict_gap = not pair["equal"]
    return {
        "spec": spec.to_dict(),
        "layout": layout.to_dict(),
        "graph": graph_stats(g),
        "exact": pair["P"]["mode"] == pair["Kf"]["mode"] == "exact",
        "P_3": pair["P"],
        "K_4f": pair["Kf"],
        "witness": witness.to_dict(),
        "witness_edges": witness.value,
        "witness_formula": expected,
        "witness_matches_formula": witness.value == expected,
        "threshold": format_fraction(threshold),
        "P_3_upper_below_threshold": pair["P"]["upper"] < threshold,
        "witness_above_threshold": witness.value > threshold,
        "strict_gap": strict_gap,
        "min_degree_ratio": format_fraction(Fraction(g.min_degree(), g.n)) if g.n else "0",
        "lower_threshold": format_fraction(lower_threshold(4)),
    }


def peel_report(g: Graph, gamma, on_event=None) -> Dict:
    """Peel at gamma, replay the trace and check the surviving degree and edge guarantees."""
    trace = peel(g, gamma, on_event)
    replay_peel(g, trace)
    final = trace.final
    return {
        "graph": graph_stats(g),
        "trace": trace.to_dict(),
        "replayed": True,
        "min_degree_above_gamma": final.n == 0 or final.min_degree() > trace.gamma * final.n,
        "edge_bound_holds": trace.check_edge_bound(),
    }


def hom_report(g: Graph, d_max: int = 4, r: Optional[int] = None, d: Optional[int] = None,
               guard: CapGuard = None, on_event=None) -> Dict:
    """
    Least wheel type of g and, when r and d are given, the minimum-degree hypothesis check

    Returns:
    - JSON-ready dict
    """
    out = {"graph": graph_stats(g), "d_max": d_max}
    found = minimal_wheel_type(g, d_max, guard)
    if found is None:
        out["wheel_type"] = None
        out["map"] = None
    else:
        out["wheel_type"] = found[0]
        out["map"] = found[1].to_dict()
    if r is not None and d is not None:
        out["hypothesis"] = check_degree_hypothesis(g, r, d, guard, on_event).to_dict()
    return out
