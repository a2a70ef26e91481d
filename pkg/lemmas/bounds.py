from fractions import Fraction
from typing import Dict, List, Sequence

from graphs.utils import format_fraction
from lemmas.report import LemmaError, LemmaReport

TURAN_COEFF = Fraction(49, 52)
D3_COEFF = Fraction(12, 13)
D2_ALPHA1_COEFF = Fraction(159, 169)
WEAK_ALPHA_SAMPLES = 20


def upper_delta(r: int) -> Fraction:
    """(4(3r-7)(r-1)+1) / (4(r-2)(3r-4)); 61/64 at r = 4."""
    if r < 4:
        raise LemmaError(f"r must be at least 4, got {r}")
    return Fraction(4 * (3 * r - 7) * (r - 1) + 1, 4 * (r - 2) * (3 * r - 4))


def lower_delta(r: int) -> Fraction:
    return Fraction(3 * r - 4, 3 * r - 1)


def upper_sides(r: int, delta: Fraction) -> Dict[str, Fraction]:
    """Squared left side and the right side of the square-root inequality at delta."""
    lhs_sq = delta * (r - 2) * (3 * r - 4) - (3 * r - 7) * (r - 1)
    rhs = 2 * (r - 1) * (3 * r - 4) * ((Fraction(1, 2) - delta) * Fraction(r - 2, r - 1)
                                       + Fraction(3 * r - 7, 2 * (3 * r - 4)))
    return {"lhs_squared": lhs_sq, "rhs": rhs}


def verify_general_upper(r_max: int = 1000, on_event=None) -> LemmaReport:
    """
    Exact check that the closed-form delta_r satisfies the square-root inequality for 4 <= r <= r_max

    Parameters:
    - r_max: at least 4

    Returns:
    - LemmaReport with one aggregated claim per condition and the per-r minima in values
    """
    if r_max < 4:
        raise LemmaError(f"r_max must be at least 4, got {r_max}")
    report = LemmaReport("upper", {"r_max": r_max})
    rs = range(4, r_max + 1)
    deltas = {r: upper_delta(r) for r in rs}
    sides = {r: upper_sides(r, deltas[r]) for r in rs}

    worst_rhs = min(rs, key=lambda r: sides[r]["rhs"])
    worst_lhs = min(rs, key=lambda r: sides[r]["lhs_squared"])
    worst_gap = min(rs, key=lambda r: sides[r]["lhs_squared"] - sides[r]["rhs"] ** 2)
    worst_order = min(rs, key=lambda r: deltas[r] - lower_delta(r))

    report.add("r=4 upper bound", "==", deltas[4], Fraction(61, 64), reference="61/64", on_event=on_event)
    report.add("r=4 lower bound below upper", "<", lower_delta(4), deltas[4], reference="8/11 < 61/64",
               on_event=on_event)
    report.add("right side >= 0 for all r", ">=", sides[worst_rhs]["rhs"], Fraction(0), on_event=on_event)
    report.add("left side squared >= 0 for all r", ">=", sides[worst_lhs]["lhs_squared"], Fraction(0),
               on_event=on_event)
    report.add("lhs^2 >= rhs^2 for all r", ">=", sides[worst_gap]["lhs_squared"], sides[worst_gap]["rhs"] ** 2,
               on_event=on_event)
    report.add("upper bound < 1 for all r", "<", max(deltas.values()), Fraction(1), on_event=on_event)
    report.add("upper bound > 0 for all r", ">", min(deltas.values()), Fraction(0), on_event=on_event)
    report.add("lower < upper for all r", ">", deltas[worst_order] - lower_delta(worst_order), Fraction(0),
               on_event=on_event)

    ordered = [deltas[r] for r in rs]
    report.values["increasing in r"] = all(a < b for a, b in zip(ordered, ordered[1:]))
    report.values["equality for all r"] = all(s["lhs_squared"] == s["rhs"] ** 2 for s in sides.values())
    report.values["tightest r"] = worst_gap
    report.values["first bounds"] = {str(r): format_fraction(deltas[r]) for r in list(rs)[:5]}
    return report


def weak_quadratic(n: int, alpha: Fraction) -> Fraction:
    return n * alpha ** 2 - 12 * alpha - Fraction(n, 4) - 1


def weak_alpha_max(n: int) -> Fraction:
    return Fraction(1, 2) - Fraction(27, n)


def d1_threshold(n: int, alpha: Fraction) -> Fraction:
    """Degree ceiling 3n(25/78 - alpha/78 - 1/(78n)) of the d = 1 case."""
    return 3 * n * (Fraction(25, 78) - alpha / 78 - Fraction(1, 78 * n))


def d2_threshold(n: int, alpha: Fraction) -> Fraction:
    return (Fraction(3, 169) * alpha ** 2 - Fraction(12, 13 * n) * alpha + D3_COEFF * (1 + Fraction(1, n))) * n


def turan_case_threshold(n: int, alpha: Fraction) -> Fraction:
    """Degree ceiling when the part is bounded by Turan's theorem alone."""
    return 3 * n * (alpha ** 2 / 39 - Fraction(4, 13 * n) * alpha + Fraction(4, 13) * (1 + Fraction(1, n)))


def turan_threshold(n: int) -> Fraction:
    return TURAN_COEFF * n + 1


def crossover(a: Fraction, b: Fraction, c: Fraction, e: Fraction) -> int:
    """
    Least n >= 1 from which a n + b > c n + e for every larger n

    Parameters:
    - a, b: slope and intercept of the dominating line, a > c
    - c, e: slope and intercept of the dominated line
    """
    if a <= c:
        raise LemmaError("the dominating slope must be strictly larger")
    if e < b:
        return 1
    return max(1, (e - b) // (a - c) + 1)


def verify_weak_bound(n_values: Sequence[int] = (100, 1000, 10000), on_event=None) -> LemmaReport:
    """
    Exact case analysis of the weak delta_4 bound at each n

    Parameters:
    - n_values: vertex counts

    Returns:
    - LemmaReport
    """
    if not n_values or any(int(n) < 1 for n in n_values):
        raise LemmaError("n values must be positive integers")
    report = LemmaReport("weak", {"n_values": [int(n) for n in n_values]})

    report.add("49/52 - 12/13", "==", TURAN_COEFF - D3_COEFF, Fraction(1, 52), on_event=on_event)
    report.add("49/52 - 159/169", "==", TURAN_COEFF - D2_ALPHA1_COEFF, Fraction(1, 676), on_event=on_event)
    cross_d3 = crossover(TURAN_COEFF, Fraction(1), D3_COEFF, D3_COEFF)
    cross_d2 = crossover(TURAN_COEFF, Fraction(1), D2_ALPHA1_COEFF, Fraction(0))
    report.values["crossover d=3"] = cross_d3
    report.values["crossover d=2"] = cross_d2
    report.add("d=3 crossover n", "==", cross_d3, 1, on_event=on_event)
    report.add("d=2 crossover n", "==", max(cross_d2, cross_d3), 1, on_event=on_event)

    rows: List[Dict] = []
    for n in sorted({int(n) for n in n_values}):
        hi = weak_alpha_max(n)
        turan = turan_threshold(n)
        d3 = D3_COEFF * n + D3_COEFF
        d2 = max(d2_threshold(n, Fraction(0)), d2_threshold(n, Fraction(1)))
        report.add(f"n={n} d=2 ceiling endpoints", "==", d2, max(d3, D2_ALPHA1_COEFF * n), on_event=on_event)
        report.add(f"n={n} d=3 ceiling below Turan case", "<", d3, turan, on_event=on_event)
        report.add(f"n={n} d=2 ceiling below Turan case", "<", d2, turan, on_event=on_event)
        report.add(f"n={n} quadratic at 0", "==", weak_quadratic(n, Fraction(0)), -Fraction(n, 4) - 1,
                   on_event=on_event)

        # convex in alpha, so the endpoints bound it on the interval
        if hi < 0:
            report.values[f"n={n} alpha range"] = "empty"
            endpoint = None
        else:
            endpoint = weak_quadratic(n, hi)
            report.add(f"n={n} quadratic at 1/2 - 27/n", "==", endpoint, -34 + Fraction(1053, n),
                       on_event=on_event)
            report.add(f"n={n} quadratic <= 0 on [0, 1/2 - 27/n]", "<=",
                       max(weak_quadratic(n, Fraction(0)), endpoint), Fraction(0), on_event=on_event)

        # the d = 1 ceiling against the Turan case is exactly alpha < 1/2 - 27/n
        samples = [Fraction(k, WEAK_ALPHA_SAMPLES) for k in range(WEAK_ALPHA_SAMPLES + 1)]
        samples += [hi - Fraction(1, n * n), hi, hi + Fraction(1, n * n)]
        agree = all((turan < d1_threshold(n, a)) == (a < hi) for a in samples)
        report.add(f"n={n} d=1 case equivalent to alpha < 1/2 - 27/n", "is", agree, True, on_event=on_event)
        agree = all((turan < turan_case_threshold(n, a)) == (weak_quadratic(n, a) > 0) for a in samples)
        report.add(f"n={n} Turan case equivalent to a positive quadratic", "is", agree, True, on_event=on_event)

        rows.append({"n": n, "alpha_max": format_fraction(hi),
                     "endpoint": format_fraction(endpoint) if endpoint is not None else None,
                     "turan": format_fraction(turan), "d3": format_fraction(d3), "d2": format_fraction(d2)})
    report.values["rows"] = rows
    return report
