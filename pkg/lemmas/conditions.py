from fractions import Fraction

from graphs.utils import to_fraction
from lemmas.report import LemmaReport
from lemmas.wheel import (bound_d2, bound_general, gamma_ceiling, is_gamma_feasible, wheel_gamma_max,
                          wheel_max)

SAMPLE_GAMMAS = [Fraction(0), Fraction(1, 2), Fraction(3, 5), Fraction(8, 13), Fraction(1)]


def bound_d3(gamma):
    return (325 * gamma ** 2 - 400 * gamma + 124) / 3


def bound_d4(gamma):
    return 225 * gamma ** 2 - 275 * gamma + Fraction(253, 3)


def bound_d2_general_form(gamma):
    return (200 * gamma ** 2 - 250 * gamma + 80) / 6


def verify_condition_of_d(gamma, restarts: int = 50, seed: int = 0, tol: float = 1e-6, on_event=None) -> LemmaReport:
    """
    Check the d = 2, 3, 4 table: gamma ceilings, closed-form bounds, and the oracle against them

    Parameters:
    - gamma: neighbourhood-sum level to test
    - restarts: SLSQP restarts per oracle call
    - seed: oracle seed
    - tol: slack allowed when comparing the oracle with a bound

    Returns:
    - LemmaReport
    """
    gamma = to_fraction(gamma)
    report = LemmaReport("conditions", {"gamma": gamma, "restarts": restarts, "seed": seed, "tol": tol})

    ceilings = {d: gamma_ceiling(d) for d in (2, 3, 4)}
    for d, ceiling in ceilings.items():
        game = wheel_gamma_max(d)
        report.add(f"d={d} gamma ceiling certified", "is", game.certified, True, on_event=on_event)
        report.add(f"d={d} gamma ceiling", "==", game.value, ceiling, reference=str(ceiling), on_event=on_event)
    report.add("ceilings ordered 11/18 < 8/13", "<", ceilings[4], ceilings[3], on_event=on_event)
    report.add("ceilings ordered 8/13 < 5/8", "<", ceilings[3], ceilings[2], on_event=on_event)

    # degree-2 polynomials agreeing at 5 points agree identically
    for g in SAMPLE_GAMMAS:
        report.add(f"d=2 general form at {g}", "==", bound_general(2, g), bound_d2_general_form(g), on_event=on_event)
        report.add(f"d=3 specialisation at {g}", "==", bound_general(3, g), bound_d3(g), on_event=on_event)
        report.add(f"d=4 specialisation at {g}", "==", bound_general(4, g), bound_d4(g), on_event=on_event)

    report.add("d=3 bound at 8/13", "==", bound_d3(Fraction(8, 13)), Fraction(4, 13), reference="4/13",
               on_event=on_event)
    report.add("d=2 bound at 8/13", "==", bound_d2(Fraction(8, 13)), Fraction(53, 169), reference="53/169",
               on_event=on_event)

    for d, ceiling in ceilings.items():
        feasible = is_gamma_feasible(d, gamma)
        report.add(f"d={d} feasible at gamma", "is", feasible, gamma <= ceiling, on_event=on_event)
        report.values[f"d={d} bound"] = bound_general(d, gamma)
        if not feasible:
            continue
        res = wheel_max(d, gamma, restarts=restarts, seed=seed)
        report.values[f"d={d} oracle"] = res.value
        report.add(f"d={d} oracle <= general bound", "<=", res.value, float(bound_general(d, gamma)), tol,
                   on_event=on_event)
        if d == 2:
            report.add("d=2 oracle <= 12g^2-15g+5", "<=", res.value, float(bound_d2(gamma)), tol, on_event=on_event)
    return report
