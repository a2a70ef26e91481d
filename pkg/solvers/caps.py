from typing import Dict, Optional

from solvers import emit

DEFAULT_KCUT_CAPS = {2: 24, 3: 20}
DEFAULT_KRFREE_CAPS = {3: 14, 4: 16}
DEFAULT_HOMOMORPHISM_CAPS = {12: 40, 16: 24}
FALLBACK_CAP = 16


class SolverError(Exception):
    pass


class CapExceededError(SolverError):
    def __init__(self, problem: str, n: int, cap: int, param: Optional[int] = None):
        self.problem = problem
        self.n = n
        self.cap = cap
        self.param = param
        where = f" (parameter {param})" if param is not None else ""
        super().__init__(f"{problem}{where}: graph has {n} vertices, exact cap is {cap}")


class CapGuard:
    def __init__(self, kcut_caps: Dict[int, int] = None, krfree_caps: Dict[int, int] = None,
                 homomorphism_caps: Dict[int, int] = None, on_event=None):
        """
        Initialize the cap guard

        Parameters:
        - kcut_caps: part count k -> largest v(G) for max_kcut_exact
        - krfree_caps: clique order r -> largest v(G) for max_krfree_exact
        - homomorphism_caps: largest v(H) -> largest v(G) for find_homomorphism
        - on_event: optional callback receiving refusal events
        """
        self.kcut_caps = {int(k): int(v) for k, v in (kcut_caps or DEFAULT_KCUT_CAPS).items()}
        self.krfree_caps = {int(k): int(v) for k, v in (krfree_caps or DEFAULT_KRFREE_CAPS).items()}
        self.homomorphism_caps = {int(k): int(v) for k, v in (homomorphism_caps or DEFAULT_HOMOMORPHISM_CAPS).items()}
        self.on_event = on_event

    @staticmethod
    def from_config(solver_config: Dict, on_event=None) -> "CapGuard":
        return CapGuard(solver_config.get("kcut_caps"), solver_config.get("krfree_caps"),
                        solver_config.get("homomorphism_caps"), on_event=on_event)

    def cap_for(self, problem: str, param: int) -> int:
        """
        Look up the vertex cap of an exact problem

        Parameters:
        - problem: max_kcut, max_krfree or homomorphism
        - param: k, r, or v(H) respectively

        Returns:
        - Largest admissible v(G); 0 when the problem is refused outright
        """
        if problem == "max_kcut":
            return self.kcut_caps.get(param, FALLBACK_CAP)
        if problem == "max_krfree":
            return self.krfree_caps.get(param, FALLBACK_CAP)
        if problem == "homomorphism":
            fitting = [limit for limit in self.homomorphism_caps if param <= limit]
            return self.homomorphism_caps[min(fitting)] if fitting else 0
        raise SolverError(f"unknown problem {problem!r}")

    def allows(self, problem: str, n: int, param: int) -> bool:
        return n <= self.cap_for(problem, param)

    def require(self, problem: str, n: int, param: int) -> None:
        cap = self.cap_for(problem, param)
        if n > cap:
            emit(self.on_event, type="refused", solver=problem, n=n, cap=cap, param=param)
            raise CapExceededError(problem, n, cap, param)
