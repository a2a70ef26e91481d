import argparse
import copy
import json
import os
import sys
from fractions import Fraction

from dotenv import load_dotenv

from graphs.constructions import (BlowupSpec, RecursiveSpec, SpecError, build_family, recursive_spec_for)
from graphs.formats import dumps_graph, format_for_path, read_graph
from graphs.graph import GraphError
from graphs.utils import to_fraction
from lemmas.bounds import verify_general_upper, verify_weak_bound
from lemmas.conditions import verify_condition_of_d
from lemmas.lll import verify_lll
from lemmas.report import LemmaError
from lemmas.wheel import sweep_gammas, sweep_rows, verify_min_lemma
from reports.pipelines import experiment_delta4, gap_report, hom_report, peel_report
from reports.records import (ExperimentRecord, graph_stats, write_bytes_atomic, write_csv_atomic,
                             write_json_atomic, write_text_atomic)
from solvers import default_event_logger
from solvers.caps import CapGuard, SolverError

# Load environment variables from .env if present
load_dotenv()

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64

DEFAULT_CONFIG = {
    "solver": {
        "kcut_caps": {"2": 24, "3": 20},
        "krfree_caps": {"3": 14, "4": 16},
        "homomorphism_caps": {"12": 40, "16": 24},
        "local_restarts": 10,
        "threads": 1,
    },
    "constructions": {"theta": "1/8", "seed": 0, "mode": "seeded-random"},
    "lemmas": {
        "delta": 0.9415,
        "epsilon": 1e-6,
        "grid_step": 1e-5,
        "wheel_restarts": 200,
        "wheel_tolerance": 1e-6,
        "wheel_seed": 0,
        "r_max": 1000,
        "weak_n": [100, 1000, 10000],
    },
    "output": {"graph_format": "graph6"},
}


class ToolkitArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _int_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text):
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number or p/q, got {text!r}")


class TuranGapToolkit:
    def __init__(self, config_path="config.json", debug=False):
        """
        Initialize the toolkit

        Parameters:
        - config_path: Path to configuration file
        - debug: Whether to print solver events and debug output
        """
        self.config = self._load_config(config_path)
        self.debug = debug
        self.on_event = default_event_logger if debug else None

        solver = self.config["solver"]
        self.threads = max(1, int(solver.get("threads", 1)))
        self.local_restarts = int(solver.get("local_restarts", 10))
        self.guard = CapGuard.from_config(solver, on_event=self.on_event)

        constructions = self.config["constructions"]
        self.theta = to_fraction(constructions.get("theta", "1/8"))
        self.seed = int(constructions.get("seed", 0))
        self.mode = constructions.get("mode", "seeded-random")

        self.lemmas = self.config["lemmas"]
        self.graph_format = self.config["output"].get("graph_format", "graph6")

    def _load_config(self, config_path):
        """
        Load configuration from file

        Parameters:
        - config_path: Path to configuration file

        Returns:
        - Configuration as dict, built-in defaults merged under the file's sections
        """
        config = copy.deepcopy(DEFAULT_CONFIG)
        try:
            with open(config_path, 'r') as f:
                loaded = json.load(f)
            for section, values in loaded.items():
                if isinstance(values, dict) and isinstance(config.get(section), dict):
                    config[section].update(values)
                else:
                    config[section] = values
        except FileNotFoundError:
            print(f"WARNING: Configuration file not found: {config_path}; using built-in defaults")
        except json.JSONDecodeError:
            print(f"Invalid JSON in configuration file: {config_path}")
            sys.exit(EXIT_FAIL)

        # Overlay environment variables if present
        env_threads = os.getenv("TURANGAP_THREADS")
        env_seed = os.getenv("TURANGAP_SEED")
        if env_threads:
            config["solver"]["threads"] = int(env_threads)
        if env_seed:
            config["constructions"]["seed"] = int(env_seed)
            config["lemmas"]["wheel_seed"] = int(env_seed)
        return config

    def _emit(self, record, out=None):
        record.finish()
        if out:
            write_text_atomic(out, record.to_json() + "\n")
            print(f"Wrote {out}")
        else:
            print(record.to_json())

    def construction_params(self, args):
        """
        Turn construct flags (or a sidecar spec file) into a construction document

        Returns:
        - Dict accepted by build_family
        """
        if args.spec_file:
            with open(args.spec_file, 'r') as f:
                doc = json.load(f)
            return doc.get("construction", doc)

        family = args.family
        needed = {"F": ["d"], "wheel": ["d"], "turan": ["n", "k"], "complete": ["n"], "cycle": ["n"]}
        missing = [name for name in needed.get(family, []) if getattr(args, name) is None]
        if missing:
            raise SpecError(f"--family {family} needs " + ", ".join("--" + m for m in missing))
        theta = args.theta if args.theta is not None else self.theta
        seed = args.seed if args.seed is not None else self.seed
        mode = args.mode or self.mode
        if family in ("F", "wheel"):
            return {"family": family, "d": args.d}
        if family == "turan":
            return {"family": family, "n": args.n, "k": args.k}
        if family in ("complete", "cycle"):
            return {"family": family, "n": args.n}
        if family == "petersen":
            return {"family": family}
        if family in ("pentagon", "G4"):
            if not args.sizes:
                raise SpecError(f"--family {family} needs --sizes")
            params = {"family": family, "spec": BlowupSpec(tuple(args.sizes), theta, seed, mode).to_dict()}
            if family == "G4":
                params["apex"] = args.apex if args.apex is not None else 0
            return params
        if family == "Gr":
            r = args.r or 4
            if args.sizes:
                base = BlowupSpec(tuple(args.sizes), theta, seed, mode)
                spec = RecursiveSpec(r, base, tuple(args.apex_sizes or ()))
            elif args.n is not None:
                spec = recursive_spec_for(args.n, r, theta, seed, mode)
            else:
                raise SpecError("--family Gr needs --sizes/--apex-sizes or --n")
            return {"family": family, "spec": spec.to_dict()}
        raise SpecError(f"unknown family {family!r}")

    def construct(self, args):
        params = self.construction_params(args)
        g = build_family(params)
        fmt = args.format or (format_for_path(args.out) if args.out else self.graph_format)
        data = dumps_graph(g, fmt)
        sidecar = {"construction": params, "stats": graph_stats(g)}
        if args.out:
            write_bytes_atomic(args.out, data)
            write_json_atomic(args.out + ".json", sidecar)
            print(f"Wrote {args.out} (n={g.n}, e={g.num_edges})")
        else:
            sys.stdout.write(data.decode("utf-8"))
            if self.debug:
                print(f"DEBUG: {json.dumps(sidecar, sort_keys=True)}")
        return EXIT_PASS

    def gap(self, args):
        g = read_graph(args.graph)
        result = gap_report(g, args.r, self.guard, exact=args.exact, threads=self.threads, seed=self.seed,
                            restarts=self.local_restarts, on_event=self.on_event, debug=self.debug)
        record = ExperimentRecord("gap", {"graph": os.path.basename(args.graph), "r": args.r,
                                          "exact": args.exact}, result)
        self._emit(record, args.out)
        # unequal is a result; undecided bounds are not
        return EXIT_INCONCLUSIVE if result["equal"] is None else EXIT_PASS

    def experiment_delta4(self, args):
        theta = args.theta if args.theta is not None else self.theta
        seed = args.seed if args.seed is not None else self.seed
        result = experiment_delta4(args.n, theta, seed, args.mode or self.mode, self.guard, exact=args.exact,
                                   threads=self.threads, restarts=self.local_restarts, on_event=self.on_event,
                                   debug=self.debug)
        inputs = {"n": args.n, "theta": str(theta), "seed": seed, "exact": args.exact}
        self._emit(ExperimentRecord("experiment-delta4", inputs, result), args.out)
        return EXIT_PASS

    def peel(self, args):
        g = read_graph(args.graph)
        result = peel_report(g, args.gamma, on_event=self.on_event)
        inputs = {"graph": os.path.basename(args.graph), "gamma": str(args.gamma)}
        self._emit(ExperimentRecord("peel", inputs, result), args.out)
        return EXIT_PASS if result["min_degree_above_gamma"] and result["edge_bound_holds"] else EXIT_FAIL

    def hom(self, args):
        g = read_graph(args.graph)
        result = hom_report(g, args.d_max, args.r, args.d, self.guard, self.on_event)
        inputs = {"graph": os.path.basename(args.graph), "d_max": args.d_max, "r": args.r, "d": args.d}
        self._emit(ExperimentRecord("hom", inputs, result), args.out)
        hypothesis = result.get("hypothesis", {})
        if hypothesis.get("bug", False):
            return EXIT_FAIL
        return EXIT_INCONCLUSIVE if hypothesis.get("refused") else EXIT_PASS

    def verify(self, args):
        lemmas = self.lemmas
        which = args.which
        if which == "minlemma":
            restarts = args.restarts if args.restarts is not None else int(lemmas["wheel_restarts"])
            seed = args.seed if args.seed is not None else int(lemmas["wheel_seed"])
            tol = args.tol if args.tol is not None else float(lemmas["wheel_tolerance"])
            if args.csv:
                gammas = sweep_gammas(args.d, max(2, args.points))
                write_csv_atomic(args.csv, sweep_rows(args.d, gammas, restarts=restarts, seed=seed))
                print(f"Wrote {args.csv}")
            report = verify_min_lemma(args.d, args.gamma, restarts, seed, tol, on_event=self.on_event)
        elif which == "lll":
            report = verify_lll(args.delta if args.delta is not None else float(lemmas["delta"]),
                                args.epsilon if args.epsilon is not None else float(lemmas["epsilon"]),
                                args.grid_step if args.grid_step is not None else float(lemmas["grid_step"]),
                                on_event=self.on_event)
        elif which == "upper":
            report = verify_general_upper(args.rmax if args.rmax is not None else int(lemmas["r_max"]),
                                          on_event=self.on_event)
        elif which == "weak":
            report = verify_weak_bound(args.n or list(lemmas["weak_n"]), on_event=self.on_event)
        else:
            restarts = args.restarts if args.restarts is not None else 50
            seed = args.seed if args.seed is not None else int(lemmas["wheel_seed"])
            tol = args.tol if args.tol is not None else float(lemmas["wheel_tolerance"])
            report = verify_condition_of_d(args.gamma, restarts, seed, tol, on_event=self.on_event)

        print(report.summary_table())
        if args.out:
            record = ExperimentRecord(f"verify-{which}", report.to_dict()["inputs"], {"report": report.to_dict()})
            record.finish()
            write_text_atomic(args.out, record.to_json() + "\n")
            print(f"Wrote {args.out}")
        return report.exit_code()


def build_parser():
    parser = ToolkitArgumentParser(description='Turan gap toolkit: P_{r-1}(G) versus K_r f(G)')
    parser.add_argument('--config', default='config.json', help='Path to configuration file')
    parser.add_argument('--debug', action='store_true', help='Print solver events and debug output')
    sub = parser.add_subparsers(dest='command', parser_class=ToolkitArgumentParser)
    sub.required = True

    p = sub.add_parser('construct', help='Build a graph and write it with a JSON sidecar')
    p.add_argument('--family', choices=['F', 'wheel', 'turan', 'complete', 'cycle', 'petersen', 'pentagon',
                                        'G4', 'Gr'])
    p.add_argument('--spec-file', help='Rebuild from a sidecar or construction document')
    p.add_argument('--d', type=int, help='Index of F_d / F_d + K_1')
    p.add_argument('--n', type=int, help='Vertex count')
    p.add_argument('--k', type=int, help='Part count of the Turan graph')
    p.add_argument('--r', type=int, help='Clique order for G_r')
    p.add_argument('--sizes', type=_int_list, help='Pentagon part sizes, e.g. 2,2,2,2,2')
    p.add_argument('--apex', type=int, help='Apex part size of G_4')
    p.add_argument('--apex-sizes', type=_int_list, help='Apex part sizes of G_r')
    p.add_argument('--theta', type=_fraction, help='Density of the V_i - V_{i+2} edges')
    p.add_argument('--seed', type=int, help='theta-edge sampling seed')
    p.add_argument('--mode', choices=['seeded-random', 'quasirandom'])
    p.add_argument('--format', choices=['graph6', 'edgelist'])
    p.add_argument('--out', help='Output graph file (.g6 or edge list)')

    p = sub.add_parser('gap', help='Compare P_{r-1}(G) with K_r f(G); exit 2 when bounds leave equality open')
    p.add_argument('graph', help='Graph file (.g6 or edge list)')
    p.add_argument('--r', type=int, default=4)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument('--exact', action='store_true', help='Refuse instead of falling back to bounds')
    mode.add_argument('--bounds', action='store_true', help='Allow the bound fallback (default)')
    p.add_argument('--out', help='Output JSON file')

    p = sub.add_parser('experiment-delta4', help='G_4 at apportioned sizes against (184/605) n^2')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--theta', type=_fraction)
    p.add_argument('--seed', type=int)
    p.add_argument('--mode', choices=['seeded-random', 'quasirandom'])
    mode = p.add_mutually_exclusive_group()
    mode.add_argument('--exact', action='store_true')
    mode.add_argument('--bounds', action='store_true')
    p.add_argument('--out')

    p = sub.add_parser('peel', help='Min-degree peeling with replayable trace')
    p.add_argument('graph')
    p.add_argument('--gamma', type=_fraction, required=True)
    p.add_argument('--out')

    p = sub.add_parser('hom', help='Least wheel type and the minimum-degree hypothesis check')
    p.add_argument('graph')
    p.add_argument('--d-max', type=int, default=4)
    p.add_argument('--r', type=int)
    p.add_argument('--d', type=int)
    p.add_argument('--out')

    p = sub.add_parser('verify', help='Run a lemma verifier')
    p.add_argument('which', choices=['minlemma', 'lll', 'upper', 'weak', 'conditions'])
    p.add_argument('--d', type=int, default=2)
    p.add_argument('--gamma', type=_fraction, default=Fraction(5, 8))
    p.add_argument('--restarts', type=int)
    p.add_argument('--seed', type=int)
    p.add_argument('--tol', type=float)
    p.add_argument('--csv', help='Also write a gamma sweep table (minlemma)')
    p.add_argument('--points', type=int, default=50, help='Sweep points for --csv')
    p.add_argument('--delta', type=float)
    p.add_argument('--epsilon', type=float)
    p.add_argument('--grid-step', type=float)
    p.add_argument('--rmax', type=int)
    p.add_argument('--n', type=_int_list, help='Comma-separated n values (weak)')
    p.add_argument('--out', help='Output JSON file')
    return parser


def main(argv=None):
    """
    Main function to run the toolkit

    Returns:
    - Process exit code
    """
    args = build_parser().parse_args(argv)
    toolkit = TuranGapToolkit(config_path=args.config, debug=args.debug)
    handlers = {
        'construct': toolkit.construct,
        'gap': toolkit.gap,
        'experiment-delta4': toolkit.experiment_delta4,
        'peel': toolkit.peel,
        'hom': toolkit.hom,
        'verify': toolkit.verify,
    }
    if args.command == 'construct' and not (args.family or args.spec_file):
        print("construct needs --family or --spec-file", file=sys.stderr)
        return EXIT_USAGE
    try:
        return handlers[args.command](args)
    except (GraphError, SolverError, LemmaError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
