import csv
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from graphs.graph import Graph
from graphs.utils import timestamp_to_date

TOOLKIT_VERSION = "0.1.0"

# fields that change between identical runs; they are moved into the envelope
TIMING_FIELDS = ("wall_time_ms",)


def graph_stats(g: Graph) -> Dict:
    return {
        "n": g.n,
        "e": g.num_edges,
        "min_degree": g.min_degree() if g.n else 0,
        "max_degree": g.max_degree() if g.n else 0,
        "degree_histogram": {str(k): v for k, v in sorted(g.degree_histogram().items())},
    }


def strip_timings(obj: Any, timings: Dict[str, float], path: str = "") -> Any:
    """
    Copy a JSON-ready value without its timing fields, collecting them under dotted paths

    Parameters:
    - obj: dict/list tree
    - timings: receives path -> value for every removed field

    Returns:
    - The tree without timing fields
    """
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            where = f"{path}.{k}" if path else k
            if k in TIMING_FIELDS:
                timings[where] = v
            else:
                out[k] = strip_timings(v, timings, where)
        return out
    if isinstance(obj, list):
        return [strip_timings(v, timings, f"{path}[{i}]") for i, v in enumerate(obj)]
    return obj


@dataclass
class ExperimentRecord:
    """
    One command run: the deterministic result plus an envelope of run metadata

    Parameters:
    - experiment: command or pipeline name
    - inputs: parameters the run was called with
    - result: deterministic payload (certificates, values, flags)
    - started: Unix time the run began
    """
    experiment: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    started: float = field(default_factory=time.time)
    finished: Optional[float] = None
    timings: Dict[str, float] = field(default_factory=dict)
    version: str = TOOLKIT_VERSION

    def __post_init__(self):
        self.result = strip_timings(self.result, self.timings)

    def finish(self) -> "ExperimentRecord":
        self.finished = time.time()
        return self

    def envelope(self) -> Dict:
        finished = self.finished if self.finished is not None else time.time()
        return {
            "experiment": self.experiment,
            "started": timestamp_to_date(self.started),
            "finished": timestamp_to_date(finished),
            "elapsed_ms": round((finished - self.started) * 1000.0, 3),
            "timings_ms": self.timings,
            "version": self.version,
        }

    def to_dict(self) -> Dict:
        return {"envelope": self.envelope(), "result": {"inputs": self.inputs, **self.result}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def result_json(self) -> str:
        """The deterministic half alone; identical flags and seed give identical text."""
        return json.dumps(self.to_dict()["result"], sort_keys=True, indent=2)


def write_bytes_atomic(path: str, data: bytes) -> None:
    """
    Write a file through a temporary sibling and a rename

    Parameters:
    - path: destination
    - data: file contents
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_text_atomic(path: str, text: str) -> None:
    write_bytes_atomic(path, text.encode("utf-8"))


def write_json_atomic(path: str, obj: Any) -> None:
    write_text_atomic(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def rows_to_csv(rows: List[Dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_csv_atomic(path: str, rows: List[Dict]) -> None:
    write_text_atomic(path, rows_to_csv(rows))
