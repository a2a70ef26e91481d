from fractions import Fraction

from graphs.graph import Graph, bits, induced
from solvers import emit
from solvers.certificates import CertificateError, PeelTrace


def peel_threshold(r: int) -> Fraction:
    """Degree fraction (3r-7)/(3r-4) used when peeling towards the general upper bound on delta_r."""
    return Fraction(3 * r - 7, 3 * r - 4)


def peel(g: Graph, gamma, on_event=None) -> PeelTrace:
    """
    Delete vertices of degree <= gamma * (current vertex count) until none is left

    Parameters:
    - g: graph
    - gamma: threshold in [0, 1] (int, Fraction, "p/q" or decimal)
    - on_event: optional callback receiving one peel_step event per deletion

    Returns:
    - PeelTrace; ties go to the smallest current degree, then the smallest original label
    """
    gamma = PeelTrace.parse_gamma(gamma)
    trace = PeelTrace(gamma, g.n, g.num_edges)
    alive = (1 << g.n) - 1
    deg = g.degrees()
    size = g.n
    while alive:
        low = [v for v in bits(alive) if deg[v] <= gamma * size]
        if not low:
            break
        v = min(low, key=lambda u: (deg[u], g.label_of(u)))
        trace.deleted.append((g.label_of(v), deg[v], size))
        emit(on_event, type="peel_step", solver="peel", vertex=g.label_of(v), degree=deg[v], size=size)
        alive &= ~(1 << v)
        for u in bits(g.rows[v] & alive):
            deg[u] -= 1
        size -= 1
    trace.final = induced(g, bits(alive))
    return trace


def replay_peel(g: Graph, trace: PeelTrace) -> Graph:
    """
    Re-run the recorded deletions and check every step against the trace

    Parameters:
    - g: the graph the trace was produced from
    - trace: PeelTrace

    Returns:
    - The surviving graph; raises CertificateError when a step or the final graph disagrees
    """
    index = g.label_map()
    alive = (1 << g.n) - 1
    for label, degree, size in trace.deleted:
        v = index.get(label)
        if v is None or not (alive >> v) & 1:
            raise CertificateError(f"trace deletes vertex {label}, which is not present")
        actual = (g.rows[v] & alive).bit_count()
        if actual != degree or alive.bit_count() != size:
            raise CertificateError(f"vertex {label}: trace says degree {degree} at size {size}, "
                                   f"replay gives {actual} at size {alive.bit_count()}")
        if degree > trace.gamma * size:
            raise CertificateError(f"vertex {label} deleted with degree {degree} > {trace.gamma} * {size}")
        alive &= ~(1 << v)
    final = induced(g, bits(alive))
    if trace.final is not None and (final != trace.final or final.labels != trace.final.labels):
        raise CertificateError("replayed graph differs from the recorded final graph")
    return final
