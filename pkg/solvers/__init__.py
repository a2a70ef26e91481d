# This file makes the solvers directory a Python package

def default_event_logger(event):
    try:
        etype = event.get("type", "event")
        solver = event.get("solver", "?")
        print(f"[EVENT] {etype} - {solver}: {event}")
    except Exception:
        print(f"[EVENT] {event}")


def emit(on_event, **event):
    if on_event is not None:
        on_event(event)
