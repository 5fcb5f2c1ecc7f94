"""Optional process-level parallelism, capped by the K3KIT_THREADS env var.

Results always come back in input order, so parallel runs are
byte-identical to serial ones.
"""

import os
from concurrent.futures import ProcessPoolExecutor

ENV_VAR = "K3KIT_THREADS"


def max_workers() -> int:
    raw = os.environ.get(ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _star(args):
    fn, a = args
    return fn(*a)


def pmap(fn, arg_tuples):
    arg_tuples = list(arg_tuples)
    workers = min(max_workers(), len(arg_tuples))
    if workers <= 1:
        return [fn(*a) for a in arg_tuples]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_star, [(fn, a) for a in arg_tuples]))
