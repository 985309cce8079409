"""Shared fixtures, including the full-window oracle comparison.

The acceptance window is a in [-6, 6], b and c in [-3, 3] for p in
{3, 5}.  The oracle comparison is chunked by (b, c) column so each
worker process reuses one cellular engine per task, and the whole run
is parallel across columns.
"""

import os
from multiprocessing import Pool

import pytest

from dihedralhz import ring
from dihedralhz.dihedral import Grading, group_spec
from dihedralhz.oracle import mackey_axiom_check, pi_mackey

WINDOW_A = (-6, 6)
WINDOW_B = (-3, 3)
WINDOW_C = (-3, 3)
PRIMES = (3, 5)


def window_gradings():
    for b in range(WINDOW_B[0], WINDOW_B[1] + 1):
        for c in range(WINDOW_C[0], WINDOW_C[1] + 1):
            for a in range(WINDOW_A[0], WINDOW_A[1] + 1):
                yield Grading(a, b, c)


def _oracle_column(task):
    """Oracle vs closed form for one (p, b, c) column of the window."""
    p, b, c = task
    spec = group_spec(p)
    rows = []
    for a in range(WINDOW_A[0], WINDOW_A[1] + 1):
        g = Grading(a, b, c)
        got = pi_mackey(spec, g)
        want = ring.mackey_at(spec, g)
        failures = [name for name, ok, _ in mackey_axiom_check(got) if not ok]
        rows.append((g.serialize(), got.signature(), want.signature(), failures))
    return p, rows


@pytest.fixture(scope="session")
def window_results():
    """{p: {grading_key: (oracle_sig, closed_sig, axiom_failures)}}."""
    tasks = [
        (p, b, c)
        for p in PRIMES
        for b in range(WINDOW_B[0], WINDOW_B[1] + 1)
        for c in range(WINDOW_C[0], WINDOW_C[1] + 1)
    ]
    jobs = min(8, os.cpu_count() or 1)
    out = {p: {} for p in PRIMES}
    with Pool(jobs) as pool:
        for p, rows in pool.imap_unordered(_oracle_column, tasks):
            for key, got_sig, want_sig, failures in rows:
                out[p][key] = (got_sig, want_sig, failures)
    return out


@pytest.fixture(scope="session")
def spec3():
    return group_spec(3)


@pytest.fixture(scope="session")
def spec5():
    return group_spec(5)


@pytest.fixture(scope="session")
def cohomology3():
    from dihedralhz.groupcoh import GroupCohomology

    return GroupCohomology(group_spec(3), max_degree=9)


@pytest.fixture(scope="session")
def cohomology5():
    from dihedralhz.groupcoh import GroupCohomology

    return GroupCohomology(group_spec(5), max_degree=9)
