import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from egodisp.graph import build_ego_network  # noqa: E402

# Worked-example neighborhood: b, c, f have embeddedness 5; h has 4 and links
# the c-f side to the j-k pair; a and e are the one far-apart pair around b.
BRIDGE_EDGES = [("u", x) for x in "abcdefhjk"] + [
    tuple(e) for e in "ab ac bc bd be bf cd cf ch df ef fh hj hk jk".split()
]


def star_edges(k=5):
    return [("u", f"l{i}") for i in range(k)]


def complete_edges(n):
    nodes = [f"c{i:02d}" for i in range(n)]
    return [("u", x) for x in nodes] + list(itertools.combinations(nodes, 2))


def girth5_edges(rng, n):
    """Neighbors g00.. of u; an edge is kept only if its ends are more than 3 hops apart."""
    nbrs = [f"g{i:02d}" for i in range(n)]
    adj = {x: set() for x in nbrs}

    def far(a, b):
        seen, layer = {a}, [a]
        for _ in range(3):
            layer = [y for x in layer for y in adj[x] if y not in seen]
            seen.update(layer)
        return b not in seen

    for a, b in rng.sample(list(itertools.combinations(nbrs, 2)), k=min(3 * n, n * (n - 1) // 2)):
        if far(a, b):
            adj[a].add(b)
            adj[b].add(a)
    return [("u", x) for x in nbrs] + [(a, b) for a in nbrs for b in adj[a] if a < b]


@pytest.fixture
def bridge():
    return build_ego_network("u", BRIDGE_EDGES)


@pytest.fixture
def star():
    return build_ego_network("u", star_edges())


@pytest.fixture
def bridge_file(tmp_path):
    path = tmp_path / "bridge.tsv"
    path.write_text("".join(f"{a}\t{b}\n" for a, b in BRIDGE_EDGES))
    return path


# One summary line per acceptance criterion, in criterion order.
_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[name] = ("PASS" if report.outcome == "passed" else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        status, detail = _CRITERIA[name]
        number, _, title = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"criterion {int(number):2d} {status}  {title.replace('_', ' ')}"
                                    + (f"  [{detail}]" if detail else ""))
