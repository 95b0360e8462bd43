import logging
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from linspp.costs import OrderDCost
from linspp.generators import double_diamond as double_diamond_graph
from linspp.generators import layered
from linspp.graph import Dag, build_dag

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _reset_linspp_logger():
    yield
    logger = logging.getLogger("linspp")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def single_arc() -> Dag:
    return build_dag(["s", "t"], [("s", "t")], "s", "t")


@pytest.fixture
def diamond() -> Dag:
    """Arc ids: 1 (s,u), 2 (u,t), 3 (s,w), 4 (w,t); vertex ids s=0, u=1, w=2, t=3."""
    return build_dag(
        ["s", "u", "w", "t"], [("s", "u"), ("u", "t"), ("s", "w"), ("w", "t")], "s", "t"
    )


@pytest.fixture
def chain() -> Dag:
    return build_dag(4, [(0, 1), (1, 2), (2, 3)], 0, 3)


@pytest.fixture
def double_diamond() -> Dag:
    """Vertex ids s=0, x1=1, x2=2, u=3, y1=4, y2=5, t=6.

    Arc ids: 1 (s,x1), 2 (s,x2), 3 (x1,u), 4 (x2,u), 5 (u,y2), 6 (u,y1),
    7 (y1,t), 8 (y2,t).
    """
    return double_diamond_graph()


@pytest.fixture
def planted_violation(double_diamond: Dag) -> OrderDCost:
    """q({(x1,u), (u,y1)}) = 1; the two-path system at u is unbalanced."""
    return OrderDCost(2, {(3, 6): 1}, double_diamond.arc_ids)


@pytest.fixture
def diamond_quadratic(diamond: Dag) -> OrderDCost:
    """Paths cost 6 (s-u-t) and 0 (s-w-t)."""
    return OrderDCost(2, {(1,): 1, (2,): 2, (1, 2): 3}, diamond.arc_ids)


@pytest.fixture
def layered_3x2() -> Dag:
    return layered(3, 2)
