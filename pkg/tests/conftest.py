import numpy as np
import pytest
from hypothesis import strategies as st

from mtfp.core import Allocation, ProblemInstance, sequential_departments
from mtfp.instance_io import GeneratorConfig, dataset1, generate_instance

# Published exhaustive solution for dataset 1, zero-based groups:
# G1 = {I1, I2, I5, I7}, G2 = {I3, I4, I6, I9}, G3 = {I8, I10}
TABLE6_GROUPS = (0, 0, 1, 1, 0, 1, 0, 2, 1, 2)


@pytest.fixture
def d1() -> ProblemInstance:
    return dataset1()


@pytest.fixture
def table6() -> Allocation:
    return Allocation(TABLE6_GROUPS)


def make_instance(n_i, n_j, n_k, seed, pos=0.4, neg=0.1):
    return generate_instance(GeneratorConfig(n_i=n_i, n_j=n_j, n_k=n_k, positive_rate=pos, negative_rate=neg, seed=seed))


@st.composite
def small_instances(draw, max_i=6, max_j=3, max_k=3):
    n_k = draw(st.integers(1, max_k))
    n_j = draw(st.integers(1, max_j))
    n_i = draw(st.integers(max(n_j, n_k), max(max_i, n_j, n_k)))
    seed = draw(st.integers(0, 2**32 - 1))
    return make_instance(n_i, n_j, n_k, seed)


@st.composite
def instance_and_allocation(draw, max_i=6):
    inst = draw(small_instances(max_i=max_i))
    groups = draw(st.lists(st.integers(0, inst.n_k - 1), min_size=inst.n_i, max_size=inst.n_i))
    return inst, Allocation(groups)


def one_group_instance(n_i=5, seed=0):
    rng = np.random.default_rng(seed)
    socio = rng.integers(-1, 2, size=(n_i, n_i))
    np.fill_diagonal(socio, 0)
    req = np.array([[n_i]])
    return ProblemInstance(socio, req, sequential_departments(req), "one-group")


_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        detail = getattr(item, "criterion_detail", "")
        if report.outcome == "skipped" and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2]
        _ACCEPTANCE[label] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][1:])):
        status, detail = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{status:4}  {label}" + (f"  [{detail}]" if detail else ""))
