import pytest

from fbarlink.circuit import DeviceParams, StaticBranch

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def device():
    return DeviceParams()


@pytest.fixture
def branch(device):
    return device.branch


@pytest.fixture
def bvd_static(device):
    return StaticBranch(device.c0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
