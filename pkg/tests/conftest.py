import pytest

from cyclotome import build_field, build_scheme, warmup_kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # jit compilation happens once here, outside any timed section
    warmup_kernels()


@pytest.fixture(scope="session")
def field_11_3():
    return build_field(11, 3)


@pytest.fixture(scope="session")
def scheme_11_3(field_11_3):
    return build_scheme(field_11_3, 14)


@pytest.fixture(scope="session")
def field_3_5():
    return build_field(3, 5)


@pytest.fixture(scope="session")
def scheme_3_5(field_3_5):
    return build_scheme(field_3_5, 22)


@pytest.fixture(scope="session")
def field_37_3():
    return build_field(37, 3)
