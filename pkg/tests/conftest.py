import pytest


@pytest.fixture(scope="session")
def linking_bench():
    from convkg.benchmark import linking_benchmark
    return linking_benchmark()


@pytest.fixture(scope="session")
def ranking_bench():
    from convkg.benchmark import ranking_benchmark
    return ranking_benchmark()


@pytest.fixture(scope="session")
def fixture_org_session():
    from convkg.fixtures import fixture_org
    return fixture_org()
