import pytest

from rootsets.catalog import corpus


@pytest.fixture(scope="session")
def groups():
    return corpus()


@pytest.fixture(scope="session")
def q8(groups):
    return groups["Q8"]


@pytest.fixture(scope="session")
def s3(groups):
    return groups["S3"]
