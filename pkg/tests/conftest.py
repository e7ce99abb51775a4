import os
import sys

import pytest
from hypothesis import settings


sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from instances import fail_instance, one_type, two_type  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def two_type_inst():
    return two_type()


@pytest.fixture
def one_type_inst():
    return one_type()


@pytest.fixture
def fail_inst():
    return fail_instance()


@pytest.fixture
def fixtures_dir():
    return FIXTURES
