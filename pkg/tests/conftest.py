import pytest

from mlqi import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per available kernel implementation."""
    previous = _backend.use(request.param)
    yield request.param
    _backend.use(previous)
