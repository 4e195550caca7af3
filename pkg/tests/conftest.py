import pytest
from hypothesis import HealthCheck, settings

from stacky_moduli.pipeline import GL_FIXTURES, build_pipeline, gl_pipeline, hirzebruch_f2

settings.register_profile(
    "default", max_examples=200, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def pipelines():
    return {name: gl_pipeline(make()) for name, make in GL_FIXTURES.items()}


@pytest.fixture(scope="session")
def p12(pipelines):
    return pipelines["p12"]


@pytest.fixture(scope="session")
def w23(pipelines):
    return pipelines["w23"]


@pytest.fixture(scope="session")
def w222(pipelines):
    return pipelines["w222"]


@pytest.fixture(scope="session")
def p1(pipelines):
    return pipelines["p1"]


@pytest.fixture(scope="session")
def f2():
    C, V = hirzebruch_f2()
    return build_pipeline(C, V)
