"""
Tracing stays optional: runs never depend on a collector.
"""
from viscorod.telemetry_setup import TelemetrySetup


def test_disabled_spans_are_noops():
    telemetry = TelemetrySetup(enable_telemetry=False)
    with telemetry.span("build_modes", n_max=4):
        pass
    assert telemetry.tracer is not None
    assert not telemetry._connection_checked


def test_unreachable_endpoint_runs_silently():
    telemetry = TelemetrySetup(endpoint="http://127.0.0.1:9", enable_telemetry=True)
    assert not telemetry.is_endpoint_available()
    with telemetry.span("sweep", samples=3):
        pass
    assert telemetry.initialize() is telemetry.tracer
