"""
遥测设置模块
负责OpenTelemetry的配置和初始化; pipeline phases run inside spans.
"""
import contextlib
import logging
import socket
from typing import Optional
from urllib.parse import urlparse

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

# 全局标记，确保TracerProvider只初始化一次
_global_initialized = False

DEFAULT_ENDPOINT = "http://localhost:4317"


class TelemetrySetup:
    """遥测设置管理器"""

    def __init__(self, service_name: str = "viscorod", endpoint: Optional[str] = None,
                 enable_telemetry: bool = False):
        self.service_name = service_name
        self.endpoint = endpoint or DEFAULT_ENDPOINT
        self.enable_telemetry = enable_telemetry
        self.tracer: Optional[trace.Tracer] = None
        self._connection_checked = False
        self._endpoint_available = False
        self.logger = logging.getLogger(__name__)

    def _check_endpoint_connection(self) -> bool:
        """检查端点连接是否可用"""
        if self._connection_checked:
            return self._endpoint_available
        try:
            parsed = urlparse(self.endpoint)
            host = parsed.hostname or "localhost"
            port = parsed.port or 4317
            with socket.create_connection((host, port), timeout=3):
                self._endpoint_available = True
        except OSError as e:
            self.logger.warning(f"OpenTelemetry endpoint {self.endpoint} is not reachable ({e}). Spans will not be exported.")
            self._endpoint_available = False
        self._connection_checked = True
        return self._endpoint_available

    def initialize(self) -> trace.Tracer:
        """初始化遥测设置, 返回追踪器"""
        global _global_initialized

        if self.tracer is not None:
            return self.tracer

        if not self.enable_telemetry:
            # 不设置全局provider, 使用默认的 no-op tracer
            self.logger.debug("Telemetry is disabled by configuration.")
            self.tracer = trace.get_tracer(self.service_name)
            return self.tracer

        if not _global_initialized:
            tracer_provider = TracerProvider(resource=Resource({"service.name": self.service_name}))
            if self._check_endpoint_connection():
                try:
                    exporter = OTLPSpanExporter(endpoint=self.endpoint, insecure=True, timeout=5)
                    tracer_provider.add_span_processor(BatchSpanProcessor(exporter))
                    self.logger.info(f"OpenTelemetry OTLP exporter initialized with endpoint: {self.endpoint}")
                except Exception as e:
                    self.logger.error(f"Failed to initialize OTLP exporter: {e}. Spans will not be exported.")
            else:
                self.logger.info("OpenTelemetry initialized in silent mode (no exporter).")
            if not isinstance(trace.get_tracer_provider(), TracerProvider):
                trace.set_tracer_provider(tracer_provider)
            _global_initialized = True

        self.tracer = trace.get_tracer(self.service_name)
        return self.tracer

    @contextlib.contextmanager
    def span(self, name: str, **attributes):
        """Run a pipeline phase inside a span."""
        tracer = self.initialize()
        with tracer.start_as_current_span(name) as current:
            for key, value in attributes.items():
                current.set_attribute(key, value)
            yield current

    def is_endpoint_available(self) -> bool:
        if not self._connection_checked:
            self._check_endpoint_connection()
        return self._endpoint_available
