from gnomes.server.app import ServerConfig, create_app
from gnomes.server.session import (
    ProtocolError,
    Session,
    SessionCondition,
    SessionSettings,
    SessionStore,
)

__all__ = [
    "ProtocolError",
    "ServerConfig",
    "Session",
    "SessionCondition",
    "SessionSettings",
    "SessionStore",
    "create_app",
]
