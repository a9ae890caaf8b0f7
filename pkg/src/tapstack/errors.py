"""Exception hierarchy shared across the transport stack."""

from __future__ import annotations

__all__ = [
    "TransportError",
    "MissingEndpoint",
    "AlreadyStarted",
    "NoCandidates",
    "InvalidMessage",
    "NotEstablished",
    "ConnectionClosed",
    "EstablishmentError",
    "BindFailure",
    "MessageTooLarge",
    "CarrierClosed",
    "HandshakeMismatch",
    "Timeout",
    "AssociationClosed",
    "StreamLimit",
    "MalformedFrame",
    "UnknownProtocol",
    "RangeError",
    "ConfigError",
    "CloneError",
    "PolicyError",
]


class TransportError(Exception):
    """Base class for every error raised by this package."""


class MissingEndpoint(TransportError):
    """Operation needs an endpoint the preconnection does not carry."""


class AlreadyStarted(TransportError):
    """Preconnection mutation attempted after initiate/listen."""


class NoCandidates(TransportError):
    """Property matching and system policy left no raceable protocol."""


class InvalidMessage(TransportError):
    """Message payload violates a send precondition (e.g. empty)."""


class NotEstablished(TransportError):
    """Operation requires an established connection."""


class ConnectionClosed(TransportError):
    """Operation attempted on a closed connection."""


class EstablishmentError(TransportError):
    """Every candidate attempt failed; carries the per-attempt causes."""

    def __init__(self, message: str = "all candidates failed",
                 causes: list | None = None):
        super().__init__(message)
        self.causes = causes or []


class BindFailure(TransportError):
    def __init__(self, protocol, cause):
        super().__init__(f"bind failed for {protocol}: {cause}")
        self.protocol = protocol
        self.cause = cause


class MessageTooLarge(TransportError):
    """Message exceeds what the protocol can carry in one unit."""


class CarrierClosed(TransportError):
    """Underlying byte-stream carrier is gone."""


class HandshakeMismatch(TransportError):
    """Peer spoke something other than the expected handshake."""


class Timeout(TransportError):
    """Attempt exceeded its deadline."""


class AssociationClosed(TransportError):
    """Multiplexed association is shut down (GOAWAY seen or sent)."""


class StreamLimit(TransportError):
    """No stream identifiers left on this association."""


class MalformedFrame(TransportError):
    """Undecodable frame; the association must be torn down."""


class UnknownProtocol(TransportError):
    """Protocol id not present in the registry / feature matrix."""


class RangeError(TransportError):
    """Cursor advance/deliver beyond the buffered byte count."""

    def __init__(self, message: str, needed: int = 0):
        super().__init__(message)
        self.needed = needed


class ConfigError(TransportError):
    """Invalid experiment or CLI configuration."""


class CloneError(TransportError):
    """Clone could not produce a usable entangled connection."""


class PolicyError(TransportError):
    """System policy file is unreadable or malformed."""
