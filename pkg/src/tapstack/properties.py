"""Selection, connection, and message properties.

Applications request transport *services* (reliability, boundaries,
ordering, multistreaming, 0-RTT) qualified by a five-level preference
instead of naming protocols. ``satisfies`` matches such a request against
a protocol's feature set; require/prohibit are hard constraints while
prefer/avoid contribute to a soft score used for candidate ordering.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

__all__ = [
    "PreferenceLevel",
    "SelectionProperty",
    "TransportProperties",
    "new_transport_properties",
    "set_preference",
    "MatchResult",
    "satisfies",
    "CapacityProfile",
    "dscp_for_profile",
    "ConnectionProperties",
    "MessageProperties",
    "SecurityParameters",
]


class PreferenceLevel(enum.Enum):
    REQUIRE = "require"
    PREFER = "prefer"
    IGNORE = "ignore"
    AVOID = "avoid"
    PROHIBIT = "prohibit"


class SelectionProperty(enum.Enum):
    RELIABILITY = "reliability"
    PRESERVE_MSG_BOUNDARIES = "preserve_msg_boundaries"
    PRESERVE_ORDER = "preserve_order"
    PER_MSG_RELIABILITY = "per_msg_reliability"
    MULTISTREAMING = "multistreaming"
    ZERO_RTT = "zero_rtt"


# Feature-matrix column backing each selection property.
FEATURE_ATTR = {
    SelectionProperty.RELIABILITY: "reliable",
    SelectionProperty.PRESERVE_MSG_BOUNDARIES: "preserves_msg_boundaries",
    SelectionProperty.PRESERVE_ORDER: "preserves_order",
    SelectionProperty.PER_MSG_RELIABILITY: "per_msg_reliability",
    SelectionProperty.MULTISTREAMING: "multistreaming",
    SelectionProperty.ZERO_RTT: "zero_rtt",
}

_DEFAULT_PREFS = {
    SelectionProperty.RELIABILITY: PreferenceLevel.REQUIRE,
    SelectionProperty.PRESERVE_ORDER: PreferenceLevel.REQUIRE,
    SelectionProperty.PRESERVE_MSG_BOUNDARIES: PreferenceLevel.PREFER,
    SelectionProperty.PER_MSG_RELIABILITY: PreferenceLevel.IGNORE,
    SelectionProperty.MULTISTREAMING: PreferenceLevel.PREFER,
    SelectionProperty.ZERO_RTT: PreferenceLevel.IGNORE,
}


class TransportProperties:
    """Per-service preference map; every selection property always has an
    entry (construction fills the ordered-reliable-stream defaults).

    The require/prefer/ignore/avoid/prohibit methods mutate in place and
    return self so call sites can chain them; preconnections copy the map
    at construction, after which it is never mutated.
    """

    def __init__(self, prefs: Optional[dict] = None,
                 interface_pref: Optional[tuple[str, PreferenceLevel]] = None):
        self.prefs = dict(_DEFAULT_PREFS)
        if prefs:
            self.prefs.update(prefs)
        self.interface_pref = interface_pref

    def copy(self) -> "TransportProperties":
        return TransportProperties(dict(self.prefs), self.interface_pref)

    def set(self, prop: SelectionProperty,
            level: PreferenceLevel) -> "TransportProperties":
        self.prefs[prop] = level
        return self

    def require(self, prop: SelectionProperty) -> "TransportProperties":
        return self.set(prop, PreferenceLevel.REQUIRE)

    def prefer(self, prop: SelectionProperty) -> "TransportProperties":
        return self.set(prop, PreferenceLevel.PREFER)

    def ignore(self, prop: SelectionProperty) -> "TransportProperties":
        return self.set(prop, PreferenceLevel.IGNORE)

    def avoid(self, prop: SelectionProperty) -> "TransportProperties":
        return self.set(prop, PreferenceLevel.AVOID)

    def prohibit(self, prop: SelectionProperty) -> "TransportProperties":
        return self.set(prop, PreferenceLevel.PROHIBIT)

    def with_interface(self, name: str,
                       level: PreferenceLevel = PreferenceLevel.PREFER
                       ) -> "TransportProperties":
        self.interface_pref = (name, level)
        return self

    def __eq__(self, other) -> bool:
        return (isinstance(other, TransportProperties)
                and self.prefs == other.prefs
                and self.interface_pref == other.interface_pref)

    def __repr__(self) -> str:
        parts = ", ".join(f"{p.value}={l.value}" for p, l in self.prefs.items())
        return f"TransportProperties({parts})"


def new_transport_properties() -> TransportProperties:
    """Fresh properties with the default service request: reliability and
    ordering required, boundaries and multistreaming preferred."""
    return TransportProperties()


def set_preference(tp: TransportProperties, prop: SelectionProperty,
                   level: PreferenceLevel) -> TransportProperties:
    """Pure variant: returns a copy with one preference changed."""
    out = tp.copy()
    out.set(prop, level)
    return out


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one protocol's features against a request."""

    eligible: bool
    score: int = 0
    excluded_by: Optional[SelectionProperty] = None

    @staticmethod
    def excluded(prop: SelectionProperty) -> "MatchResult":
        return MatchResult(eligible=False, excluded_by=prop)

    @staticmethod
    def eligible_with(score: int) -> "MatchResult":
        return MatchResult(eligible=True, score=score)


def satisfies(features, tp: TransportProperties) -> MatchResult:
    """Match a protocol feature set against transport properties.

    Any REQUIRE property missing from ``features``, or any PROHIBIT property
    present, excludes the protocol. Otherwise the protocol is eligible with
    score = (#PREFER present) - (#AVOID present).
    """
    score = 0
    for prop, level in tp.prefs.items():
        present = bool(getattr(features, FEATURE_ATTR[prop]))
        if level is PreferenceLevel.REQUIRE and not present:
            return MatchResult.excluded(prop)
        if level is PreferenceLevel.PROHIBIT and present:
            return MatchResult.excluded(prop)
        if level is PreferenceLevel.PREFER and present:
            score += 1
        elif level is PreferenceLevel.AVOID and present:
            score -= 1
    return MatchResult.eligible_with(score)


class CapacityProfile(enum.Enum):
    DEFAULT = "default"
    SCAVENGER = "scavenger"
    LOW_LATENCY_INTERACTIVE = "low_latency_interactive"
    CONSTANT_RATE_STREAMING = "constant_rate_streaming"


# Conventional code points: best effort, lower effort, EF, AF41.
_DSCP_BY_PROFILE = {
    CapacityProfile.DEFAULT: 0,
    CapacityProfile.SCAVENGER: 1,
    CapacityProfile.LOW_LATENCY_INTERACTIVE: 46,
    CapacityProfile.CONSTANT_RATE_STREAMING: 34,
}


def dscp_for_profile(profile: CapacityProfile) -> int:
    """6-bit DiffServ code point for a capacity profile."""
    return _DSCP_BY_PROFILE[profile]


CAPACITY_PROFILE_KEY = "capacity_profile"


class ConnectionProperties:
    """Mutable per-connection (or per-group) property bag.

    Writes through any member of a connection group land here and are
    immediately visible through every other member.
    """

    def __init__(self, capacity_profile: CapacityProfile = CapacityProfile.DEFAULT):
        self._entries: dict = {CAPACITY_PROFILE_KEY: capacity_profile}

    @property
    def capacity_profile(self) -> CapacityProfile:
        return self._entries[CAPACITY_PROFILE_KEY]

    def set(self, key: str, value) -> None:
        self._entries[key] = value

    def get(self, key: str, default=None):
        return self._entries.get(key, default)

    def keys(self):
        return self._entries.keys()

    def dscp(self) -> int:
        return dscp_for_profile(self.capacity_profile)

    def __repr__(self) -> str:
        return f"ConnectionProperties({self._entries!r})"


@dataclass
class MessageProperties:
    """Per-message requirements; defaults are infinite lifetime, ordered,
    reliable."""

    lifetime_ms: Optional[int] = None
    ordered: bool = True
    reliable: bool = True

    def __post_init__(self):
        if self.lifetime_ms is not None and self.lifetime_ms < 0:
            raise ValueError("lifetime_ms must be non-negative")


@dataclass
class SecurityParameters:
    """Opaque placeholder; carried through but never interpreted."""

    blob: object = None
