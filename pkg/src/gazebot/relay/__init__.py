"""Networked key-value relay: store, TCP server, client, browser gateway."""

from gazebot.relay.commands import WellKnownKeys, select_command
from gazebot.relay.store import KeyValueStore, RelayRecord

__all__ = ["KeyValueStore", "RelayRecord", "WellKnownKeys", "select_command"]
