"""Well-known relay keys and fail-safe command arbitration."""

from __future__ import annotations

from typing import Mapping

from gazebot.debounce import COMMAND_LABELS, Command

DEFAULT_SPEED = 128


class WellKnownKeys:
    SIGNALS = "Signals"  # classifier-derived command
    SPEED = "Speed"  # 0-255 as a decimal string
    OVERRIDE = "Override"  # "0" / "1"
    MANUAL_SIGNAL = "ManualSignal"  # attendant command, wins while Override=1
    TELEMETRY_PREFIX = "telemetry/"


def select_command(view: Mapping[str, str]) -> tuple[Command, int, list[str]]:
    """Arbitrate the drive command from a store snapshot.

    Override="1" switches the command source from Signals to
    ManualSignal. Speed clamps into 0..255 (default 128 when unset).
    Any unparseable field degrades to (Stop, 0) with a diagnostic --
    garbage must never move the bot.
    """
    diagnostics: list[str] = []

    override_raw = view.get(WellKnownKeys.OVERRIDE, "0")
    if override_raw not in ("0", "1"):
        return Command.STOP, 0, [f"unparseable Override {override_raw!r}"]
    source = WellKnownKeys.MANUAL_SIGNAL if override_raw == "1" else WellKnownKeys.SIGNALS

    cmd_raw = view.get(source)
    if cmd_raw is None:
        cmd = Command.STOP  # nothing commanded yet
    elif cmd_raw in COMMAND_LABELS:
        cmd = Command.from_label(cmd_raw)
    else:
        return Command.STOP, 0, [f"unparseable {source} {cmd_raw!r}"]

    speed_raw = view.get(WellKnownKeys.SPEED)
    if speed_raw is None:
        speed = DEFAULT_SPEED
    else:
        try:
            speed = int(speed_raw, 10)
        except ValueError:
            return Command.STOP, 0, [f"unparseable Speed {speed_raw!r}"]
        if not 0 <= speed <= 255:
            diagnostics.append(f"Speed {speed} outside 0..255, clamped")
            speed = min(255, max(0, speed))

    return cmd, speed, diagnostics
