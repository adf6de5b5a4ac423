"""Headless smoke checks for generated desktop plugin trees."""

from .smoke import (
    ArgvMismatch,
    ImportFailure,
    InventoryMismatch,
    SmokeError,
    command_builder_call_sites,
    load_module,
    scripted_states,
    smoke_load,
)

__all__ = [
    "ArgvMismatch",
    "ImportFailure",
    "InventoryMismatch",
    "SmokeError",
    "command_builder_call_sites",
    "load_module",
    "scripted_states",
    "smoke_load",
]
