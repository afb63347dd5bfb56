"""Timed campaigns with an injectable clock."""

from .campaign import (
    DEFAULT_SALT,
    SCHEMA_VERSION,
    CampaignRecord,
    LoadCondition,
    LoadMode,
    RunSample,
    default_kernel,
    run_campaign,
    run_message,
    timed_run,
)
from .clock import ClockSource, MonotonicClock, ScriptedClock
from .env import EnvMetadata, PlatformClass, capture_env, host_id_for
from .load import LoadHandle, start_load, stop_load
from .resources import ResourceMonitor, ResourceSnapshot, sample_resources

__all__ = [
    "DEFAULT_SALT",
    "SCHEMA_VERSION",
    "CampaignRecord",
    "ClockSource",
    "EnvMetadata",
    "LoadCondition",
    "LoadHandle",
    "LoadMode",
    "MonotonicClock",
    "PlatformClass",
    "ResourceMonitor",
    "ResourceSnapshot",
    "RunSample",
    "ScriptedClock",
    "capture_env",
    "default_kernel",
    "host_id_for",
    "run_campaign",
    "run_message",
    "sample_resources",
    "start_load",
    "stop_load",
    "timed_run",
]
