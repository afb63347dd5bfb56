from datetime import datetime, timezone

import pytest

from powbench.kernels import PowConfig, PowOutput, cost_model
from powbench.measurement import CampaignRecord, EnvMetadata, LoadCondition, PlatformClass, RunSample


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    path = tmp_path / "powbench-config.json"
    monkeypatch.setenv("POWBENCH_CONFIG", str(path))
    return path


def stub_kernel(clock, seconds):
    """Kernel that only moves a ScriptedClock forward by *seconds* per call."""

    def kernel(config, message, salt):
        clock.advance(seconds)
        return PowOutput(b"stub", cost_model(config))

    return kernel


def make_env(os_name="Linux", platform_class=None, cpu="Test CPU"):
    return EnvMetadata(
        os_name=os_name,
        os_version="6.1",
        cpu_model=cpu,
        logical_cores=8,
        host_id="0123456789abcdef",
        captured_at=datetime(2024, 5, 1, 12, 0, 0, 123456, tzinfo=timezone.utc),
        declared_class=platform_class,
    )


def make_record(durations, *, config=None, load=None, os_name="Linux", platform_class=None, label=None):
    config = config or PowConfig.argon2i(1, 10, 1024, label=label)
    cost = cost_model(config)
    samples, offset = [], 0.0
    for d in durations:
        samples.append(RunSample(d, offset, cost, True))
        offset += d
    return CampaignRecord(
        config=config,
        env=make_env(os_name, platform_class),
        load=load or LoadCondition.idle(),
        budget_s=offset + 1.0,
        samples=tuple(samples),
        campaign_id="fixture",
    )


__all__ = ["PlatformClass", "make_env", "make_record", "stub_kernel"]
