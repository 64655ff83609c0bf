"""Scenario configuration, run orchestration, and the CLI front end."""

from .config import ScenarioConfig, load_config, parse_config
from .runner import RunOutput, build_problem, check_manifest, run_scenario
from .verify import CheckResult, SUITES, run_suites
