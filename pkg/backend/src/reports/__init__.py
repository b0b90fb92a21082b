"""Scenario configuration, execution and report output"""
from .config import ScenarioConfig, load_config
from .models import Metric, RunReport
from .output import emit_plot_data, write_report
from .scenarios import run_scenario

__all__ = ["ScenarioConfig", "load_config", "Metric", "RunReport", "emit_plot_data", "write_report", "run_scenario"]
