"""Planner benchmark demo.

Runs the shipped 10-prompt suite (5 structured, 5 free-form) through the
rule-based planner and, if fixtures are available, through the mocked
completion-service planner, printing the PSR / EXESR / latency table.

Run:  python3 demos/planner_benchmark.py
"""

import os
import tempfile
from pathlib import Path

from aqua.config import MissionConfig, default_config
from aqua.mission import _planner_context, format_benchmark_table, run_benchmark
from aqua.planners import write_suite_fixtures
from aqua.vehicle import load_env

SUITE = Path(__file__).resolve().parents[1] / "src" / "aqua" / "data" / "benchmark_suite.yaml"


def main():
    print("rule-based planner:")
    print(format_benchmark_table(run_benchmark(SUITE)))

    # The mocked completion backend answers every prompt from canned fixtures,
    # so it parses all ten commands, including the free-form ones.
    cfg = default_config()
    with tempfile.TemporaryDirectory() as fixtures:
        write_suite_fixtures(_planner_context(load_env(cfg.env_path)), fixtures)
        os.environ["AQUA_LLM_MOCK"] = fixtures
        mock_cfg = MissionConfig(env_path=cfg.env_path, domain_path=cfg.domain_path,
                                 planner="llm-mock")
        print("\nmocked completion-service planner:")
        print(format_benchmark_table(run_benchmark(SUITE, mock_cfg)))
        del os.environ["AQUA_LLM_MOCK"]


if __name__ == "__main__":
    main()
