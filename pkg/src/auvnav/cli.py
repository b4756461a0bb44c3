"""Command line entry points: simulate, benchmark, serve, replay.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 config error.
"""

from __future__ import annotations

import csv
import json
import sys

import click

from .config import MissionConfig, load_config
from .errors import AuvNavError, ConfigError
from .goals import PromptContext, submit
from .logs import LogWriter
from .orchestrator import PipelineKind, run_benchmark, run_mission

EXIT_RUNTIME = 1
EXIT_CONFIG = 3

BENCHMARK_COLUMNS = ("pipeline", "seed", "success", "planning_time_s",
                     "node_expansions", "path_length_m", "replans", "steps",
                     "collisions", "unknown_waypoints", "failure_reason")


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_seeds(text: str) -> list[int]:
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:  # "1-20" is a range; "-3" is a bare seed
            head, tail = part[1:].split("-", 1)
            seeds.extend(range(int(part[0] + head), int(tail) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def _parse_pipelines(text: str) -> list[PipelineKind]:
    if text == "all":
        return [PipelineKind.LLM_TASK_MOTION, PipelineKind.LLM_MOTION,
                PipelineKind.LLM_ONLY]
    return [PipelineKind(p.strip()) for p in text.split(",")]


def _resolve_goal(config: MissionConfig):
    reply = submit(config.build_backend(), PromptContext(), config.command)
    if reply.kind == "clarification":
        _fail(EXIT_RUNTIME,
              f"backend asked for clarification: {reply.clarification}")
    if reply.kind == "malformed":
        _fail(EXIT_RUNTIME, "backend reply is not a valid goal")
    return reply.goal


@click.group()
def main():
    """Closed-loop language-to-action planning stack for a simulated AUV."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(), help="Mission config JSON.")
@click.option("--log", "log_path", type=click.Path(),
              help="Override the config's log path.")
def simulate(config_path, log_path):
    """Run one mission; write its JSONL log and print the report."""
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        world = config.build_world()
        goal = _resolve_goal(config)
        out = log_path or config.log_path
        if out:
            with LogWriter(out) as writer:
                report = run_mission(world, goal, config.pipeline,
                                     config.settings, observer=writer.write)
        else:
            report = run_mission(world, goal, config.pipeline, config.settings)
    except AuvNavError as exc:
        _fail(EXIT_RUNTIME, str(exc))
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    if not report.success:
        _fail(EXIT_RUNTIME, f"mission failed: {report.failure_reason}")


@main.command()
@click.option("--config", "config_path", type=click.Path(),
              help="Mission config JSON (optional; defaults used otherwise).")
@click.option("--seeds", default="1-20", show_default=True,
              help="Comma list and/or ranges, e.g. 1-20 or 1,5,9.")
@click.option("--pipelines", default="all", show_default=True,
              help="'all' or a comma list of pipeline names.")
@click.option("--csv", "csv_path", type=click.Path(),
              help="Write per-mission rows as CSV.")
@click.option("--summary", "summary_path", type=click.Path(),
              help="Write the aggregate summary as JSON.")
def benchmark(config_path, seeds, pipelines, csv_path, summary_path):
    """Seed sweep across pipelines; prints the summary table."""
    try:
        config = load_config(config_path) if config_path else MissionConfig(map_seed=1)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        seed_list = _parse_seeds(seeds)
        pipeline_list = _parse_pipelines(pipelines)
    except ValueError as exc:
        _fail(2, f"bad --seeds/--pipelines: {exc}")
    try:
        goal = _resolve_goal(config)
        rows, summary = run_benchmark(
            seed_list, pipeline_list, goal, config.settings, config.map_params,
            progress=lambda row: click.echo(
                f"{row['pipeline']:>16} seed {row['seed']:>3} "
                f"{'ok' if row['success'] else 'FAIL'}", err=True))
    except AuvNavError as exc:
        _fail(EXIT_RUNTIME, str(exc))
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCHMARK_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    if summary_path:
        with open(summary_path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
def serve(config_path, host, port):
    """Start the live WebSocket mission service."""
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(config), host=host, port=port)


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
def replay(log_path, host, port):
    """Serve a recorded mission log over the WebSocket schema."""
    import os
    if not os.path.exists(log_path):
        _fail(EXIT_CONFIG, f"log file not found: {log_path}")
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(MissionConfig(map_seed=1), replay_log=log_path),
                host=host, port=port)


if __name__ == "__main__":
    main()
