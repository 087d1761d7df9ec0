"""
CLI: Command Line Interface for the Kafka partition planner

支援 plan / check / compare / sweep / init-config 命令。
Exit code：0 = 可行方案, 2 = 無可行解, 1 = 使用或設定錯誤。
"""

import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import click
from pydantic import ValidationError

from kafka_partition_planner.config import CONFIG_ENV_VAR, dump_config, load_config_file
from kafka_partition_planner.errors import (
    ConfigError,
    DegenerateRangeError,
    StructuralInfeasibilityError,
)
from kafka_partition_planner.models import (
    NO_FEASIBLE_MESSAGE,
    SWEEP_METHODS,
    MeasuredInputs,
    Method,
    MethodResult,
    Plan,
    PlanMetrics,
    Requirements,
    SweepAxis,
    SweepSpec,
)
from kafka_partition_planner.planning.benchmark import ms_cnfl
from kafka_partition_planner.planning.constraints import evaluate_plan, is_feasible
from kafka_partition_planner.planning.experiments import (
    DEFAULT_FAMILIES,
    DEFAULT_MASTER_SEED,
    DEFAULT_MSCNFL_TRIALS,
    axis_range,
    default_sweep_spec,
    evaluate_method,
    run_sweep,
)
from kafka_partition_planner.planning.solvers import bromax, bromin, lp_relax
from kafka_partition_planner.storage.csv_store import format_value, save_csv, write_csv
from kafka_partition_planner.utils import hashing

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

# (flag, section, field, type)
INPUT_FLAGS = [
    ("--throughput-mbps", "requirements", "target_throughput", float),
    ("--consumers", "requirements", "consumers", int),
    ("--replication-factor", "requirements", "replication_factor", int),
    ("--latency-max-ms", "requirements", "max_replication_latency", float),
    ("--unavailability-max-ms", "requirements", "max_unavailability", float),
    ("--brokers-available", "requirements", "available_brokers", int),
    ("--producer-throughput-mbps", "measured", "producer_throughput_per_partition", float),
    ("--consumer-throughput-mbps", "measured", "consumer_throughput_per_partition", float),
    ("--max-open-file-handles", "measured", "max_open_file_handles", int),
    ("--replication-latency-ms", "measured", "replication_latency_per_partition", float),
    ("--leader-election-ms", "measured", "leader_election_time", float),
]


class PlannerGroup(click.Group):
    """click group：usage error 改為 exit 1，命令回傳值即 exit code"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra
            )
        except click.ClickException as e:
            e.show()
            rv = EXIT_ERROR
        except click.Abort:
            click.echo("Aborted!", err=True)
            rv = EXIT_ERROR

        code = rv if isinstance(rv, int) else EXIT_OK
        if standalone_mode:
            sys.exit(code)
        return code


def input_options(func):
    """共用的 config 與需求/量測 flags"""
    for flag, section, field, flag_type in reversed(INPUT_FLAGS):
        func = click.option(flag, type=flag_type, default=None, help=f"Override {section}.{field}")(func)
    func = click.option(
        '--config', 'config_path', envvar=CONFIG_ENV_VAR, default=None,
        help=f'Config YAML file path (fallback: ${CONFIG_ENV_VAR})'
    )(func)
    return func


def format_option(func):
    return click.option(
        '--format', 'output_format', type=click.Choice(['table', 'json']), default='table',
        help='Output format'
    )(func)


def resolve_inputs(inputs: Dict[str, Any]) -> Tuple[Requirements, MeasuredInputs, Optional[SweepSpec]]:
    """合併 flags、設定檔與預設值"""
    overrides: Dict[str, Dict[str, Any]] = {"measured": {}, "requirements": {}}
    for flag, section, field, _ in INPUT_FLAGS:
        value = inputs.get(flag.lstrip('-').replace('-', '_'))
        if value is not None:
            overrides[section][field] = value

    req, meas, sweep = load_config_file(inputs.get('config_path'), overrides)
    effective = {"requirements": req.model_dump(), "measured": meas.model_dump()}
    logger.info(f"Effective config hash: {hashing.config_hash(effective)}")
    return req, meas, sweep


def _fail(message: str) -> int:
    click.echo(f"Error: {message}", err=True)
    return EXIT_ERROR


def _metrics_payload(plan: Plan, metrics: PlanMetrics) -> Dict[str, Any]:
    return {
        "partitions": plan.partitions,
        "brokers": plan.brokers,
        "feasible": metrics.per_constraint_pass.all_pass,
        "metrics": metrics.model_dump(exclude={"per_constraint_pass"}),
        "constraints": metrics.per_constraint_pass.model_dump(),
    }


def _echo_plan_table(title: str, plan: Plan, metrics: PlanMetrics) -> None:
    click.echo("=" * 60)
    click.echo(title)
    click.echo("=" * 60)
    click.echo(f"Plan: P={plan.partitions} b={plan.brokers}")
    click.echo("")
    click.echo("Metrics:")
    click.echo(f"  replication_latency    {format_value(metrics.replication_latency)} ms")
    click.echo(f"  unavailability         {format_value(metrics.unavailability)} ms")
    click.echo(f"  handles_per_broker     {format_value(metrics.handles_per_broker)}")
    click.echo(f"  partitions_per_broker  {format_value(metrics.partitions_per_broker)}")
    click.echo(f"  producer_capacity      {format_value(metrics.producer_capacity)} MB/s")
    click.echo(f"  consumer_capacity      {format_value(metrics.consumer_capacity)} MB/s")
    click.echo("")
    click.echo("Constraints:")
    for name, ok in metrics.per_constraint_pass.model_dump().items():
        click.echo(f"  {'✓ PASS' if ok else '✗ FAIL'}  {name}")
    click.echo("")
    click.echo("FEASIBLE" if metrics.per_constraint_pass.all_pass else "INFEASIBLE")


@click.group(cls=PlannerGroup)
@click.option('--verbose', is_flag=True, help='Enable DEBUG logging')
def cli(verbose: bool):
    """Kafka topic partition planner CLI"""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@cli.command()
@click.option('--method', type=click.Choice(['bromin', 'bromax', 'lp', 'mscnfl']), default='bromin',
              help='Planning method')
@click.option('--seed', type=int, default=DEFAULT_MASTER_SEED, help='MS-CNFL seed')
@click.option('--mscnfl-include-replicas', is_flag=True, help='Multiply the Confluent bound by r')
@format_option
@input_options
def plan(method: str, seed: int, mscnfl_include_replicas: bool, output_format: str, **inputs) -> int:
    """計算 (P, b) 方案"""
    try:
        req, meas, _ = resolve_inputs(inputs)
    except ConfigError as e:
        return _fail(str(e))

    real = None
    try:
        if method == 'bromin':
            outcome = bromin(req, meas)
        elif method == 'bromax':
            outcome = bromax(req, meas)
        elif method == 'lp':
            real, outcome = lp_relax(req, meas)
        else:
            outcome = ms_cnfl(req, seed, meas, mscnfl_include_replicas)
    except (StructuralInfeasibilityError, DegenerateRangeError) as e:
        if output_format == 'json':
            click.echo(json.dumps({"method": method, "feasible": False, "message": str(e)}, indent=2))
        else:
            click.echo(str(e))
        return EXIT_INFEASIBLE

    if not outcome.found:
        message = outcome.message or NO_FEASIBLE_MESSAGE
        if output_format == 'json':
            click.echo(json.dumps({"method": method, "feasible": False, "message": message}, indent=2))
        else:
            click.echo(message)
        return EXIT_INFEASIBLE

    metrics = evaluate_plan(outcome.plan, req, meas)
    if output_format == 'json':
        payload = {"method": method, **_metrics_payload(outcome.plan, metrics)}
        if real is not None:
            payload["lp_real"] = real.model_dump()
        click.echo(json.dumps(payload, indent=2))
    else:
        _echo_plan_table(f"Kafka Partition Planner - {method}", outcome.plan, metrics)
        if real is not None:
            click.echo(f"LP real optimum: P*={format_value(real.partitions_real)} "
                       f"b*={format_value(real.brokers_real)}")

    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


@cli.command()
@click.option('--partitions', type=click.IntRange(min=1), required=True, help='P')
@click.option('--brokers', type=click.IntRange(min=1), required=True, help='b')
@format_option
@input_options
def check(partitions: int, brokers: int, output_format: str, **inputs) -> int:
    """檢查指定的 (P, b) 是否滿足全部限制式"""
    try:
        req, meas, _ = resolve_inputs(inputs)
    except ConfigError as e:
        return _fail(str(e))

    candidate = Plan(partitions=partitions, brokers=brokers)
    metrics = evaluate_plan(candidate, req, meas)

    if output_format == 'json':
        click.echo(json.dumps(_metrics_payload(candidate, metrics), indent=2))
    else:
        _echo_plan_table("Kafka Partition Planner - check", candidate, metrics)

    return EXIT_OK if is_feasible(candidate, req, meas) else EXIT_INFEASIBLE


def _compare_rows(
    req: Requirements,
    meas: MeasuredInputs,
    trials: int,
    seed: int,
    include_replicas: bool
) -> List[Dict[str, Any]]:
    rows = []
    for method in SWEEP_METHODS:
        result: MethodResult = evaluate_method(
            method, req, meas, mscnfl_trials=trials, seed=seed, include_replicas=include_replicas
        )
        row = result.model_dump(mode="json")
        if method == Method.MSCNFL and result.has_metrics:
            row["method"] = "mscnfl_mean"
        rows.append(row)

    real, outcome = lp_relax(req, meas)
    lp_row: Dict[str, Any] = {"method": "lp_relax_rounded", "feasible": outcome.feasible,
                              "status": "ok" if outcome.found else "real_infeasible",
                              "lp_real": real.model_dump()}
    if outcome.found:
        metrics = evaluate_plan(outcome.plan, req, meas)
        passes = metrics.per_constraint_pass
        lp_row.update(
            partitions=outcome.plan.partitions,
            brokers=outcome.plan.brokers,
            replication_latency=metrics.replication_latency,
            unavailability=metrics.unavailability,
            handles_per_broker=metrics.handles_per_broker,
            partitions_per_broker=metrics.partitions_per_broker,
            latency_violation_rate=float(not passes.latency),
            unavail_violation_rate=float(not passes.unavailability),
            os_violation_rate=float(not passes.os_load),
            violations=outcome.violations,
        )
    rows.append(lp_row)
    return rows


COMPARE_COLUMNS = [
    ("method", 18), ("status", 22), ("partitions", 11), ("brokers", 9),
    ("replication_latency", 12), ("unavailability", 12), ("handles_per_broker", 10),
    ("latency_violation_rate", 9), ("unavail_violation_rate", 9), ("os_violation_rate", 9),
]
COMPARE_TITLES = ["method", "status", "P", "b", "lat_ms", "unav_ms", "handles", "lat_viol", "unav_viol", "os_viol"]


@cli.command()
@click.option('--trials', type=click.IntRange(min=1), default=DEFAULT_MSCNFL_TRIALS, help='MS-CNFL trials')
@click.option('--seed', type=int, default=DEFAULT_MASTER_SEED, help='MS-CNFL master seed')
@click.option('--mscnfl-include-replicas', is_flag=True, help='Multiply the Confluent bound by r')
@format_option
@input_options
def compare(trials: int, seed: int, mscnfl_include_replicas: bool, output_format: str, **inputs) -> int:
    """在同一設定點比較 BroMin、BroMax、MS-CNFL 與 LP rounding"""
    try:
        req, meas, _ = resolve_inputs(inputs)
    except ConfigError as e:
        return _fail(str(e))

    rows = _compare_rows(req, meas, trials, seed, mscnfl_include_replicas)

    if output_format == 'json':
        click.echo(json.dumps(rows, indent=2))
    else:
        click.echo("".join(title.ljust(width) for title, (_, width) in zip(COMPARE_TITLES, COMPARE_COLUMNS)))
        for row in rows:
            cells = []
            for name, width in COMPARE_COLUMNS:
                value = row.get(name)
                cell = value if isinstance(value, str) else format_value(value)
                cells.append((cell or "-").ljust(width))
            click.echo("".join(cells))

    heuristics_found = any(
        row["method"] in ("bromin", "bromax") and row["status"] == "ok" for row in rows
    )
    return EXIT_OK if heuristics_found else EXIT_INFEASIBLE


@cli.command()
@click.option('--axis', type=click.Choice([a.value for a in SweepAxis]), default=None, help='Swept axis')
@click.option('--from', 'start', type=int, default=None, help='First axis value')
@click.option('--to', 'stop', type=int, default=None, help='Last axis value')
@click.option('--step', type=int, default=None, help='Axis step')
@click.option('--method', 'methods', type=click.Choice([m.value for m in SWEEP_METHODS]), multiple=True,
              help='Methods to run (repeatable, default: all)')
@click.option('--trials', type=click.IntRange(min=1), default=None, help='MS-CNFL trials per point')
@click.option('--seed', type=int, default=None, help='Master seed')
@click.option('--mscnfl-include-replicas', is_flag=True, help='Multiply the Confluent bound by r')
@click.option('--preset', is_flag=True, help='Use the fixed c/B/r of the default experiment family')
@click.option('--workers', type=click.IntRange(min=1), default=1, help='Parallel point evaluation')
@click.option('--out', default=None, help='Write CSV to this path instead of stdout')
@input_options
def sweep(
    axis: Optional[str],
    start: Optional[int],
    stop: Optional[int],
    step: Optional[int],
    methods: Tuple[str, ...],
    trials: Optional[int],
    seed: Optional[int],
    mscnfl_include_replicas: bool,
    preset: bool,
    workers: int,
    out: Optional[str],
    **inputs
) -> int:
    """執行參數 sweep 並輸出 CSV"""
    try:
        req, meas, configured = resolve_inputs(inputs)
        spec = build_sweep_spec(
            req, meas, configured,
            axis=axis, start=start, stop=stop, step=step, methods=methods,
            trials=trials, seed=seed, include_replicas=True if mscnfl_include_replicas else None, preset=preset,
        )
    except (ConfigError, ValueError) as e:
        return _fail(str(e))

    result = run_sweep(spec, max_workers=workers)

    if out:
        path = save_csv(result, out)
        click.echo(f"✓ Written {len(result.rows)} rows to {path}", err=True)
    else:
        click.echo(write_csv(result), nl=False)
    return EXIT_OK


def build_sweep_spec(
    req: Requirements,
    meas: MeasuredInputs,
    configured: Optional[SweepSpec],
    axis: Optional[str] = None,
    start: Optional[int] = None,
    stop: Optional[int] = None,
    step: Optional[int] = None,
    methods: Tuple[str, ...] = (),
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    include_replicas: Optional[bool] = None,
    preset: bool = False
) -> SweepSpec:
    """
    組合 SweepSpec

    優先序：flags > 設定檔 sweep 區段 > 預設實驗家族。
    preset 的 c/B/r 屬於內建預設值，不覆寫 req.model_fields_set 中的欄位。

    Raises:
        ValueError: 缺少 axis 或範圍無效
    """
    if axis is None and configured is None:
        raise ValueError("--axis is required (or a sweep section in the config)")
    sweep_axis = SweepAxis(axis) if axis else configured.axis
    from_config = configured if configured is not None and configured.axis == sweep_axis else None

    base_req = req
    if preset:
        # 家族固定值只補上 flag 與設定檔都沒有指定的欄位
        fixed = DEFAULT_FAMILIES[sweep_axis][1]
        data = req.model_dump()
        data.update({k: v for k, v in fixed.items() if k not in req.model_fields_set})
        base_req = Requirements(**data)

    if start is not None or stop is not None:
        if start is None or stop is None:
            raise ValueError("--from and --to must be given together")
        values = axis_range(start, stop, step if step is not None else 1)
    elif from_config is not None:
        values = list(from_config.axis_values)
    else:
        values = list(DEFAULT_FAMILIES[sweep_axis][0])

    if methods:
        method_list = [Method(m) for m in methods]
    elif from_config is not None:
        method_list = list(from_config.methods)
    else:
        method_list = list(SWEEP_METHODS)

    def pick(flag_value, field: str, default):
        if flag_value is not None:
            return flag_value
        if from_config is not None:
            return getattr(from_config, field)
        return default

    try:
        return SweepSpec(
            axis=sweep_axis,
            axis_values=values,
            base_requirements=base_req,
            base_measured=meas,
            methods=method_list,
            mscnfl_trials=pick(trials, "mscnfl_trials", DEFAULT_MSCNFL_TRIALS),
            master_seed=pick(seed, "master_seed", DEFAULT_MASTER_SEED),
            mscnfl_include_replicas=pick(include_replicas, "mscnfl_include_replicas", False),
        )
    except ValidationError as e:
        raise ValueError(f"Invalid sweep: {e}") from e


@cli.command()
@click.option('--out', default='config.example.yaml', help='Output config file path')
def init_config(out: str) -> int:
    """產生範本設定檔"""
    content = dump_config(
        Requirements(),
        MeasuredInputs(),
        default_sweep_spec(SweepAxis.CONSUMERS),
    )
    with open(out, 'w', encoding='utf-8') as f:
        f.write(content)

    click.echo(f"✓ Config file created: {out}")
    click.echo(f"  Edit this file and run: kpp plan --config {out}")
    return EXIT_OK


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
