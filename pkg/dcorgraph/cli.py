"""
Command Line Interface
======================

``dcorgraph`` subcommands:

- estimate     distance-correlation matrix, partial correlations and graph(s) from a CSV
- simulate     Erdős–Rényi ground truth and linear synthetic data
- eval         Hamming distance between two edge lists
- bench-det    log-determinant experiment, Pearson vs distance correlation
- transform    prices to standardized log-ratio returns
- recovery     structure recovery sweep over seeds and sample sizes
- init-config  write the YAML configuration template

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Failures print one line ``error code=... type=... detail="..."`` to stderr.

Usage:
    python main.py estimate --input returns.csv --output-dir out --edges 40
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, NamedTuple, Optional, Tuple, Type, TypeVar, Union

import click
from pydantic import BaseModel, Field, ValidationError, model_validator

from . import __version__
from .config import EstimatorConfig, Settings, create_config_template, get_settings
from .core.estimator import GraphEstimator
from .core.thresholding import Adjacency
from .data.pipeline import (
    log_ratio_transform,
    parse_selection,
    read_csv,
    select_columns,
    select_price_columns,
    standardize,
)
from .data.writers import (
    read_edge_list,
    write_dataset_csv,
    write_dot,
    write_edge_list,
    write_json,
    write_matrix_csv,
    write_table_csv,
)
from .simulation.experiments import (
    DETERMINANT_COLUMNS,
    RECOVERY_COLUMNS,
    determinant_experiment,
    recovery_sweep,
    summarize_recovery,
)
from .simulation.random_graphs import (
    ErdosRenyiSpec,
    LinearDataSpec,
    erdos_renyi,
    hamming_distance,
    random_baseline_hamming,
    sample_linear_data,
)
from .utils.exceptions import EXIT_NUMERICAL, EXIT_USAGE, ConfigurationError, GraphLearnError
from .utils.logging_setup import WarningCollector, setup_logging

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)

THRESHOLD_MATRIX_ALIASES = {"partial": "partial", "P": "partial", "dcor": "dcor", "R": "dcor"}


class RunConfig(BaseModel):
    """Fully resolved flags of one subcommand run"""
    subcommand: Literal["estimate", "simulate", "eval", "bench-det", "transform", "recovery"]
    input: Optional[str] = None
    output_dir: str
    tp: Optional[float] = Field(default=None, ge=0)
    edges: Optional[int] = Field(default=None, ge=0)
    thresholds: Optional[Union[Literal["auto"], List[float]]] = None
    threshold_matrix: Optional[Literal["partial", "dcor"]] = None
    ridge_step: Optional[float] = None
    ridge_max: Optional[float] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    nodes: Optional[int] = None
    avg_degree: Optional[float] = None
    samples: Optional[List[int]] = None
    runs: Optional[int] = Field(default=None, ge=1)
    noise_sd: Optional[float] = None
    coef_range: Optional[Tuple[float, float]] = None
    noise: Optional[Literal["gaussian", "uniform"]] = None
    dims: Optional[List[int]] = None
    reps: Optional[int] = Field(default=None, ge=1)
    distribution: Optional[Literal["gaussian", "uniform", "exponential", "all"]] = None
    header: Optional[bool] = None
    delimiter: Optional[str] = None
    select: Optional[str] = None
    truth: Optional[str] = None
    estimate: Optional[str] = None
    jobs: int = 1

    @model_validator(mode='after')
    def validate_subcommand(self):
        if self.subcommand == "estimate":
            chosen = [v is not None for v in (self.tp, self.edges, self.thresholds)]
            if sum(chosen) != 1:
                raise ValueError("estimate needs exactly one of --tp, --edges or --thresholds")
        if self.subcommand in ("simulate", "bench-det", "recovery") and self.seed is None:
            raise ValueError(f"{self.subcommand} requires --seed")
        if self.subcommand in ("estimate", "transform") and self.input is None:
            raise ValueError(f"{self.subcommand} requires --input")
        return self

    def replay_dict(self) -> Dict[str, Any]:
        """Command-line flags that determine the outputs; the output location and job count never do"""
        return self.model_dump(mode="json", exclude={"output_dir", "jobs"}, exclude_none=True)


class AppContext(NamedTuple):
    settings: Settings
    jobs: int


class GraphLearnGroup(click.Group):
    """
    Click group mapping failures to the tool's exit codes.

    GraphLearnError subclasses exit with their own code, click usage errors
    with 1 and anything unexpected with 3.
    """

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GraphLearnError as e:
            logger.debug(f"Run failed: {e.detail}")
            click.echo(e.one_line(), err=True)
            ctx.exit(e.exit_code)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException):
            raise
        except Exception as e:
            logger.exception("Unexpected failure")
            detail = " ".join(str(e).split()).replace('"', "'")
            click.echo(f'error code=INTERNAL_ERROR type={type(e).__name__} detail="{detail}"', err=True)
            ctx.exit(EXIT_NUMERICAL)


def _validated(model: Type[Model], **values: Any) -> Model:
    """Build a pydantic model, reporting the first validation error as a usage error"""
    try:
        return model(**values)
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        message = error["msg"]
        raise ConfigurationError(f"{location}: {message}" if location else message)


def _parse_float_list(text: str, flag: str) -> List[float]:
    try:
        return [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(f"{flag} expects a comma separated list of numbers, got '{text}'")


def _parse_int_list(text: str, flag: str) -> List[int]:
    """Comma list of integers or an inclusive range ``a..b``"""
    try:
        if ".." in text:
            start, _, stop = text.partition("..")
            return list(range(int(start), int(stop) + 1))
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(f"{flag} expects integers as 'a..b' or 'a,b,c', got '{text}'")


def _parse_thresholds(text: Optional[str]) -> Union[None, str, List[float]]:
    if text is None:
        return None
    if text.strip().lower() == "auto":
        return "auto"
    return _parse_float_list(text, "--thresholds")


def _coef_range(text: Optional[str], settings: Settings) -> Tuple[float, float]:
    if text is None:
        return settings.simulation.coef_low, settings.simulation.coef_high
    values = _parse_float_list(text, "--coef-range")
    if len(values) != 2:
        raise ConfigurationError(f"--coef-range expects 'low,high', got '{text}'")
    return values[0], values[1]


def _estimator_config(app: AppContext, run: RunConfig) -> EstimatorConfig:
    values = app.settings.estimator.model_dump()
    values["n_jobs"] = app.jobs
    for field in ("ridge_step", "ridge_max", "threshold_matrix"):
        if getattr(run, field) is not None:
            values[field] = getattr(run, field)
    return _validated(EstimatorConfig, **values)


def _resolved_settings(app: AppContext, run: RunConfig) -> Dict[str, Any]:
    """Config-file settings as applied to this run, flag overrides included"""
    return {
        "estimator": _estimator_config(app, run).model_dump(mode="json", exclude={"n_jobs"}),
        "simulation": app.settings.simulation.model_dump(mode="json"),
        "data": app.settings.data.model_dump(mode="json"),
    }


def _summary(app: AppContext, run: RunConfig, collector: WarningCollector, results: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "tool": app.settings.app_name,
        "version": __version__,
        "config": {**run.replay_dict(), "settings": _resolved_settings(app, run)},
        "warnings": sorted(set(collector.messages)),
        "results": results,
    }


def _output_dir(run: RunConfig) -> Path:
    path = Path(run.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


@click.group(cls=GraphLearnGroup)
@click.option("--config", "config_path", default="config.yaml", show_default=True,
              help="YAML file with run defaults")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                                               case_sensitive=False),
              default=None, help="Override the configured log level")
@click.option("--jobs", type=int, default=None, help="Worker threads (-1 for all cores); never changes results")
@click.version_option(__version__, prog_name="dcorgraph")
@click.pass_context
def cli(ctx: click.Context, config_path: str, log_level: Optional[str], jobs: Optional[int]) -> None:
    """Graph structure learning with distance correlation."""
    settings = get_settings(config_path)

    logging_config = settings.logging
    if log_level is not None:
        logging_config = logging_config.model_copy(update={"level": log_level.upper()})
    setup_logging(logging_config)

    jobs = settings.estimator.n_jobs if jobs is None else jobs
    if jobs == 0 or jobs < -1:
        raise ConfigurationError(f"--jobs must be a positive integer or -1, got {jobs}")

    ctx.obj = AppContext(settings=settings, jobs=jobs)
    logger.debug(f"Loaded settings from {config_path}")


@cli.command()
@click.option("--input", "input_path", help="CSV file, rows are observations")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.option("--tp", type=float, help="Keep pairs whose |score| exceeds this value")
@click.option("--edges", type=int, help="Keep exactly this many pairs")
@click.option("--thresholds", help="'auto' or a strictly decreasing comma list")
@click.option("--threshold-matrix", type=click.Choice(sorted(THRESHOLD_MATRIX_ALIASES)),
              help="Score matrix: partial (P) or dcor (R)")
@click.option("--ridge-step", type=float, help="First ridge level for a singular R")
@click.option("--ridge-max", type=float, help="Largest ridge level")
@click.option("--header/--no-header", default=None, help="First row holds column names")
@click.option("--delimiter", help="Field delimiter")
@click.option("--select", help="Columns as START:STOP or a comma list of names/indices")
@click.pass_obj
def estimate(app: AppContext, input_path, output_dir, tp, edges, thresholds, threshold_matrix,
             ridge_step, ridge_max, header, delimiter, select) -> None:
    """Estimate a graph from a dataset."""
    settings = app.settings
    run = _validated(
        RunConfig,
        subcommand="estimate",
        input=input_path,
        output_dir=output_dir,
        tp=tp,
        edges=edges,
        thresholds=_parse_thresholds(thresholds),
        threshold_matrix=THRESHOLD_MATRIX_ALIASES.get(threshold_matrix, settings.estimator.threshold_matrix),
        ridge_step=ridge_step if ridge_step is not None else settings.estimator.ridge_step,
        ridge_max=ridge_max if ridge_max is not None else settings.estimator.ridge_max,
        header=settings.data.has_header if header is None else header,
        delimiter=delimiter or settings.data.delimiter,
        select=select,
        jobs=app.jobs,
    )
    estimator = GraphEstimator(_estimator_config(app, run))

    with WarningCollector() as collector:
        data = read_csv(run.input, has_header=run.header, delimiter=run.delimiter)
        if run.select:
            data = select_columns(data, parse_selection(run.select, data.column_names))

        result = estimator.estimate(data, tp=run.tp, edges=run.edges, thresholds=run.thresholds)

        out = _output_dir(run)
        write_matrix_csv(out / "dcor_matrix.csv", result.dcor.entries)
        write_matrix_csv(out / "partial_correlations.csv", result.partial.entries)

        results: Dict[str, Any] = {
            "n": data.n,
            "p": data.p,
            "labels": list(data.labels()),
            "ridge_applied": result.ridge_applied,
            "threshold_matrix": result.threshold_source,
        }

        if result.graph is not None:
            write_edge_list(out / "graph.edgelist", result.graph)
            write_dot(out / "graph.dot", result.graph, data.labels())
            results.update(tp=result.tp, edges_requested=run.edges, edge_count=result.graph.edge_count)
        else:
            path_dir = out / "path"
            path_dir.mkdir(exist_ok=True)
            rows = []
            for index, (threshold, graph) in enumerate(zip(result.path.thresholds, result.path.graphs)):
                write_edge_list(path_dir / f"graph_{index:02d}.edgelist", graph)
                rows.append({"index": index, "threshold": threshold, "edge_count": graph.edge_count})
            write_table_csv(out / "path.csv", rows, ["index", "threshold", "edge_count"])
            results.update(thresholds=list(result.path.thresholds), edge_counts=list(result.path.edge_counts))

        write_json(out / "estimate.json", _summary(app, run, collector, results))

    logger.info(f"Estimate written to {out}")


@cli.command()
@click.option("--nodes", type=int, required=True, help="Node count p")
@click.option("--avg-degree", type=float, required=True, help="Average degree c (edge probability c/p)")
@click.option("--samples", type=int, required=True, help="Sample count n")
@click.option("--seed", type=int, help="Master seed for the graph and the data")
@click.option("--noise-sd", type=float, help="White-noise standard deviation")
@click.option("--coef-range", help="Coefficient magnitude bounds 'low,high'")
@click.option("--noise", type=click.Choice(["gaussian", "uniform"]), help="White-noise distribution")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.pass_obj
def simulate(app: AppContext, nodes, avg_degree, samples, seed, noise_sd, coef_range, noise, output_dir) -> None:
    """Generate a ground-truth graph and data along its edges."""
    simulation = app.settings.simulation
    run = _validated(
        RunConfig,
        subcommand="simulate",
        output_dir=output_dir,
        seed=seed,
        nodes=nodes,
        avg_degree=avg_degree,
        samples=[samples],
        noise_sd=noise_sd if noise_sd is not None else simulation.noise_sd,
        coef_range=_coef_range(coef_range, app.settings),
        noise=noise or simulation.noise,
        jobs=app.jobs,
    )
    er_spec = _validated(ErdosRenyiSpec, p=run.nodes, c=run.avg_degree, seed=run.seed)
    data_spec = _validated(
        LinearDataSpec,
        n=samples,
        coef_low=run.coef_range[0],
        coef_high=run.coef_range[1],
        noise_sd=run.noise_sd,
        noise=run.noise,
        seed=run.seed,
    )

    with WarningCollector() as collector:
        truth = erdos_renyi(er_spec)
        data = sample_linear_data(truth, data_spec)

        out = _output_dir(run)
        write_dataset_csv(out / f"data_seed{run.seed}.csv", data)
        write_edge_list(out / f"truth_seed{run.seed}.edgelist", truth, {"seed": run.seed})

        results = {
            "n": data.n,
            "p": truth.p,
            "edge_probability": er_spec.edge_probability,
            "edge_count": truth.edge_count,
        }
        write_json(out / f"simulate_seed{run.seed}.json", _summary(app, run, collector, results))

    logger.info(f"Simulated {truth} with n={data.n} into {out}")


@cli.command(name="eval")
@click.option("--truth", required=True, help="Reference edge list")
@click.option("--estimate", "estimate_path", required=True, help="Estimated edge list")
@click.option("--nodes", type=int, help="Node count when the files carry no '# nodes:' header")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.pass_obj
def evaluate(app: AppContext, truth, estimate_path, nodes, output_dir) -> None:
    """Hamming distance between two graphs."""
    run = _validated(
        RunConfig, subcommand="eval", truth=truth, estimate=estimate_path,
        nodes=nodes, output_dir=output_dir, jobs=app.jobs,
    )

    with WarningCollector() as collector:
        a = read_edge_list(run.truth, run.nodes)
        b = read_edge_list(run.estimate, run.nodes)
        distance = hamming_distance(a, b)

        disagreeing = Adjacency(a.edges != b.edges).edge_list()
        results = {
            "p": a.p,
            "hamming": distance,
            "truth_edge_count": a.edge_count,
            "estimate_edge_count": b.edge_count,
            "disagreeing_pairs": [list(pair) for pair in disagreeing],
            "baseline_hamming": random_baseline_hamming(a.p, a.edge_count),
        }
        out = _output_dir(run)
        write_json(out / "eval.json", _summary(app, run, collector, results))

    click.echo(f"hamming={distance}")


@cli.command(name="bench-det")
@click.option("--dims", default="2..100", show_default=True, help="Dimensions as 'a..b' or 'a,b,c'")
@click.option("--samples", type=int, default=50, show_default=True, help="Observations per dataset")
@click.option("--reps", type=int, default=3, show_default=True, help="Datasets per dimension")
@click.option("--seed", type=int, help="Master seed")
@click.option("--distribution", type=click.Choice(["gaussian", "uniform", "exponential", "all"]),
              help="Column distribution")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.pass_obj
def bench_det(app: AppContext, dims, samples, reps, seed, distribution, output_dir) -> None:
    """Log-determinants of Pearson and distance-correlation matrices."""
    run = _validated(
        RunConfig,
        subcommand="bench-det",
        output_dir=output_dir,
        dims=_parse_int_list(dims, "--dims"),
        samples=[samples],
        reps=reps,
        seed=seed,
        distribution=distribution or app.settings.simulation.det_distribution,
        jobs=app.jobs,
    )

    with WarningCollector() as collector:
        rows = determinant_experiment(
            run.dims, samples, run.reps, run.seed, distribution=run.distribution, n_jobs=app.jobs
        )

        out = _output_dir(run)
        records = [row._asdict() for row in rows]
        write_table_csv(out / "determinants.csv", records, DETERMINANT_COLUMNS)
        write_json(out / "bench_det.json", _summary(app, run, collector, {"rows": records}))

    logger.info(f"Determinant table with {len(rows)} rows written to {out}")


@cli.command()
@click.option("--input", "input_path", help="Price CSV, rows are time points")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.option("--header/--no-header", default=None, help="First row holds tickers")
@click.option("--delimiter", help="Field delimiter")
@click.option("--select", help="Columns as START:STOP or a comma list of names/indices")
@click.pass_obj
def transform(app: AppContext, input_path, output_dir, header, delimiter, select) -> None:
    """Convert prices to standardized log-ratio returns."""
    settings = app.settings
    run = _validated(
        RunConfig,
        subcommand="transform",
        input=input_path,
        output_dir=output_dir,
        header=settings.data.has_header if header is None else header,
        delimiter=delimiter or settings.data.delimiter,
        select=select,
        jobs=app.jobs,
    )

    with WarningCollector() as collector:
        prices = read_csv(run.input, has_header=run.header, delimiter=run.delimiter, kind="prices")
        if run.select:
            prices = select_price_columns(prices, parse_selection(run.select, prices.column_names))

        returns = standardize(log_ratio_transform(prices))

        out = _output_dir(run)
        write_dataset_csv(out / "returns.csv", returns)
        results = {"time_points": prices.T, "rows": returns.n, "p": returns.p}
        write_json(out / "transform.json", _summary(app, run, collector, results))

    logger.info(f"Transformed {prices} into {returns.n} return rows")


@cli.command()
@click.option("--nodes", type=int, required=True, help="Node count p")
@click.option("--avg-degree", type=float, required=True, help="Average degree c")
@click.option("--samples", required=True, help="Sample sizes as 'a..b' or 'a,b,c'")
@click.option("--seed", type=int, help="First seed")
@click.option("--runs", type=int, default=20, show_default=True, help="Seeds per sample size, counting up from --seed")
@click.option("--noise-sd", type=float, help="White-noise standard deviation")
@click.option("--coef-range", help="Coefficient magnitude bounds 'low,high'")
@click.option("--noise", type=click.Choice(["gaussian", "uniform"]), help="White-noise distribution")
@click.option("--threshold-matrix", type=click.Choice(sorted(THRESHOLD_MATRIX_ALIASES)),
              help="Score matrix: partial (P) or dcor (R)")
@click.option("--output-dir", required=True, help="Directory for the output files")
@click.pass_obj
def recovery(app: AppContext, nodes, avg_degree, samples, seed, runs, noise_sd, coef_range, noise,
             threshold_matrix, output_dir) -> None:
    """Structure recovery at equal edge count over seeds and sample sizes."""
    settings = app.settings
    run = _validated(
        RunConfig,
        subcommand="recovery",
        output_dir=output_dir,
        seed=seed,
        runs=runs,
        nodes=nodes,
        avg_degree=avg_degree,
        samples=_parse_int_list(samples, "--samples"),
        noise_sd=noise_sd if noise_sd is not None else settings.simulation.noise_sd,
        coef_range=_coef_range(coef_range, settings),
        noise=noise or settings.simulation.noise,
        threshold_matrix=THRESHOLD_MATRIX_ALIASES.get(threshold_matrix, settings.estimator.threshold_matrix),
        jobs=app.jobs,
    )
    er_spec = _validated(ErdosRenyiSpec, p=run.nodes, c=run.avg_degree, seed=run.seed)
    data_spec = _validated(
        LinearDataSpec,
        n=min(run.samples) if run.samples else 2,
        coef_low=run.coef_range[0],
        coef_high=run.coef_range[1],
        noise_sd=run.noise_sd,
        noise=run.noise,
        seed=run.seed,
    )
    seeds = [run.seed + offset for offset in range(run.runs)]

    with WarningCollector() as collector:
        reports = recovery_sweep(
            er_spec, data_spec, run.samples, seeds, config=_estimator_config(app, run), n_jobs=app.jobs
        )

        out = _output_dir(run)
        write_table_csv(out / "recovery.csv", [r.row() for r in reports], RECOVERY_COLUMNS)
        summary = [s._asdict() for s in summarize_recovery(reports)]
        write_json(out / "recovery.json", _summary(app, run, collector, {"summary": summary}))

    logger.info(f"Recovery sweep with {len(reports)} runs written to {out}")


@cli.command(name="init-config")
@click.option("--output", default="config.yaml.template", show_default=True, help="Template path")
def init_config(output) -> None:
    """Write the configuration template."""
    create_config_template(output)
    click.echo(f"Configuration template written to {output}")


if __name__ == "__main__":
    cli()
