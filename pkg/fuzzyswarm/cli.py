import functools
import logging
import sys

import click

from . import config
from .errors import FuzzySwarmError
from .pipeline_manager import PipelineManager, RunConfig
from .utils import setup_logging

logger = logging.getLogger('fuzzyswarm')


def run_options(func):
    """Flags shared by every pipeline command. Unset flags stay None so lower layers apply."""
    options = [
        click.option('--input', 'input_path', type=click.Path(), help='Series CSV (t,value).'),
        click.option('--out', 'output_dir', type=click.Path(), help=f'Output directory (default {config.OUTPUT_DIR}).'),
        click.option('--config', 'config_file', type=click.Path(), help='YAML run configuration.'),
        click.option('--seed', type=int, help=f'Master seed (fallback: ${config.SEED_ENV_VAR}).'),
        click.option('--particles', type=int, help='Swarm size.'),
        click.option('--inertia', type=float, help='Inertia weight.'),
        click.option('--c1', type=float, help='Cognitive coefficient.'),
        click.option('--c2', type=float, help='Social coefficient.'),
        click.option('--vmax', type=float, help='Velocity limit; velocities stay in [-vmax, vmax].'),
        click.option('--max-iter', 'max_iter', type=int, help='Iteration cap per swarm run.'),
        click.option('--target-se', 'target_se', type=float, help='Stop once the rule SE is at most this.'),
        click.option('--restarts', type=int, help='Independent swarm runs per rule.'),
        click.option('--workers', type=int, help='Processes used to train rules in parallel.'),
        click.option('--emit-intermediate', 'emit_intermediate', is_flag=True, default=None,
                     help='Also write group and rule listings.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _manager(config_file, **flags) -> PipelineManager:
    flags["emit_intermediate"] = flags.get("emit_intermediate") or None
    return PipelineManager(RunConfig.resolve(config_file=config_file, **flags))


def handle_errors(action):
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except FuzzySwarmError as e:
                logger.error(f"{action} failed: {e}")
                click.echo(click.style(f"✗ {action} failed: {e}", fg='red'), err=True)
                sys.exit(e.exit_code)
        return wrapper
    return decorator


def _echo_training_summary(model):
    click.echo(click.style("Rule SE:", fg='cyan', bold=True))
    results = {r.label: r for r in model.results}
    for rule in model.rulebase:
        result = results.get(rule.label)
        if not rule.trained:
            click.echo(f"  • Rule {rule.label}: untrained (no target in series)")
            continue
        marker = "✓" if result is None or result.converged else "✗"
        click.echo(f"  {marker} Rule {rule.label} (order {rule.order}): SE={rule.fitness:.4f}")
    if model.non_converged:
        labels = [r.label for r in model.non_converged]
        click.echo(click.style(f"! Rules not converged: {labels}", fg='yellow'), err=True)


def _echo_report(report):
    click.echo(f"  • Forecast {report.n_evaluated} of {len(report.rows)} points")
    if report.mse is not None:
        click.echo(f"  • MSE={report.mse:.4f}  MAPE={report.mape:.4f}%")


@click.group()
@click.option('-v', '--verbose', is_flag=True, help='Debug logging.')
@click.option('-q', '--quiet', is_flag=True, help='Warnings and errors only.')
def cli(verbose, quiet):
    """fuzzyswarm - fuzzy time series forecasting with swarm-tuned rule weights"""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    setup_logging(level)


@cli.command()
@run_options
@handle_errors("Fuzzify")
def fuzzify(config_file, **flags):
    """Partition the universe and label every observation."""
    outcome = _manager(config_file, **flags).fuzzify()
    click.echo(click.style(
        f"✓ {outcome.partitioning.n_sets} fuzzy sets, {len(outcome.labels)} labels written",
        fg='green',
    ))


@cli.command()
@run_options
@handle_errors("Training")
def train(config_file, **flags):
    """Build the rule base and tune every rule's weights."""
    manager = _manager(config_file, **flags)
    model = manager.train()
    _echo_training_summary(model)
    click.echo(click.style(
        f"✓ Model with {len(model.rulebase)} rules ({len(model.trained_rules)} weighted) saved to "
        f"{manager.store.path(config.MODEL_FILE)}",
        fg='green', bold=True,
    ))


@cli.command()
@run_options
@click.option('--model', 'model_path', type=click.Path(), help='Model file (default <out>/model.yaml).')
@handle_errors("Evaluation")
def evaluate(config_file, model_path, **flags):
    """Forecast in-sample with a saved model and write the reports."""
    report = _manager(config_file, **flags).evaluate(model_path)
    _echo_report(report)
    click.echo(click.style("✓ Evaluation complete", fg='green'))


@cli.command()
@run_options
@handle_errors("Run")
def run(config_file, **flags):
    """fuzzify, train and evaluate in one go."""
    manager = _manager(config_file, **flags)
    model = manager.train()
    _echo_training_summary(model)
    report = manager.evaluate()
    _echo_report(report)
    click.echo(click.style("✓ Run complete!", fg='green', bold=True))


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
