"""
# ==============================
# jjfm command group
# ==============================
Every subcommand calls the action of the same name in actions.py with a
context (workers, output directory) and a data_dict (config, preset,
action inputs), the way the actions would be called from other code.

Further subcommands can be registered under the entry-point group
"jjcircuits.floquetmarkov.commands".

Exit codes: 0 success, 1 configuration or computation error, 2 some sweep
points failed, 3 oracle validation failed (including an oracle run that
raised).
"""
import json
import logging
import logging.config
import sys

import click
import cligj
from click_plugins import with_plugins
from pkg_resources import iter_entry_points

from . import __version__, actions
from .errors import FloquetMarkovError, ValidationError

LOG_FORMAT = "%(asctime)s %(levelname)-5.5s [%(name)s] %(message)s"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2
EXIT_VALIDATION = 3


def configure_logging(verbosity, log_config=None):
    if log_config:
        logging.config.fileConfig(log_config, disable_existing_loggers=False)
        return
    level = max(10, 30 - 10 * verbosity)
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT)


def run_action(ctx, name, data_dict):
    '''call an action; configuration and computation errors end the command
    with code 1'''
    context = {"workers": ctx.obj.get("workers"),
               "out_dir": ctx.obj.get("out_dir")}
    try:
        return getattr(actions, name)(context, data_dict)
    except (ValidationError, FloquetMarkovError) as error:
        click.echo("Error: {}".format(error), err=True)
        ctx.exit(EXIT_CONFIG)


def _echo(output):
    click.echo(json.dumps(output, indent=2, sort_keys=True, default=str))


config_opt = click.option(
    "--config", "config_path", type=click.Path(exists=True, dir_okay=False),
    default=None, help="JSON config merged over the preset.")
preset_opt = click.option(
    "--preset", type=click.Choice(["paper", "ci"]), default="paper",
    show_default=True, help="Packaged parameter and truncation preset.")


def problem_options(f):
    return preset_opt(config_opt(f))


def _problem(config_path, preset):
    return {"config": config_path, "preset": preset}


@with_plugins(iter_entry_points("jjcircuits.floquetmarkov.commands"))
@click.group()
@cligj.verbose_opt
@cligj.quiet_opt
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Worker processes for sweep points.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default=None, help="Output directory.")
@click.option("--log-config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="logging ini file.")
@click.version_option(version=__version__)
@click.pass_context
def cli(ctx, verbose, quiet, workers, out_dir, log_config):
    """Floquet-Markov steady states of driven transmon circuits."""
    configure_logging(verbose - quiet, log_config)
    ctx.obj = {"workers": workers, "out_dir": out_dir}


@cli.command()
@problem_options
@click.pass_context
def spectrum(ctx, config_path, preset):
    """Static dressed spectrum and confined levels at A_p = 0."""
    _echo(run_action(ctx, "spectrum", _problem(config_path, preset)))


@cli.command()
@problem_options
@click.pass_context
def sweep(ctx, config_path, preset):
    """Steady states over the pump grid."""
    output = run_action(ctx, "sweep", _problem(config_path, preset))
    _echo(output)
    if output["failed"]:
        ctx.exit(EXIT_PARTIAL)


@cli.command("ng-study")
@problem_options
@click.pass_context
def ng_study(ctx, config_path, preset):
    """One unshunted sweep per offset charge."""
    output = run_action(ctx, "ng_study", _problem(config_path, preset))
    _echo(output)
    if output["failed"]:
        ctx.exit(EXIT_PARTIAL)


@cli.command("ratio-study")
@problem_options
@click.pass_context
def ratio_study(ctx, config_path, preset):
    """One shunted sweep per E_L / E_J at fixed E_J + E_L."""
    output = run_action(ctx, "ratio_study", _problem(config_path, preset))
    _echo(output)
    if output["failed"]:
        ctx.exit(EXIT_PARTIAL)


@cli.command()
@problem_options
@click.pass_context
def validate(ctx, config_path, preset):
    """Compare against brute-force Lindblad evolution."""
    output = run_action(ctx, "validate", _problem(config_path, preset))
    _echo(output)
    if not output["passed"]:
        ctx.exit(EXIT_VALIDATION)


@cli.command("emit-figures")
@click.option("--figure", type=click.Choice(["1", "2", "3", "4", "5"]),
              required=True)
@click.option("--reports", "reports_dir", type=click.Path(exists=True,
              file_okay=False), default=None,
              help="Sweep or study output to read (default: --out).")
@click.option("--no-render", is_flag=True, default=False,
              help="Write the tables only.")
@click.pass_context
def emit_figures(ctx, figure, reports_dir, no_render):
    """Figure tables and SVG from sweep records."""
    _echo(run_action(ctx, "emit_figures", {
        "figure": figure,
        "reports_dir": reports_dir,
        "render": not no_render,
    }))
