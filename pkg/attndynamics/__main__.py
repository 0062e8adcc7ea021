import json
import os
import sys

import click

from attndynamics.config_init import set_quiet
from attndynamics.cot.comparators import IdealComparator, ModelComparator
from attndynamics.cot.inference import (
    autoregressive_cot_infer,
    parity_results_frame,
    truncated_cot_infer
)
from attndynamics.diagnostics.phase1 import phase1_report
from attndynamics.diagnostics.phase2 import phase2_report
from attndynamics.diagnostics.separability import separability_report
from attndynamics.diagnostics.symmetry import symmetry_report
from attndynamics.exceptions import AttnDynamicsError, ConfigError
from attndynamics.maxmargin.pooling import pool_dataset
from attndynamics.maxmargin.solver import solve_max_margin
from attndynamics.model.params import load_checkpoint
from attndynamics.sequences.dataset import build_task_dataset
from attndynamics.sequences.sequence import enumerate_sequences
from attndynamics.training.sweep import run_sweep
from attndynamics.training.train_config import (
    SCHEDULES,
    TASKS,
    TrainConfig,
    build_dataset,
    load_config
)
from attndynamics.training.trainer import train
from attndynamics.training.trajectory import read_trajectory
from attndynamics.utils.cli_utils import print_info
from attndynamics.utils.gen_utils import dump_json

REPORT_FILE = 'theory_report.json'
THEORY_CHECK_FAILED = 2


class AttnDynamicsGroup(click.Group):
    """Command group with the exit-code contract of the command line.

    Usage, configuration, validation and I/O errors exit with 1, failed
    theory checks with 2, everything else with 0.
    """

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super(AttnDynamicsGroup, self).main(args=args, prog_name=prog_name,
                                                     complete_var=complete_var,
                                                     standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(1)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except (AttnDynamicsError, OSError) as e:
            click.echo("Error: %s" % e, err=True)
            sys.exit(1)
        sys.exit(rv if isinstance(rv, int) else 0)


def quiet_option(f):
    return click.option('--quiet', is_flag=True,
                        help="Only log warnings and hide the progress bar.")(f)


def config_options(*skip):
    """Per-key overrides of the run configuration, minus the destinations in ``skip``."""
    options = [
        ('config_path', click.option('--config', 'config_path', default=None,
                                     help="JSON run configuration or the name of a shipped preset.")),
        ('task', click.option('--task', type=click.Choice(TASKS), default=None)),
        ('l_max', click.option('--l-max', 'l_max', type=int, default=None)),
        ('l0', click.option('--l0', type=int, default=None)),
        ('eta', click.option('--eta', type=float, default=None)),
        ('lambda_', click.option('--lambda', 'lambda_', type=float, default=None)),
        ('t0', click.option('--t0', type=int, default=None)),
        ('total_steps', click.option('--total-steps', 'total_steps', type=int, default=None)),
        ('schedule', click.option('--schedule', type=click.Choice(SCHEDULES), default=None)),
        ('snapshot_every', click.option('--snapshot-every', 'snapshot_every', type=int,
                                        default=None)),
        ('out_dir', click.option('--out-dir', 'out_dir', default=None)),
    ]

    def decorator(f):
        for name, option in reversed(options):
            if name not in skip:
                f = option(f)
        return f
    return decorator


def resolve_config(config_path, **overrides):
    if config_path is not None:
        return load_config(config_path, **overrides)
    arguments = {'lambda' if k == 'lambda_' else k: v
                 for k, v in overrides.items() if v is not None}
    return TrainConfig.from_dictionary(arguments)


def default_out_dir(config, prefix=''):
    if config.out_dir is not None:
        return config.out_dir
    return os.path.join('runs', prefix + config.task)


@click.group(cls=AttnDynamicsGroup)
def cli():
    pass


@click.command()
def info():
    print_info()


@click.command()
@click.option('--task', type=click.Choice(TASKS), default=None)
@click.option('--l-max', 'l_max', type=int, default=None)
@click.option('--l0', type=int, default=None)
@click.option('--config', 'config_path', default=None,
              help="Take the task and lengths from a run configuration.")
@click.option('--output', default=None, help="CSV file. Defaults to standard output.")
def dataset(task, l_max, l0, config_path, output):
    """Dump a task's training set as CSV."""
    if config_path is not None:
        config = load_config(config_path, task=task, l_max=l_max, l0=l0)
        data = build_dataset(config)
    else:
        if task is None:
            raise ConfigError('task', "missing required key")
        defaults = TrainConfig(task)
        data = build_task_dataset(task, l_max=l_max or defaults.l_max, l0=l0 or defaults.l0)
    if output is None:
        click.echo(data.to_dataframe().to_csv(index=False), nl=False)
    else:
        data.write_csv(output)
        click.echo("Wrote %d %s examples to %s" % (len(data), data.task, output))


@click.command(name='train')
@config_options()
@quiet_option
def train_command(config_path, quiet, **overrides):
    """Train the model and write metrics, checkpoints and the max-margin solution."""
    if quiet:
        set_quiet()
    config = resolve_config(config_path, **overrides)
    config = config.copy(out_dir=default_out_dir(config))
    trajectory = train(config, verbose=not quiet)
    final = trajectory.records[-1]
    click.echo("Trained %s for %d steps: final loss %.6g, %d snapshots in %s"
               % (config.task, config.total_steps, final.loss, len(trajectory.records),
                  config.out_dir))


@click.command()
@click.argument('run_dir', type=click.Path(exists=True, file_okay=False))
@click.option('--phase1', is_flag=True, help="Phase-1 sign and ordering checks at t0.")
@click.option('--phase2', is_flag=True, help="Norm growth, alignment, loss decay and drift.")
@click.option('--separability', is_flag=True, help="Separability of the pooled dataset at t0.")
@click.option('--symmetry', is_flag=True, help="a/b symmetries at every checkpoint.")
@click.option('--all', 'all_checks', is_flag=True, help="Every report (the default).")
@click.option('--t2', type=int, default=None, help="Start of Phase 2. Detected if omitted.")
@click.option('--output', default=None,
              help="Report file. Defaults to %s in the run directory." % REPORT_FILE)
@quiet_option
def verify(run_dir, phase1, phase2, separability, symmetry, all_checks, t2, output, quiet):
    """Check a finished run against the predicted training dynamics.

    Exits with 2 when any requested check fails.
    """
    if quiet:
        set_quiet()
    if all_checks or not any([phase1, phase2, separability, symmetry]):
        phase1 = phase2 = separability = symmetry = True
    trajectory = read_trajectory(run_dir)
    config = trajectory.config

    reports = []
    if phase1:
        reports.append(phase1_report(trajectory))
    if phase2:
        reports.append(phase2_report(trajectory, t2=t2))
    if separability:
        reports.append(separability_report(trajectory.checkpoint_at(config.t0),
                                           build_dataset(config), step=config.t0))
    if symmetry:
        reports.append(symmetry_report(trajectory))

    passed = all(r.passed for r in reports)
    if output is None:
        output = os.path.join(run_dir, REPORT_FILE)
    dump_json({'run_dir': run_dir, 'passed': passed,
               'reports': {r.name: r.to_dictionary() for r in reports}}, output)
    for r in reports:
        click.echo(r.summary())
    if not passed:
        return THEORY_CHECK_FAILED


@click.command()
@click.argument('checkpoint', type=click.Path(exists=True, dir_okay=False))
@config_options()
@click.option('--output', default=None, help="JSON file. Defaults to standard output.")
def maxmargin(checkpoint, config_path, output, **overrides):
    """Max-margin separator of a dataset pooled with a checkpoint's attention."""
    params, metadata = load_checkpoint(checkpoint)
    if config_path is None and overrides.get('task') is None:
        overrides['task'] = metadata['task']
    config = resolve_config(config_path, **overrides)
    pooled = pool_dataset(params, build_dataset(config), step=metadata['step'])
    solution = solve_max_margin(pooled)
    if output is None:
        click.echo(json.dumps(solution.to_dictionary(), indent=2))
    else:
        dump_json(solution.to_dictionary(), output)
        click.echo("Margin %.6g with %d support points, written to %s"
                   % (solution.margin, len(solution.support), output))


def _input_sequences(mode, sequence, length, exhaustive):
    if sequence is not None:
        return [sequence]
    if length is None:
        raise click.UsageError("Give --sequence or --length")
    lengths = [length]
    if exhaustive and mode == 'truncated':
        lengths = range(2, length + 1)
    return [seq for L in lengths for seq in enumerate_sequences(L)]


@click.command(name='cot-infer')
@click.option('--mode', type=click.Choice(['truncated', 'autoregressive']), default='truncated')
@click.option('--checkpoint', type=click.Path(exists=True, dir_okay=False), default=None)
@click.option('--ideal', is_flag=True, help="Use the exact first-equals-last comparator.")
@click.option('--length', type=int, default=None,
              help="Run every sequence of this length.")
@click.option('--sequence', default=None, help="Run a single sequence.")
@click.option('--exhaustive', is_flag=True,
              help="Truncated mode: every length from 2 up to --length.")
@click.option('--l0', type=int, default=None,
              help="Input length of autoregressive CoT. Defaults to the checkpoint's.")
@click.option('--output', default=None, help="CSV file. Defaults to standard output.")
def cot_infer(mode, checkpoint, ideal, length, sequence, exhaustive, l0, output):
    """Compute parity with truncated or autoregressive chain of thought."""
    if ideal == (checkpoint is not None):
        raise click.UsageError("Give exactly one of --checkpoint and --ideal")
    if mode == 'autoregressive' and ideal:
        raise click.UsageError("Autoregressive CoT needs a trained --checkpoint")
    params = None
    if checkpoint is not None:
        params, _ = load_checkpoint(checkpoint)

    if mode == 'truncated':
        comparator = IdealComparator() if ideal else ModelComparator(params)
        runs = [truncated_cot_infer(comparator, seq)
                for seq in _input_sequences(mode, sequence, length, exhaustive)]
    else:
        if l0 is None:
            # d = 2 (2 L_0 - 1)
            l0 = (params.d // 2 + 1) // 2
        if length is None and sequence is None:
            length = l0
        runs = [autoregressive_cot_infer(params, seq, L_0=l0)
                for seq in _input_sequences(mode, sequence, length, exhaustive)]

    frame = parity_results_frame(runs)
    if output is None:
        click.echo(frame.to_csv(index=False), nl=False)
    else:
        frame.to_csv(output, index=False)
    correct = int(frame['correct'].sum())
    click.echo("accuracy: %d/%d (%.1f%%)" % (correct, len(frame), 100.0 * correct / len(frame)))


@click.command()
@config_options('lambda_')
@click.option('--lambda', 'lambdas', default='2,10,18',
              help="Comma-separated scaling values.")
@click.option('--n-jobs', 'n_jobs', type=int, default=1,
              help="Parallel processes. 1 runs the members one after another.")
@quiet_option
def sweep(config_path, lambdas, n_jobs, quiet, **overrides):
    """Train one run per lambda value, each in its own subdirectory."""
    if quiet:
        set_quiet()
    schedule = overrides.pop('schedule')
    try:
        values = [float(v) for v in lambdas.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers, got %r" % lambdas,
                                 param_hint='--lambda')
    config = resolve_config(config_path, **overrides)
    out_dir = default_out_dir(config, prefix='sweep_')
    summary = run_sweep(config, values, out_dir=out_dir, schedule=schedule, n_jobs=n_jobs)
    summary.to_csv(os.path.join(out_dir, 'sweep_summary.csv'), index=False)
    click.echo(summary.to_string(index=False))


cli.add_command(info)
cli.add_command(dataset)
cli.add_command(train_command)
cli.add_command(verify)
cli.add_command(maxmargin)
cli.add_command(cot_infer)
cli.add_command(sweep)


def main():
    cli()


if __name__ == "__main__":
    main()
