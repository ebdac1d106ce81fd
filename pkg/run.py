#! /usr/bin/env python
"""Build feature evolvable streams, run the learners over them and check their loss bounds."""

import argparse
import logging
import logging.config
import os
import sys
from collections import OrderedDict

import yaml

from fesl import consts
from fesl import Config, FeslError, InvalidInputError, MethodKind, Report, RunConfig, Task
from fesl.harness import read_records, record_path, run_many
from fesl.metrics import aggregate, check_bounds, check_expected_bound, trend
from fesl.streams import (Source, build_cycle, default_schedule, dump_stream, generate_batch,
                          load_batch, load_stream, load_two_view, synthesize_second_space)

logger = logging.getLogger(__name__)

ROOT = os.path.dirname(os.path.realpath(__file__))


def configure_logging(env):
    logging_config_path = '{!s}/{!s}/logging_{!s}.yml'.format(ROOT, consts.PATH_CONFIG, env)
    with open(logging_config_path) as stream:
        try:
            config_file = yaml.safe_load(stream)
        except yaml.YAMLError as e:
            print(e, file=sys.stderr)
            return

    # File handlers write under the repository's logs directory wherever we are run from
    for handler in config_file.get('handlers', {}).values():
        if 'filename' in handler:
            handler['filename'] = os.path.join(ROOT, handler['filename'])
            os.makedirs(os.path.dirname(handler['filename']), exist_ok=True)
    logging.config.dictConfig(config_file)
    logger.setLevel('DEBUG')


def synth(args, config):
    """Load (or generate) a batch, attach the second feature space and dump one cycle."""
    task = Task(args.task)
    if args.generate:
        n, d = args.generate
        features_old, labels, spec = generate_batch(n, d, args.seed, task)
        features_new = synthesize_second_space(features_old, args.d2, args.seed)
    elif args.input_new:
        features_old, features_new, labels, spec = load_two_view(args.input, args.input_new,
                                                                 args.format, task)
    else:
        features_old, labels, spec = load_batch(args.input, args.format, args.dim, task)
        features_new = synthesize_second_space(features_old, args.d2, args.seed)

    d1, d2 = features_old.shape[1], features_new.shape[1]
    if max(d1, d2) > config.stream.max_dim:
        raise InvalidInputError('Dimensions {:d}/{:d} exceed max_dim={:d}'.format(
            d1, d2, config.stream.max_dim))
    source = Source.TWO_VIEW if args.input_new else spec.source
    schedule = default_schedule(spec.n, d1, d2, source, task, config.stream)
    stream = build_cycle(features_old, features_new, labels, schedule, args.seed, task, spec.name)
    dump_stream(stream, args.out)
    logger.info('Wrote {!r} to {!s}'.format(stream, args.out))
    return consts.EXIT_OK


def run(args, config):
    """Run every requested method for seeds 0..k-1 and write one record per run."""
    stream = load_stream(args.stream)
    methods = MethodKind.parse_list(args.methods)
    seeds = range(args.seeds if args.seeds is not None else config.harness.seeds)
    clip = None if args.clip is None else args.clip == 'on'
    run_config = RunConfig.from_config(config, 0, stream.name, step_scale=args.c,
                                       radius=args.radius, ridge=args.ridge, clip_losses=clip,
                                       delta=args.delta)
    workers = args.workers or config.harness.workers
    records = run_many(stream, methods, seeds, run_config, workers)

    os.makedirs(args.out, exist_ok=True)
    for record in records:
        record.write(record_path(args.out, record))
    logger.info('Wrote {:d} records to {!s}'.format(len(records), args.out))
    return consts.EXIT_OK


def report(args, config):
    """Aggregate the records of a directory into a table and one trend file per dataset."""
    records = read_records(args.input)
    if not records:
        raise InvalidInputError('No records found in {!s}'.format(args.input))
    out = args.out or os.path.join(args.input, consts.FILE_TABLE)
    writer = Report()
    writer.write_table(aggregate(records), out)

    by_dataset = OrderedDict()
    for record in records:
        by_dataset.setdefault(record.dataset, []).append(record)
    for dataset, group in by_dataset.items():
        methods, series = trend(group)
        path = os.path.join(os.path.dirname(os.path.abspath(out)),
                            '{!s}_{!s}'.format(dataset or 'stream', consts.FILE_TREND))
        writer.write_trend(methods, series, path)
    logger.info('Wrote the table to {!s}'.format(out))
    return consts.EXIT_OK


def check(args, config):
    """Print the bound report; exit 1 when a run breaks a bound that holds on every run."""
    records = [record for record in read_records(args.input)
               if record.method in (MethodKind.FESLC, MethodKind.FESLS)]
    clipped = [record for record in records if record.config.clip_losses]
    if len(clipped) < len(records):
        logger.warning('Skipping {:d} records run without clipping'.format(
            len(records) - len(clipped)))
    reports = [check_bounds(record) for record in clipped]

    by_dataset = OrderedDict()
    for record in clipped:
        if record.method is MethodKind.FESLS:
            by_dataset.setdefault(record.dataset, []).append(record)
    reports.extend(check_expected_bound(group) for group in by_dataset.values())

    print(Report().render_bounds(reports), end='')
    violations = [r for r in reports if not r.passed and not r.expected]
    for violation in violations:
        logger.error('Bound violated by {!s} seed {!s} on {!r}'.format(
            violation.method, violation.seed, violation.dataset))
    return consts.EXIT_BOUND_VIOLATION if violations else consts.EXIT_OK


def pair(text):
    """Parse 'rows,dims' for --generate."""
    try:
        n, d = (int(value) for value in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected rows,dims, got {!r}'.format(text))
    return n, d


def build_parser():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument('--env', help='environment (e.g. development)', default=None)
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    parser_synth = commands.add_parser('synth', help='build a stream from a batch dataset')
    source = parser_synth.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', help='batch dataset (the old space for two-view data)')
    source.add_argument('--generate', type=pair, metavar='ROWS,DIMS',
                        help='generate a seeded linear dataset instead of reading one')
    parser_synth.add_argument('--input-new', help='second view of the same samples')
    parser_synth.add_argument('--format', choices=(consts.FORMAT_CSV, consts.FORMAT_SVM),
                              default=consts.FORMAT_CSV)
    parser_synth.add_argument('--task', default=consts.TASK_CLASSIFICATION,
                              choices=(consts.TASK_CLASSIFICATION, consts.TASK_REGRESSION))
    parser_synth.add_argument('--dim', type=int, help='dimensionality of svm files')
    parser_synth.add_argument('--d2', type=int, help='dimensionality of the synthesized space')
    parser_synth.add_argument('--seed', type=int, default=0)
    parser_synth.add_argument('--out', required=True)
    parser_synth.set_defaults(handler=synth)

    parser_run = commands.add_parser('run', help='run methods over a stream')
    parser_run.add_argument('--stream', required=True)
    parser_run.add_argument('--methods', default=','.join(method.value for method in MethodKind))
    parser_run.add_argument('--seeds', type=int, help='number of seeds, run as 0..k-1')
    parser_run.add_argument('--c', type=float, help='step-size constant')
    parser_run.add_argument('--radius', type=float)
    parser_run.add_argument('--ridge', type=float)
    parser_run.add_argument('--clip', choices=('on', 'off'))
    parser_run.add_argument('--delta', type=float)
    parser_run.add_argument('--workers', type=int)
    parser_run.add_argument('--out', required=True)
    parser_run.set_defaults(handler=run)

    parser_report = commands.add_parser('report', help='aggregate a directory of records')
    parser_report.add_argument('--in', dest='input', required=True)
    parser_report.add_argument('--out')
    parser_report.set_defaults(handler=report)

    parser_check = commands.add_parser('check', help='check the loss bounds of FESL records')
    parser_check.add_argument('--in', dest='input', required=True)
    parser_check.set_defaults(handler=check)
    return parser


def main(argv=None):
    # Extract arguments from the CLI
    parser = build_parser()
    args = parser.parse_args(argv)

    env = args.env or os.getenv(consts.ENV_VAR_APP, default=consts.ENV_DEV)

    # Get the config for this environment
    config = Config.for_env(env, ROOT)

    configure_logging(env)
    logger.info('Using the {!s} environment'.format(env))

    if args.command == 'synth' and not args.input_new and not args.d2:
        parser.error('--d2 is required unless --input-new is given')
    try:
        return args.handler(args, config)
    except (FeslError, OSError) as e:
        logger.error('{!s}: {!s}'.format(type(e).__name__, e))
        return consts.EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
