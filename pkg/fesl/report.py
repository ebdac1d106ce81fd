import logging
import os

import yaml
from jinja2 import Environment, FileSystemLoader, select_autoescape

from . import consts
from .exceptions import FormatError

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ('dataset', 'method', 'runs', 'accuracy', 'stdev', 'final_avg_loss')


def field(value):
    """Render one row field: '-' for missing values, repr for floats so they re-read exactly."""
    if value is None:
        return consts.ABSENT
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def vector_field(vector):
    if vector is None:
        return consts.ABSENT
    return ' '.join(repr(float(value)) for value in vector.values)


def read_sections(path):
    """Split a text artifact into its YAML header and its tab-separated rows.

    Returns:
        (header dict, [(line number, [fields])])

    Raises:
        FormatError: if the separator is missing or the header is not YAML
    """
    with open(path) as stream:
        lines = stream.read().split('\n')
    try:
        separator = lines.index(consts.HEADER_SEPARATOR)
    except ValueError:
        raise FormatError('missing "{!s}" separator'.format(consts.HEADER_SEPARATOR), path)
    try:
        header = yaml.safe_load('\n'.join(lines[:separator]))
    except yaml.YAMLError as error:
        raise FormatError('bad header ({!s})'.format(error), path)
    if not isinstance(header, dict):
        raise FormatError('header is not a mapping', path)
    rows = [(number, text.split('\t'))
            for number, text in enumerate(lines[separator + 1:], start=separator + 2)
            if text.strip()]
    return header, rows


class Report:
    """Render streams, run records, tables and bound reports from the bundled templates."""

    def __init__(self):
        """Init the class with a Jinja2 environment over the package's templates directory."""
        self._jinja_env = Environment(
            loader=FileSystemLoader(
                os.path.join(os.path.abspath(os.path.dirname(__file__)), consts.PATH_TEMPLATES)),
            autoescape=select_autoescape(['html', ]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True)

    def render(self, template, data):
        return self._jinja_env.get_template(template + '.txt').render(data)

    def render_stream(self, stream):
        schedule = stream.schedule
        header = {
            'name': stream.name,
            'task': stream.task.value,
            'seed': stream.seed,
            't1': schedule.t1,
            't2': schedule.t2,
            'b': schedule.b,
            'd1': schedule.d1,
            'd2': schedule.d2,
        }
        rows = [_join([field(instance.round), instance.phase.value, field(instance.label.value),
                       vector_field(instance.x_old), vector_field(instance.x_new)])
                for instance in stream]
        return self.render('stream', {'header': _dump(header), 'rows': rows})

    def render_record(self, record):
        rows = [_join(field(value) for value in row) for row in record.rows]
        return self.render('record', {'header': _dump(record.header()),
                                      'columns': ', '.join(record.COLUMNS),
                                      'rows': rows})

    def render_table(self, rows):
        """Render aggregate rows: dataset, method, runs, accuracy mean and stdev, final loss."""
        return self.render('table', {'columns': _join(TABLE_COLUMNS),
                                     'rows': [_join(_table_row(row)) for row in rows]})

    def render_trend(self, methods, series):
        """Render per-round average cumulative loss, one column per method."""
        length = min(len(values) for values in series) if series else 0
        rows = [','.join([str(k + 1)] + ['{:.6f}'.format(values[k]) for values in series])
                for k in range(length)]
        columns = ','.join(['round'] + list(methods))
        return self.render('trend', {'columns': columns, 'rows': rows})

    def render_bounds(self, reports):
        return self.render('bounds', {'reports': reports})

    def write_stream(self, stream, path):
        self._write(path, self.render_stream(stream))

    def write_record(self, record, path):
        self._write(path, self.render_record(record))

    def write_table(self, rows, path):
        self._write(path, self.render_table(rows))

    def write_trend(self, methods, series, path):
        self._write(path, self.render_trend(methods, series))

    def _write(self, path, text):
        with open(path, 'w') as stream:
            stream.write(text)
        logger.debug('Wrote {!s}'.format(path))


def _join(fields):
    return '\t'.join(fields)


def _dump(header):
    return yaml.safe_dump(header, default_flow_style=False, sort_keys=False)


def _table_row(row):
    def number(value):
        return consts.ABSENT if value is None else '{:.4f}'.format(value)
    return [row.dataset, row.method, str(row.runs), number(row.accuracy_mean),
            number(row.accuracy_std), number(row.final_loss_mean)]
