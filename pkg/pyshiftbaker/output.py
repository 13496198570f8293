# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import csv
import io
import json
import logging
import os
import tempfile


def atomic_write_text(path, text):
    """Write-then-rename so readers never see a partial file."""
    path = os.fspath(path)
    # one temp file per writer, so repeated targets may be written concurrently
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or '.',
                               prefix=os.path.basename(path) + '.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logging.info(f'Wrote {path}')


def json_text(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + '\n'


def atomic_write_json(path, obj):
    atomic_write_text(path, json_text(obj))


def csv_text(header, rows, config):
    """CSV with a '#' comment line recording ``config`` and a header row."""
    buf = io.StringIO()
    buf.write('# ' + json.dumps(config, sort_keys=True) + '\n')
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return buf.getvalue()
