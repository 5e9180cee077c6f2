"""Python bindings for the su2e certifier."""

import json as _json

from ._su2e import (  # noqa: F401
    ConfigError,
    Error,
    IndeterminateSign,
    IoError,
    ball_eval,
    certify,
    certify_infinity,
    certify_local,
    classify,
    count_roots,
    digits_to_bits,
    lambda_of,
    report,
    scan,
    sup_bound,
)


def certify_dict(settings=None):
    """certify() with the JSON already decoded."""
    return _json.loads(certify(settings or {}))
