# Copyright 2026 The SALSA Workbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the SALSA evaluation workbench.

Pairs, edits and weight schemes are plain dicts in the same shape as the
JSON documents read by the ``salsa`` command-line tool.
"""

import json

from . import _core
from ._core import (
    FINE_TUNE_WORD_LOSS_WEIGHT,
    FitError,
    SalsaError,
    SchemaError,
    UndefinedStatistic,
    classify,
    krippendorff_alpha,
    qe_losses,
    tokenize,
)

__all__ = [
    "FINE_TUNE_WORD_LOSS_WEIGHT",
    "FitError",
    "SalsaError",
    "SchemaError",
    "UndefinedStatistic",
    "classify",
    "fit_weights",
    "krippendorff_alpha",
    "length_factor",
    "qe_losses",
    "run_cli",
    "sentence_score",
    "tokenize",
    "typology",
    "validate_edit",
    "word_labels",
    "word_ratings",
]


def typology():
    return json.loads(_core.typology_json())


def validate_edit(edit, pair):
    return json.loads(_core.validate_edit_json(json.dumps(edit), json.dumps(pair)))


def length_factor(edit, pair):
    return _core.length_factor_json(json.dumps(edit), json.dumps(pair))


def sentence_score(pair, edits, weights=None):
    text = json.dumps(weights) if weights is not None else ""
    return json.loads(_core.sentence_score_json(json.dumps(pair), json.dumps(edits), text))


def fit_weights(samples):
    """samples: iterable of {"pair": ..., "edits": [...], "gold": float}."""
    return json.loads(_core.fit_weights_json(json.dumps(list(samples))))


def word_ratings(pair, edits, side="simplified"):
    return _core.word_ratings_json(json.dumps(pair), json.dumps(edits), side)


def word_labels(pair, edits, side="simplified"):
    return _core.word_labels_json(json.dumps(pair), json.dumps(edits), side)


def run_cli(args):
    """Runs the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
