# Copyright 2026 The FAE Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Feature attributions over reference distributions."""

import json

from ._fae import (
    FaeError,
    axiom_audit as _axiom_audit,
    estimate_shapley,
    exact_shapley,
    explain as _explain,
    predict,
    toy_table,
)

__all__ = [
    "FaeError",
    "axiom_audit",
    "estimate_shapley",
    "exact_shapley",
    "explain",
    "predict",
    "toy_table",
]
__version__ = "0.1.0"


def explain(**kwargs):
    """Runs the explain pipeline; returns the report as a dict."""
    return json.loads(_explain(**kwargs))


def axiom_audit(**kwargs):
    """Runs an axiom audit; returns the report as a dict."""
    return json.loads(_axiom_audit(**kwargs))
