# Copyright 2026 The qreduce Authors
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
"""Projective measurement reduction rules and a black-box Lüders test."""

import json

from ._qreduce import (
    Error,
    ParseError,
    _discriminate_json,
    apply_polynomial,
    builtin_names,
    oracle_verdict,
    required_ensemble_size,
    spectrum,
    spin_operator,
)

__all__ = [
    "Error",
    "ParseError",
    "apply_polynomial",
    "builtin_names",
    "discriminate",
    "oracle_verdict",
    "required_ensemble_size",
    "spectrum",
    "spin_operator",
]


def discriminate(builtin=None, scenario=None, *, mode=None, ensemble_size=None,
                 seed=None, target_eigenvalue=None, transcript=False):
    """Run the protocol and return the report as a dict.

    `scenario` may be a dict or a JSON string in the scenario file format.
    """
    if isinstance(scenario, dict):
        scenario = json.dumps(scenario)
    return json.loads(_discriminate_json(builtin, scenario, mode, ensemble_size, seed,
                                         target_eigenvalue, transcript))
