# Copyright 2026 The qpi Authors
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

"""Inventory policy iteration with exact, HHL and VQLS evaluation steps."""

from ._qpi import (
    ConfigError,
    DisallowedError,
    DivergenceError,
    Error,
    EvaluatorError,
    InfeasibleError,
    InvalidArgument,
    InventoryParams,
    PostSelectionError,
    SingularMatrixError,
    hermitian_embed,
    hhl_solve,
    lcu_decompose,
    load_instance,
    policy_iteration,
    qram,
    rewards,
    system_matrix,
    value_iteration,
    vqls_solve,
)

__all__ = [
    "ConfigError",
    "DisallowedError",
    "DivergenceError",
    "Error",
    "EvaluatorError",
    "InfeasibleError",
    "InvalidArgument",
    "InventoryParams",
    "PostSelectionError",
    "SingularMatrixError",
    "hermitian_embed",
    "hhl_solve",
    "lcu_decompose",
    "load_instance",
    "policy_iteration",
    "qram",
    "rewards",
    "system_matrix",
    "value_iteration",
    "vqls_solve",
]
