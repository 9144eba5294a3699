# Copyright 2026 The MVTO Authors.
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

"""Multi-version timestamp-ordering STM with an opacity checker."""

from ._mvto import (
    CommitResult,
    Conflict,
    History,
    InputError,
    InvariantViolation,
    ParseError,
    RunReport,
    Stm,
    Transaction,
    TxStatus,
    UsageError,
    Verdict,
    VersionTuple,
    check,
    is_legal,
    is_valid,
    parse_history,
    replay,
    run_stress,
    serialize_history,
    timestamp_order,
)

__all__ = [
    "CommitResult",
    "Conflict",
    "History",
    "InputError",
    "InvariantViolation",
    "ParseError",
    "RunReport",
    "Stm",
    "Transaction",
    "TxStatus",
    "UsageError",
    "Verdict",
    "VersionTuple",
    "check",
    "is_legal",
    "is_valid",
    "parse_history",
    "replay",
    "run_stress",
    "serialize_history",
    "timestamp_order",
]
