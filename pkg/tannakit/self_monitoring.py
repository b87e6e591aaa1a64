#   Copyright 2024 The tannakit Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

import enum
from collections import Counter
from datetime import datetime, timezone
from typing import Dict, List

from . import logging


class SelfMonitoring:

    def __init__(self, execution_time: datetime):
        if execution_time.tzinfo is not None:
            execution_time = execution_time.astimezone(timezone.utc)
        self.execution_time = execution_time.replace(microsecond=0)
        self.command: str = ""
        self.rewrite_passes: int = 0
        self.exhausted_reductions: int = 0
        self.visited_words: int = 0
        self.relations_emitted: int = 0
        self.comodule_rows: int = 0
        self.discarded_logs: int = 0
        self.outcomes: List[RunOutcome] = []
        self.computation_time: float = 0

    def record_reduction(self, passes: int, exhausted: bool):
        self.rewrite_passes += passes
        if exhausted:
            self.exhausted_reductions += 1

    def log_self_monitoring_data(self):
        outcomes = Counter(self.outcomes)
        outcomes = ", ".join(f"{outcome.name}:{count}" for outcome, count in outcomes.items())
        logging.info(f"SFM Command: {self.command}")
        logging.info(f"SFM Run outcome: {outcomes}")
        logging.info(f"SFM Number of rewrite passes: {self.rewrite_passes}")
        logging.info(f"SFM Number of reductions that hit the pass cap: {self.exhausted_reductions}")
        logging.info(f"SFM Number of words visited by poset searches: {self.visited_words}")
        logging.info(f"SFM Number of relations emitted: {self.relations_emitted}")
        logging.info(f"SFM Number of comodule table rows: {self.comodule_rows}")
        logging.info(f"SFM Number of throttled log messages: {self.discarded_logs}")
        logging.info(f"SFM Total computation time [s]: {self.computation_time}")

    def prepare_summary(self) -> Dict:
        summary = {
            "time": self.execution_time.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "command": self.command,
            "computation_time": self.computation_time,
            "outcomes": {outcome.name: count for outcome, count in Counter(self.outcomes).items()},
        }
        if self.rewrite_passes:
            summary["rewrite_passes"] = self.rewrite_passes
        if self.exhausted_reductions:
            summary["exhausted_reductions"] = self.exhausted_reductions
        if self.visited_words:
            summary["visited_words"] = self.visited_words
        if self.relations_emitted:
            summary["relations_emitted"] = self.relations_emitted
        if self.comodule_rows:
            summary["comodule_rows"] = self.comodule_rows
        if self.discarded_logs:
            summary["discarded_logs"] = self.discarded_logs
        return summary


# pylint: disable=C0103
class RunOutcome(enum.Enum):
    Ok = 0
    InputError = 1
    MathematicalFailure = 2
