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

"""Version-tagged logging for tannakit with per-caller throttling of exception, error and warning messages.

Messages go to the "tannakit" logger. Throttled callers are counted so a run can report how much it dropped.
"""

import logging
import os

LOG_THROTTLING_LIMIT_PER_CALLER = 10
LOGGER_NAME = "tannakit"

_logger = logging.getLogger(LOGGER_NAME)


def _read_version_tag() -> str:
    version_file_path = os.path.join(os.path.dirname(os.path.realpath(__file__)), "version.txt")
    try:
        with open(version_file_path, encoding="utf-8") as version_file:
            version = version_file.readline().strip()
    except OSError:
        version = ""
    return f"[{version or 'dev'}] "


_version_tag = _read_version_tag()


class ThrottlingCounter:

    def __init__(self):
        self.counter = {}

    def reset_throttling_counter(self):
        self.counter = {}

    def check_if_caller_exceeded_limit(self, caller) -> bool:
        log_calls_performed = self.counter.get(caller, 0)
        self.counter[caller] = log_calls_performed + 1

        if log_calls_performed == LOG_THROTTLING_LIMIT_PER_CALLER:
            _logger.warning("%sLogging calls from caller '%s' exceeded the throttling limit of %s. "
                            "Further logs from this caller will be discarded",
                            _version_tag, caller, LOG_THROTTLING_LIMIT_PER_CALLER)

        return log_calls_performed >= LOG_THROTTLING_LIMIT_PER_CALLER

    def discarded(self) -> int:
        return sum(max(calls - LOG_THROTTLING_LIMIT_PER_CALLER, 0) for calls in self.counter.values())


throttling_counter = ThrottlingCounter()


def exception(msg, caller: str, *args, **kwargs):
    if throttling_counter.check_if_caller_exceeded_limit(caller):
        return
    _logger.exception(_version_tag + msg, *args, **kwargs)


def error(msg, caller: str, *args, **kwargs):
    if throttling_counter.check_if_caller_exceeded_limit(caller):
        return
    _logger.error(_version_tag + msg, *args, **kwargs)


def warning(msg, caller: str, *args, **kwargs):
    if throttling_counter.check_if_caller_exceeded_limit(caller):
        return
    _logger.warning(_version_tag + msg, *args, **kwargs)


def info(msg, *args, **kwargs):
    _logger.info(_version_tag + msg, *args, **kwargs)


def debug(msg, *args, **kwargs):
    _logger.debug(_version_tag + msg, *args, **kwargs)


def configure(verbose: bool = False):
    """Routes tannakit records to stderr once; repeated calls only change the level."""
    if not _logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        _logger.addHandler(handler)
    _logger.setLevel(logging.DEBUG if verbose else logging.INFO)
