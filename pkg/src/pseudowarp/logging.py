# Copyright 2023 The pseudowarp Authors. All rights reserved.
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

import logging
import os
import threading

from .utils.constants import LOG_LEVEL_ENV_VAR


class ThreadAwareAdapter(logging.LoggerAdapter):
    """
    Logger adapter for code that may run inside the validation thread pool.

    Records are dropped when they come from a pool worker unless the call passes `main_thread_only=False`; the
    per-chunk progress of `run_validation` does, everything else (build decisions, CLI messages) logs from the main
    thread only.
    """

    @staticmethod
    def _should_log(main_thread_only):
        return not main_thread_only or threading.current_thread() is threading.main_thread()

    def log(self, level, msg, *args, **kwargs):
        "Logs `msg` unless it comes from a worker thread and `main_thread_only` (default `True`) is set."
        main_thread_only = kwargs.pop("main_thread_only", True)
        if self.isEnabledFor(level) and self._should_log(main_thread_only):
            msg, kwargs = self.process(msg, kwargs)
            self.logger.log(level, msg, *args, **kwargs)


def get_logger(name: str, log_level: str = None):
    """
    Returns a [`ThreadAwareAdapter`] around the `logging.Logger` named `name`.

    Construction and classification steps log at `DEBUG`, validation progress at `INFO`. Setting
    `PSEUDOWARP_LOG_LEVEL=debug` shows every choice made while building a decomposition.

    Args:
        name (`str`):
            The name for the logger, such as `__name__`
        log_level (`str`, *optional*):
            The log level to use. If not passed, will default to the `PSEUDOWARP_LOG_LEVEL` environment variable,
            and the logger level is left alone if that is not set either.

    Example:

    ```python
    >>> from pseudowarp.logging import get_logger

    >>> logger = get_logger("pseudowarp.validation", log_level="INFO")
    >>> logger.info("Checked 50 samples", main_thread_only=False)  # also emitted from pool workers
    >>> logger.debug("Classified sphere")  # main thread only, hidden at INFO
    ```
    """
    if log_level is None:
        log_level = os.environ.get(LOG_LEVEL_ENV_VAR, None)
    logger = logging.getLogger(name)
    if log_level is not None:
        logger.setLevel(log_level.upper())
    return ThreadAwareAdapter(logger, {})
