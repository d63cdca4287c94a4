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

from typing import List, Optional

import numpy as np


def make_generator(seed: Optional[int] = None) -> np.random.Generator:
    """
    Helper function for reproducible behavior: every random draw in `pseudowarp` goes through a generator built
    here from an explicit seed, never through the global `numpy.random` state.

    Args:
        seed (`int`, *optional*):
            The seed to use. `None` draws fresh entropy from the OS.
    """
    return np.random.default_rng(seed)


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    """
    Returns `count` statistically independent generators derived from `seed`. The i-th generator only depends on
    `(seed, i)`, so work split across threads stays reproducible whatever the number of workers.
    """
    if count < 0:
        raise ValueError(f"`count` must be non-negative, got {count}.")
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
