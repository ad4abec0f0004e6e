# Copyright 2025 - Pruna AI GmbH. All rights reserved.
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

import importlib
import inspect
import os
import pkgutil
from typing import Any, Dict

import nrvqa.algorithms as algorithms
from nrvqa.config.learner_space import LEARNER_GROUPS, LEARNER_ORDER
from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger

# NRVQA_ALGORITHMS holds instances of all available learners for each learner group
NRVQA_ALGORITHMS: Dict[str, Dict[str, Any]] = dict()

for algorithm_group in LEARNER_GROUPS:
    NRVQA_ALGORITHMS[algorithm_group] = dict()

# iterate through all learner groups
for finder, algorithm_types, ispkg in pkgutil.iter_modules(algorithms.__path__):
    if ispkg:
        # iterate through all learners within a group
        for _finder, sub_name, _ispkg in pkgutil.iter_modules([os.path.join(algorithms.__path__[0], algorithm_types)]):
            module = importlib.import_module(f"{algorithms.__name__}.{algorithm_types}.{sub_name}")
            # discover the learner classes in the file
            for obj_name, obj in inspect.getmembers(module, inspect.isclass):
                # learners are grandchildren of NrvqaLearnerBase, the group base classes are its children
                class_names = [cls.__name__ for cls in obj.__mro__]
                if "NrvqaLearnerBase" in class_names and class_names.index("NrvqaLearnerBase") > 1:
                    # instantiation registers the hyperparameters
                    NRVQA_ALGORITHMS[obj.algorithm_group][obj.algorithm_name] = obj()


def get_learner(name: str) -> Any:
    """
    Look up a learner by name.

    Parameters
    ----------
    name : str
        The learner name, e.g. "SVR".

    Returns
    -------
    Any
        The learner instance.
    """
    for group in NRVQA_ALGORITHMS.values():
        if name in group:
            return group[name]
    nrvqa_logger.error(f"Unknown learner '{name}', available: {learner_names()}.")
    raise UsageError(f"Unknown learner '{name}'.")


def learner_names() -> list[str]:
    """Names of all learners in reporting order."""
    names = [name for group in LEARNER_GROUPS for name in NRVQA_ALGORITHMS[group]]
    return sorted(names, key=lambda name: LEARNER_ORDER.index(name) if name in LEARNER_ORDER else len(LEARNER_ORDER))
