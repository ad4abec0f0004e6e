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

from typing import Any

from ConfigSpace import CategoricalHyperparameter, ConfigurationSpace
from ConfigSpace.hyperparameters.hyperparameter import Hyperparameter

from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger

WHITEBOX = "whitebox"
BLACKBOX = "blackbox"

LEARNER_GROUPS = [WHITEBOX, BLACKBOX]


class Boolean(CategoricalHyperparameter):
    """
    Represents a boolean hyperparameter with choices True and False.

    Parameters
    ----------
    name : str
        The name of the hyperparameter.
    default : bool
        The default value of the hyperparameter.
    meta : Any
        The metadata for the hyperparameter.
    """

    def __init__(self, name: str, default: bool = False, meta: Any = dict()) -> None:
        super().__init__(name, choices=[True, False], default_value=default, meta=meta)

    def __new__(cls, name: str, default: bool = False, meta: Any = None) -> CategoricalHyperparameter:  # type: ignore
        """Create a new boolean hyperparameter."""
        return CategoricalHyperparameter(name, choices=[True, False], default_value=default, meta=meta)


class LearnerConfigurationSpace:
    """
    One ConfigSpace configuration space per learner, filled as the learners are discovered.

    Unlike a joint space with conditional hyperparameters, learners never combine, so every learner keeps its own
    unprefixed space.
    """

    def __init__(self, seed: int = 1234) -> None:
        self.seed = seed
        self.spaces: dict[str, ConfigurationSpace] = dict()
        self.groups: dict[str, str] = dict()

    def register_learner(self, name: str, hyperparameters: list[Hyperparameter], algorithm_group: str) -> None:
        """
        Register a learner and its hyperparameters.

        Parameters
        ----------
        name : str
            The name of the learner, e.g. "ERT-LSB".
        hyperparameters : list[Hyperparameter]
            The hyperparameters, defaults set to the reference settings.
        algorithm_group : str
            The learner group, white box or black box.
        """
        if algorithm_group not in LEARNER_GROUPS:
            raise UsageError(f"Unknown learner group '{algorithm_group}'.")
        # instantiating a learner twice must not re-add its hyperparameters
        if name in self.spaces:
            return
        space = ConfigurationSpace(name=name, seed=self.seed)
        if hyperparameters:
            space.add(*hyperparameters)
        self.spaces[name] = space
        self.groups[name] = algorithm_group

    def __contains__(self, name: object) -> bool:
        """Whether a learner is registered."""
        return name in self.spaces

    def __getitem__(self, name: str) -> ConfigurationSpace:
        """
        Get the configuration space of a learner.

        Parameters
        ----------
        name : str
            The name of the learner.

        Returns
        -------
        ConfigurationSpace
            The learner's space.
        """
        if name not in self.spaces:
            nrvqa_logger.error(f"Unknown learner '{name}', available: {self.names()}.")
            raise UsageError(f"Unknown learner '{name}'.")
        return self.spaces[name]

    def names(self) -> list[str]:
        """Names of the registered learners."""
        return list(self.spaces)


LEARNER_SPACE = LearnerConfigurationSpace()

# reporting order of the learners
LEARNER_ORDER = ("LR", "RT", "ERT-LSB", "ERT-BR", "EDT-AB", "GPR", "SVR", "FNN", "CNN")
