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

from typing import Any, Callable, Dict

from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.quality.oracle_base import BaseOracle


class OracleRegistry:
    """
    Registry for quality oracles.

    The registry is a dictionary that maps oracle names to oracle classes.
    """

    _registry: Dict[str, Callable[..., Any]] = {}

    @classmethod
    def register(cls, name: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
        """
        Decorator to register an oracle.

        The oracle then can be accessed via OracleRegistry.get_oracle(name).

        Parameters
        ----------
        name : str
            The name of the oracle.

        Examples
        --------
            @OracleRegistry.register("vqm")
            class VqmOracle(BaseOracle): ...
        """

        def decorator(oracle_cls: Callable[..., Any]) -> Callable[..., Any]:
            if name not in cls._registry:
                cls._registry[name] = oracle_cls
            else:
                nrvqa_logger.error(f"Oracle '{name}' is already registered.")
            return oracle_cls

        return decorator

    @classmethod
    def get_oracle(cls, name: str, **kwargs: Any) -> BaseOracle:
        """
        Get an oracle from the registry.

        Parameters
        ----------
        name : str
            The name of the oracle.
        **kwargs : Any
            Additional keyword arguments for the oracle.

        Returns
        -------
        BaseOracle
            The oracle instance.
        """
        if name not in cls._registry:
            nrvqa_logger.error(f"Oracle '{name}' is not registered, available: {sorted(cls._registry)}.")
            raise UsageError(f"Oracle '{name}' is not registered.")
        return cls._registry[name](**kwargs)

    @classmethod
    def names(cls) -> list[str]:
        """Names of the registered oracles."""
        return sorted(cls._registry)
