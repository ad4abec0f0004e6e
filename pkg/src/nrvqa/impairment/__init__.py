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

from nrvqa.impairment.channel import (
    DEFAULT_MTU,
    ChannelStats,
    LossKind,
    LossModel,
    Packet,
    PacketStream,
    apply_loss,
    packetize,
    reconstruct,
)
from nrvqa.impairment.compression import DEFAULT_LADDER, CompressionLevel, check_ladder, compress_proxy
from nrvqa.impairment.degrade import degrade, transmit

__all__ = [
    "DEFAULT_MTU",
    "DEFAULT_LADDER",
    "ChannelStats",
    "CompressionLevel",
    "LossKind",
    "LossModel",
    "Packet",
    "PacketStream",
    "apply_loss",
    "check_ladder",
    "compress_proxy",
    "degrade",
    "packetize",
    "reconstruct",
    "transmit",
]
