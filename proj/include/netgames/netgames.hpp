// Copyright 2026 The netgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "netgames/common.hpp"
#include "netgames/dynamics.hpp"
#include "netgames/equilibrium.hpp"
#include "netgames/game.hpp"
#include "netgames/linalg.hpp"
#include "netgames/metrics.hpp"
#include "netgames/network_models.hpp"
#include "netgames/pricing.hpp"
#include "netgames/rng.hpp"
