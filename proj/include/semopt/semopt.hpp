// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The semopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMOPT_SEMOPT_HPP
#define SEMOPT_SEMOPT_HPP

#include "semopt/bench.hpp"
#include "semopt/comp_load.hpp"
#include "semopt/config.hpp"
#include "semopt/convex_core.hpp"
#include "semopt/errors.hpp"
#include "semopt/orchestrator.hpp"
#include "semopt/random_instances.hpp"
#include "semopt/ratio_opt.hpp"
#include "semopt/rsma_rates.hpp"
#include "semopt/sca_beamforming.hpp"
#include "semopt/scenario.hpp"
#include "semopt/validation.hpp"

#endif // SEMOPT_SEMOPT_HPP
