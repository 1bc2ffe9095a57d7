// Copyright 2026 The procauction Authors.
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

// Umbrella header.

#pragma once

#include "procauction/descending.hpp"
#include "procauction/errors.hpp"
#include "procauction/exact_optimizer.hpp"
#include "procauction/harness.hpp"
#include "procauction/instances.hpp"
#include "procauction/json_io.hpp"
#include "procauction/online.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/sealed_bid.hpp"
#include "procauction/selection.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"
#include "procauction/verification.hpp"
