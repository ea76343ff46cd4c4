/*
 * Copyright 2026 The aicarbon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "aicarbon/accounting.hpp"
#include "aicarbon/core.hpp"
#include "aicarbon/edge_fl.hpp"
#include "aicarbon/io/config.hpp"
#include "aicarbon/io/csv.hpp"
#include "aicarbon/io/model_card.hpp"
#include "aicarbon/io/report.hpp"
#include "aicarbon/io/runlog.hpp"
#include "aicarbon/ledger.hpp"
#include "aicarbon/lifecycle.hpp"
#include "aicarbon/scenario.hpp"
#include "aicarbon/sched_sim.hpp"
