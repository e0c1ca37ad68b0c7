/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include "v2i/driver.hpp"
#include "v2i/error.hpp"
#include "v2i/geo.hpp"
#include "v2i/glosa.hpp"
#include "v2i/lane_matcher.hpp"
#include "v2i/messages.hpp"
#include "v2i/rlvw.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/vehicle.hpp"
#include "v2i/harness/builtin.hpp"
#include "v2i/harness/log.hpp"
#include "v2i/harness/obu.hpp"
#include "v2i/harness/runner.hpp"
#include "v2i/harness/scenario.hpp"
#include "v2i/harness/serve.hpp"
#include "v2i/harness/transport.hpp"
#include "v2i/harness/ui.hpp"
