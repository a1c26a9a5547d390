// Copyright 2026 The qisburst Authors.
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

#include <json.hpp>

#include "qis/types.hpp"

namespace qis::detail {

nlohmann::json config_to_json(const SensorConfig& config);
SensorConfig config_from_json(const nlohmann::json& j);
nlohmann::json trajectory_to_json(const MotionTrajectory& trajectory);

}  // namespace qis::detail
