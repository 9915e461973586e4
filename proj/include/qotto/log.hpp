// Copyright 2026 The qotto Authors
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

#include <functional>
#include <string_view>

namespace qotto::log {

enum class Level { debug, info, warning, error, off };

// Messages below the threshold are dropped. Default: warning.
void set_level(Level level);
Level level();

// Replaces the sink (stderr by default). Passing an empty function restores
// the default.
void set_sink(std::function<void(Level, std::string_view)> sink);

void write(Level level, std::string_view message);

inline void warning(std::string_view message) { write(Level::warning, message); }
inline void info(std::string_view message) { write(Level::info, message); }

}  // namespace qotto::log
