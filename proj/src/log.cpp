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

#include "qotto/log.hpp"

#include <iostream>
#include <mutex>

namespace qotto::log {
namespace {

std::mutex g_mutex;
Level g_level = Level::warning;
std::function<void(Level, std::string_view)> g_sink;

const char* tag(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warning: return "warning";
    case Level::error: return "error";
    case Level::off: break;
  }
  return "";
}

}  // namespace

void set_level(Level level) {
  std::lock_guard lock(g_mutex);
  g_level = level;
}

Level level() {
  std::lock_guard lock(g_mutex);
  return g_level;
}

void set_sink(std::function<void(Level, std::string_view)> sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void write(Level lvl, std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (lvl < g_level || lvl == Level::off) return;
  if (g_sink) {
    g_sink(lvl, message);
    return;
  }
  std::cerr << "[qotto " << tag(lvl) << "] " << message << '\n';
}

}  // namespace qotto::log
