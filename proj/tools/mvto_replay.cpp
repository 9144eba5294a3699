// Copyright 2026 The MVTO Authors.
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

// mvto-replay: runs a step script under a one-step-at-a-time scheduler and
// prints the recorded history.

#include <iostream>

#include "CLI11.hpp"
#include "mvto/history.hpp"
#include "mvto/replay.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Replay a transaction script deterministically"};
  std::string script;
  std::string dump;
  std::size_t objects = 0;
  std::size_t gc_threshold = 0;
  app.add_option("script", script, "Script file with lines: step <thread> <b|r|w|c|a> [obj] [val]")->required();
  app.add_option("--dump", dump, "Write the recorded history to this file");
  app.add_option("--objects", objects, "Number of t-objects (default: largest referenced)");
  app.add_option("--gc-threshold", gc_threshold, "Versions per object before collection; 0 disables gc");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    mvto::harness::ReplayOptions options;
    if (objects > 0) options.object_count = objects;
    if (gc_threshold > 0) options.gc_threshold = gc_threshold;
    auto steps = mvto::harness::read_script(script, options.object_count);
    auto h = mvto::harness::replay(steps, options);
    std::cout << mvto::history::serialize(h);
    if (!dump.empty()) mvto::history::write_file(dump, h);
  } catch (const std::exception& e) {
    std::cerr << script << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
