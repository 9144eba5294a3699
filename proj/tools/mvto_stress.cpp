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

// mvto-stress: randomized multi-threaded workload with opacity checking.

#include <iostream>

#include "CLI11.hpp"
#include "mvto/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stress the MVTO STM and verify the recorded history"};
  mvto::harness::WorkloadConfig config;
  std::string reads = "1..4";
  std::string writes = "1..3";
  std::size_t gc_threshold = 8;
  std::string dump;
  double watchdog_s = 30.0;
  app.add_option("--threads", config.threads, "Worker threads");
  app.add_option("--txs", config.transactions_per_thread, "Transactions per thread");
  app.add_option("--objects", config.objects, "Number of t-objects");
  app.add_option("--reads", reads, "Reads per transaction, A..B");
  app.add_option("--writes", writes, "Writes per update transaction, A..B");
  app.add_option("--ro-frac", config.read_only_fraction, "Fraction of read-only transactions");
  app.add_option("--gc-threshold", gc_threshold, "Versions per object before collection; 0 disables gc");
  app.add_option("--seed", config.seed, "Workload seed");
  app.add_option("--dump", dump, "Write the recorded history to this file");
  app.add_option("--watchdog", watchdog_s, "Liveness budget in seconds");
  bool no_yield = false;
  app.add_flag("--no-yield", no_yield, "Do not yield between operations");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  mvto::harness::RunReport report;
  try {
    config.reads = mvto::harness::parse_range(reads);
    config.writes = mvto::harness::parse_range(writes);
    config.yield_between_ops = !no_yield;
    config.gc_threshold = gc_threshold == 0 ? std::nullopt : std::optional<std::size_t>(gc_threshold);
    if (!dump.empty()) config.dump_path = dump;
    config.watchdog = std::chrono::milliseconds(static_cast<long long>(watchdog_s * 1000));
    report = mvto::harness::run(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << report.to_text() << "\n" << report.to_key_values();
  if (report.watchdog_expired) {
    // Workers are stuck; do not wait for them.
    std::cout.flush();
    std::quick_exit(1);
  }
  return report.ok() ? 0 : 1;
}
