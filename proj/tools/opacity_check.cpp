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

// opacity-check: decides opacity of a recorded history.
//
//   opacity-check FILE [--order auto|ts|brute] [--budget N] [--emit-witness]
//
// Exit status: 0 opaque, 1 not opaque, 2 undecided or invalid input.

#include <iostream>

#include "CLI11.hpp"
#include "mvto/checker.hpp"
#include "mvto/history.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decide opacity of a transactional history"};
  std::string path;
  std::string order = "auto";
  std::uint64_t budget = mvto::checker::kDefaultBudget;
  bool emit_witness = false;
  app.add_option("file", path, "History file")->required();
  app.add_option("--order", order, "Version order: auto, ts or brute")
      ->check(CLI::IsMember({"auto", "ts", "brute"}));
  app.add_option("--budget", budget, "Maximum version orders tried by the brute-force search");
  app.add_flag("--emit-witness", emit_witness, "Print the equivalent t-sequential history when opaque");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  mvto::history::History h;
  try {
    h = mvto::history::read_file(path);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }

  namespace ck = mvto::checker;
  ck::Verdict v;
  try {
    if (order == "ts") {
      ck::VersionOrder ts;
      try {
        ts = ck::timestamp_order(h);
      } catch (const ck::InputError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
      }
      v = ck::check_with_order(h, ts);
    } else if (order == "brute") {
      v = ck::check_brute_force(h, budget);
    } else {
      v = ck::check_auto(h, budget);
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }

  std::cout << "verdict: " << ck::to_string(v.outcome) << "\n";
  if (!v.detail.empty()) std::cout << "detail: " << v.detail << "\n";
  if (v.orders_tried > 0) std::cout << "orders tried: " << v.orders_tried << "\n";
  if (!v.order.objects.empty()) std::cout << "version order: " << ck::to_string(v.order) << "\n";
  if (!v.cycle.empty()) {
    std::cout << "cycle:";
    for (auto t : v.cycle) std::cout << " T" << t;
    std::cout << "\n";
  }
  if (v.opaque()) {
    std::cout << "serialization:";
    for (auto t : v.serialization) std::cout << " T" << t;
    std::cout << "\n";
    if (emit_witness) {
      std::cout << "# witness\n" << mvto::history::serialize(v.witness);
    }
  }

  switch (v.outcome) {
    case ck::Outcome::kOpaque:
      return 0;
    case ck::Outcome::kNotOpaque:
      return 1;
    default:
      return 2;
  }
}
