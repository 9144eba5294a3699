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

#include "mvto/replay.hpp"

#include <charconv>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvto/recorder.hpp"
#include "mvto/stm.hpp"

namespace mvto::harness {

using history::EventKind;
using history::ParseError;

namespace {

template <typename T>
bool to_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<ScriptStep> parse_script(std::string_view text, std::optional<std::size_t> object_count) {
  std::vector<ScriptStep> steps;
  std::map<std::uint32_t, history::TxPhase> open;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = fields(line);
    if (tok.empty()) continue;
    if (tok[0] != "step") throw ParseError(line_no, "expected 'step'");
    if (tok.size() < 3 || tok.size() > 5) throw ParseError(line_no, "expected: step <thread> <op> [obj] [val]");

    ScriptStep s;
    s.line = line_no;
    if (!to_number(tok[1], s.thread)) throw ParseError(line_no, "bad thread '" + std::string(tok[1]) + "'");
    if (tok[2].size() != 1 || std::string_view("brwca").find(tok[2][0]) == std::string_view::npos) {
      throw ParseError(line_no, "bad operation '" + std::string(tok[2]) + "'");
    }
    s.op = static_cast<EventKind>(tok[2][0]);
    const bool operand = s.op == EventKind::kRead || s.op == EventKind::kWrite;
    if (!operand && tok.size() != 3) throw ParseError(line_no, "begin/commit/abort take no operands");
    if (operand) {
      if (tok.size() < 4) throw ParseError(line_no, "missing object");
      std::string_view obj = tok[3];
      if (obj.size() > 1 && obj.front() == 'x') obj.remove_prefix(1);
      if (!to_number(obj, s.object) || s.object == 0) {
        throw ParseError(line_no, "bad object '" + std::string(tok[3]) + "'");
      }
      if (object_count && s.object > *object_count) {
        throw ParseError(line_no, "undefined object '" + std::string(tok[3]) + "'");
      }
      if (tok.size() == 5) {
        Value v = 0;
        if (!to_number(tok[4], v)) throw ParseError(line_no, "bad value '" + std::string(tok[4]) + "'");
        s.value = v;
      } else if (s.op == EventKind::kWrite) {
        throw ParseError(line_no, "write without a value");
      }
    }

    auto it = open.find(s.thread);
    if (s.op == EventKind::kBegin) {
      if (it != open.end()) throw ParseError(line_no, "thread " + std::to_string(s.thread) + " already has an open transaction");
      open[s.thread] = history::TxPhase::kStarted;
    } else {
      if (it == open.end()) throw ParseError(line_no, "undefined transaction: thread " + std::to_string(s.thread) + " has none open");
      if (auto err = history::advance_phase(it->second, s.op)) throw ParseError(line_no, *err);
      if (s.op == EventKind::kCommit || s.op == EventKind::kAbort) open.erase(it);
    }
    steps.push_back(s);
  }
  return steps;
}

std::vector<ScriptStep> read_script(const std::string& path, std::optional<std::size_t> object_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str(), object_count);
}

history::History replay(const std::vector<ScriptStep>& steps, const ReplayOptions& options) {
  if (steps.empty()) return {};
  std::size_t objects = 0;
  for (const ScriptStep& s : steps) objects = std::max<std::size_t>(objects, s.object);
  if (options.object_count) {
    if (*options.object_count < objects) throw UsageError("script uses more objects than configured");
    objects = *options.object_count;
  }
  objects = std::max<std::size_t>(objects, 1);

  history::Recorder recorder;
  StmConfig config{objects, std::nullopt};
  if (options.gc_threshold) config.gc = gc::GcConfig{*options.gc_threshold};
  Stm stm(config, &recorder);

  std::map<std::uint32_t, std::vector<std::size_t>> per_thread;
  for (std::size_t i = 0; i < steps.size(); ++i) per_thread[steps[i].thread].push_back(i);

  std::mutex mu;
  std::condition_variable cv;
  std::size_t turn = 0;
  std::exception_ptr failure;

  auto worker = [&](const std::vector<std::size_t>& mine) {
    std::optional<Transaction> tx;
    for (std::size_t idx : mine) {
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return turn == idx; });
      }
      const ScriptStep& s = steps[idx];
      try {
        if (!failure) {
          switch (s.op) {
            case EventKind::kBegin:
              tx.emplace(stm.begin());
              break;
            case EventKind::kRead:
              stm.read(*tx, s.object);
              break;
            case EventKind::kWrite:
              stm.write(*tx, s.object, *s.value);
              break;
            case EventKind::kCommit:
              stm.try_commit(*tx);
              tx.reset();
              break;
            case EventKind::kAbort:
              stm.try_abort(*tx);
              tx.reset();
              break;
          }
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      std::lock_guard lock(mu);
      ++turn;
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  for (const auto& [thread, mine] : per_thread) threads.emplace_back(worker, std::cref(mine));
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return recorder.history();
}

}  // namespace mvto::harness
