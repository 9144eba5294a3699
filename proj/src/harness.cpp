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

#include "mvto/harness.hpp"

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "mvto/stm.hpp"

namespace mvto::harness {

Range parse_range(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint32_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad range '" + text + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(s));
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::uint32_t n = number(text);
    return {n, n};
  }
  Range r{number(text.substr(0, dots)), number(text.substr(dots + 2))};
  if (r.min > r.max) throw UsageError("empty range '" + text + "'");
  return r;
}

void validate(const WorkloadConfig& c) {
  if (c.threads == 0 || c.transactions_per_thread == 0 || c.objects == 0) {
    throw UsageError("threads, transactions and objects must be positive");
  }
  if (c.objects > 0xFFFF) throw UsageError("at most 65535 objects");
  if (c.reads.min > c.reads.max || c.writes.min > c.writes.max) throw UsageError("empty operation range");
  if (c.reads.max + c.writes.max >= 0x1000) throw UsageError("too many operations per transaction");
  if (!(c.read_only_fraction >= 0.0 && c.read_only_fraction <= 1.0)) {
    throw UsageError("read-only fraction must lie in [0, 1]");
  }
  if (c.gc_threshold && *c.gc_threshold == 0) throw UsageError("gc threshold must be at least 1");
  if (c.watchdog.count() <= 0) throw UsageError("watchdog must be positive");
}

std::vector<std::vector<TxScript>> generate_scripts(const WorkloadConfig& c) {
  validate(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<ObjectId> pick(1, c.objects);
  std::uniform_int_distribution<std::uint32_t> reads(c.reads.min, c.reads.max);
  std::uniform_int_distribution<std::uint32_t> writes(c.writes.min, c.writes.max);
  std::bernoulli_distribution read_only(c.read_only_fraction);

  std::vector<std::vector<TxScript>> scripts(c.threads);
  for (auto& thread : scripts) {
    thread.resize(c.transactions_per_thread);
    for (TxScript& tx : thread) {
      const std::uint32_t n_reads = reads(rng);
      const std::uint32_t n_writes = read_only(rng) ? 0 : writes(rng);
      for (std::uint32_t i = 0; i < n_reads; ++i) tx.reads.push_back(pick(rng));
      for (std::uint32_t i = 0; i < n_writes; ++i) tx.writes.push_back(pick(rng));
    }
  }
  return scripts;
}

Value encode_value(Timestamp tx, ObjectId obj, std::uint32_t op) {
  return static_cast<Value>((tx << 28) | (static_cast<std::uint64_t>(obj & 0xFFFF) << 12) | (op & 0xFFF));
}

namespace {

// Recorder that also audits lock order inside each tryCommit.
class AuditingRecorder : public history::Recorder {
 public:
  void on_commit_start(Timestamp tx) override {
    std::lock_guard guard(mu_);
    last_rank_[tx] = 0;
  }

  void on_lock(Timestamp tx, LockRank rank) override {
    acquisitions_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard guard(mu_);
    auto it = last_rank_.find(tx);
    if (it == last_rank_.end()) return;
    if (rank <= it->second) violations_.fetch_add(1, std::memory_order_relaxed);
    it->second = rank;
  }

  void on_commit(Timestamp tx) override {
    forget(tx);
    Recorder::on_commit(tx);
  }

  void on_abort(Timestamp tx, const std::optional<Conflict>& conflict) override {
    forget(tx);
    Recorder::on_abort(tx, conflict);
  }

  std::uint64_t acquisitions() const { return acquisitions_.load(); }
  std::uint64_t violations() const { return violations_.load(); }

 private:
  void forget(Timestamp tx) {
    std::lock_guard guard(mu_);
    last_rank_.erase(tx);
  }

  std::mutex mu_;
  std::unordered_map<Timestamp, LockRank> last_rank_;
  std::atomic<std::uint64_t> acquisitions_{0};
  std::atomic<std::uint64_t> violations_{0};
};

// Everything the workers touch. Shared so that workers stuck past the
// watchdog can be detached safely.
struct RunState {
  explicit RunState(const WorkloadConfig& config)
      : stm(StmConfig{config.objects, config.gc_threshold ? std::optional<gc::GcConfig>(gc::GcConfig{*config.gc_threshold})
                                                          : std::nullopt},
            &recorder) {}

  AuditingRecorder recorder;
  Stm stm;
  std::atomic<bool> go{false};
  std::atomic<std::uint64_t> committed_ro{0}, committed_upd{0}, aborted_ro{0}, aborted_upd{0};
  std::mutex mu;
  std::condition_variable cv;
  std::uint32_t finished = 0;
  std::vector<std::string> errors;
};

void run_worker(const std::shared_ptr<RunState>& state, const std::vector<TxScript>& scripts, bool yield) {
  auto pause = [yield] {
    if (yield) std::this_thread::yield();
  };
  while (!state->go.load(std::memory_order_acquire)) std::this_thread::yield();
  try {
    for (const TxScript& script : scripts) {
      Transaction tx = state->stm.begin();
      pause();
      std::uint32_t op = 0;
      for (ObjectId obj : script.reads) {
        state->stm.read(tx, obj);
        ++op;
        pause();
      }
      for (ObjectId obj : script.writes) state->stm.write(tx, obj, encode_value(tx.id(), obj, op++));
      const bool committed = state->stm.try_commit(tx).committed;
      if (script.read_only()) {
        (committed ? state->committed_ro : state->aborted_ro).fetch_add(1);
      } else {
        (committed ? state->committed_upd : state->aborted_upd).fetch_add(1);
      }
    }
  } catch (const std::exception& e) {
    std::lock_guard guard(state->mu);
    state->errors.emplace_back(e.what());
  }
  std::lock_guard guard(state->mu);
  ++state->finished;
  state->cv.notify_all();
}

}  // namespace

RunReport run(const WorkloadConfig& config) {
  auto scripts = generate_scripts(config);
  auto state = std::make_shared<RunState>(config);
  RunReport report;
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::thread> workers;
  workers.reserve(config.threads);
  for (std::uint32_t t = 0; t < config.threads; ++t) {
    workers.emplace_back([state, script = std::move(scripts[t]), yield = config.yield_between_ops] {
      run_worker(state, script, yield);
    });
  }
  state->go.store(true, std::memory_order_release);
  bool done;
  {
    std::unique_lock lock(state->mu);
    done = state->cv.wait_for(lock, config.watchdog, [&] { return state->finished == config.threads; });
  }
  report.wall_time = std::chrono::steady_clock::now() - start;
  if (!done) {
    for (auto& w : workers) w.detach();
    report.watchdog_expired = true;
    report.verdict.outcome = checker::Outcome::kUndecided;
    report.verdict.detail = "watchdog expired";
    return report;
  }
  for (auto& w : workers) w.join();

  report.committed_read_only = state->committed_ro;
  report.committed_update = state->committed_upd;
  report.aborted_read_only = state->aborted_ro;
  report.aborted_update = state->aborted_upd;
  report.lock_acquisitions = state->recorder.acquisitions();
  report.lock_order_violations = state->recorder.violations();
  report.recorder_violation = state->recorder.violation();
  report.errors = state->errors;
  report.history = state->recorder.history();
  report.deletions = state->recorder.deletions();
  report.versions_deleted = state->stm.versions_deleted();
  report.deletions_per_object.assign(config.objects, 0);
  for (const auto& d : report.deletions) {
    ++report.deletions_per_object[std::stoul(d.object.substr(1)) - 1];
  }
  for (const auto& a : state->recorder.aborts()) {
    if (a.conflict) {
      report.abort_witnesses.push_back(*a.conflict);
    } else {
      ++report.unattributed_aborts;
    }
  }

  try {
    report.verdict = checker::check_with_order(report.history, checker::timestamp_order(report.history));
  } catch (const std::exception& e) {
    report.verdict.outcome = checker::Outcome::kInvalid;
    report.verdict.detail = e.what();
  }
  if (config.dump_path) history::write_file(*config.dump_path, report.history);
  return report;
}

bool RunReport::ok() const {
  return !watchdog_expired && verdict.opaque() && aborted_read_only == 0 && lock_order_violations == 0 &&
         unattributed_aborts == 0 && !recorder_violation && errors.empty();
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "committed: " << committed_read_only << " read-only, " << committed_update << " update\n";
  out << "aborted:   " << aborted_read_only << " read-only, " << aborted_update << " update\n";
  out << "versions deleted: " << versions_deleted << "\n";
  out << "lock acquisitions: " << lock_acquisitions << " (" << lock_order_violations << " out of order)\n";
  out << "verdict: " << checker::to_string(verdict.outcome);
  if (!verdict.detail.empty()) out << " (" << verdict.detail << ")";
  out << "\n";
  if (watchdog_expired) out << "LIVENESS FAILURE: watchdog expired\n";
  if (recorder_violation) out << "recorded history not well-formed: " << *recorder_violation << "\n";
  for (const auto& e : errors) out << "worker error: " << e << "\n";
  out << "wall time: " << wall_time.count() << " s\n";
  return out.str();
}

std::string RunReport::to_key_values() const {
  std::ostringstream out;
  out << "committed_read_only=" << committed_read_only << "\n";
  out << "committed_update=" << committed_update << "\n";
  out << "aborted_read_only=" << aborted_read_only << "\n";
  out << "aborted_update=" << aborted_update << "\n";
  out << "versions_deleted=" << versions_deleted << "\n";
  out << "deletions_per_object=";
  for (std::size_t i = 0; i < deletions_per_object.size(); ++i) {
    out << (i ? "," : "") << deletions_per_object[i];
  }
  out << "\n";
  out << "lock_acquisitions=" << lock_acquisitions << "\n";
  out << "lock_order_violations=" << lock_order_violations << "\n";
  out << "unattributed_aborts=" << unattributed_aborts << "\n";
  out << "watchdog_expired=" << (watchdog_expired ? 1 : 0) << "\n";
  out << "events=" << history.size() << "\n";
  out << "verdict=" << checker::to_string(verdict.outcome) << "\n";
  out << "wall_time_s=" << wall_time.count() << "\n";
  out << "ok=" << (ok() ? 1 : 0) << "\n";
  return out.str();
}

}  // namespace mvto::harness
