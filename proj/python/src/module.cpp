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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <sstream>

#include "mvto/checker.hpp"
#include "mvto/harness.hpp"
#include "mvto/recorder.hpp"
#include "mvto/replay.hpp"
#include "mvto/stm.hpp"

namespace py = pybind11;

namespace {

using namespace mvto;

// An Stm together with the recorder that captures its history.
class RecordedStm {
 public:
  RecordedStm(std::size_t object_count, std::optional<std::size_t> gc_threshold)
      : stm_(make_config(object_count, gc_threshold), &recorder_) {}

  Stm& stm() { return stm_; }
  history::History history() const { return recorder_.history(); }

 private:
  static StmConfig make_config(std::size_t objects, std::optional<std::size_t> threshold) {
    StmConfig c{objects, std::nullopt};
    if (threshold) c.gc = gc::GcConfig{*threshold};
    return c;
  }

  history::Recorder recorder_;
  Stm stm_;
};

checker::VersionOrder to_order(const std::map<std::string, std::vector<Timestamp>>& m) {
  return checker::VersionOrder{m};
}

checker::Verdict check(const history::History& h, const py::object& order, std::uint64_t budget) {
  if (py::isinstance<py::str>(order)) {
    const auto name = order.cast<std::string>();
    py::gil_scoped_release release;
    if (name == "auto") return checker::check_auto(h, budget);
    if (name == "brute") return checker::check_brute_force(h, budget);
    if (name == "ts") return checker::check_with_order(h, checker::timestamp_order(h));
    throw UsageError("order must be 'auto', 'ts', 'brute' or a mapping");
  }
  auto explicit_order = to_order(order.cast<std::map<std::string, std::vector<Timestamp>>>());
  py::gil_scoped_release release;
  return checker::check_with_order(h, explicit_order);
}

}  // namespace

PYBIND11_MODULE(_mvto, m) {
  m.doc() = "Multi-version timestamp-ordering STM with an opacity checker";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<history::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<checker::InputError>(m, "InputError", PyExc_ValueError);

  py::class_<Conflict>(m, "Conflict")
      .def_readonly("object", &Conflict::object)
      .def_readonly("creator", &Conflict::creator)
      .def_readonly("committer", &Conflict::committer)
      .def_readonly("reader", &Conflict::reader)
      .def("__eq__", [](const Conflict& a, const Conflict& b) { return a == b; })
      .def("__repr__", [](const Conflict& c) { return "<Conflict " + to_string(c) + ">"; });

  py::enum_<TxStatus>(m, "TxStatus")
      .value("LIVE", TxStatus::kLive)
      .value("COMMITTED", TxStatus::kCommitted)
      .value("ABORTED", TxStatus::kAborted);

  py::class_<Transaction>(m, "Transaction")
      .def_property_readonly("id", &Transaction::id)
      .def_property_readonly("status", &Transaction::status)
      .def_property_readonly("live", &Transaction::live)
      .def_property_readonly("read_set", &Transaction::read_set)
      .def_property_readonly("write_set", &Transaction::write_set)
      .def("__repr__", [](const Transaction& t) {
        return "<Transaction " + std::to_string(t.id()) + " " + to_string(t.status()) + ">";
      });

  py::class_<CommitResult>(m, "CommitResult")
      .def_readonly("committed", &CommitResult::committed)
      .def_readonly("conflict", &CommitResult::conflict)
      .def("__bool__", [](const CommitResult& r) { return r.committed; });

  py::class_<VersionTuple>(m, "VersionTuple")
      .def_readonly("ts", &VersionTuple::ts)
      .def_readonly("value", &VersionTuple::value)
      .def_readonly("readers", &VersionTuple::readers)
      .def_readonly("next_ts", &VersionTuple::next_ts)
      .def("__repr__", [](const VersionTuple& t) {
        return "<VersionTuple ts=" + std::to_string(t.ts) + " value=" + std::to_string(t.value) + ">";
      });

  py::class_<RecordedStm>(m, "Stm")
      .def(py::init<std::size_t, std::optional<std::size_t>>(), py::arg("object_count"),
           py::arg("gc_threshold") = py::none())
      .def("begin", [](RecordedStm& s) { return s.stm().begin(); })
      .def("read", [](RecordedStm& s, Transaction& tx, ObjectId obj) { return s.stm().read(tx, obj); })
      .def("write", [](RecordedStm& s, Transaction& tx, ObjectId obj, Value v) { s.stm().write(tx, obj, v); })
      .def("try_commit", [](RecordedStm& s, Transaction& tx) { return s.stm().try_commit(tx); })
      .def("try_abort", [](RecordedStm& s, Transaction& tx) { s.stm().try_abort(tx); })
      .def("versions", [](RecordedStm& s, ObjectId obj) { return s.stm().versions(obj); })
      .def("live_ids", [](RecordedStm& s) { return s.stm().live_ids(); })
      .def_property_readonly("object_count", [](RecordedStm& s) { return s.stm().object_count(); })
      .def_property_readonly("versions_deleted", [](RecordedStm& s) { return s.stm().versions_deleted(); })
      .def("history", &RecordedStm::history);

  py::class_<history::History>(m, "History")
      .def(py::init<>())
      .def("__len__", &history::History::size)
      .def("__eq__", [](const history::History& a, const history::History& b) { return a == b; })
      .def("__str__", &history::serialize)
      .def_property_readonly("events",
                             [](const history::History& h) {
                               py::list out;
                               for (const auto& e : h.events) {
                                 const std::string kind(1, static_cast<char>(e.kind));
                                 if (e.has_operand()) {
                                   out.append(py::make_tuple(kind, e.tx, e.object, e.value));
                                 } else {
                                   out.append(py::make_tuple(kind, e.tx));
                                 }
                               }
                               return out;
                             })
      .def("complete", &history::complete)
      .def("is_well_formed", &history::is_well_formed);

  m.def("parse_history", [](const std::string& text) { return history::parse(text); }, py::arg("text"));
  m.def("serialize_history", &history::serialize, py::arg("history"));

  py::class_<checker::Verdict>(m, "Verdict")
      .def_property_readonly("outcome", [](const checker::Verdict& v) { return checker::to_string(v.outcome); })
      .def_property_readonly("opaque", &checker::Verdict::opaque)
      .def_property_readonly("order", [](const checker::Verdict& v) { return v.order.objects; })
      .def_readonly("cycle", &checker::Verdict::cycle)
      .def_readonly("serialization", &checker::Verdict::serialization)
      .def_readonly("witness", &checker::Verdict::witness)
      .def_readonly("detail", &checker::Verdict::detail)
      .def_readonly("orders_tried", &checker::Verdict::orders_tried)
      .def("__repr__", [](const checker::Verdict& v) {
        return std::string("<Verdict ") + checker::to_string(v.outcome) + ">";
      });

  m.def("check", &check, py::arg("history"), py::arg("order") = "auto",
        py::arg("budget") = checker::kDefaultBudget,
        "Decide opacity. `order` is 'auto', 'ts', 'brute' or a mapping object -> list of writer ids.");
  m.def("timestamp_order", [](const history::History& h) { return checker::timestamp_order(h).objects; });
  m.def("is_legal", &checker::is_legal);
  m.def("is_valid", &checker::is_valid);

  py::class_<harness::RunReport>(m, "RunReport")
      .def_readonly("committed_read_only", &harness::RunReport::committed_read_only)
      .def_readonly("committed_update", &harness::RunReport::committed_update)
      .def_readonly("aborted_read_only", &harness::RunReport::aborted_read_only)
      .def_readonly("aborted_update", &harness::RunReport::aborted_update)
      .def_readonly("versions_deleted", &harness::RunReport::versions_deleted)
      .def_readonly("deletions_per_object", &harness::RunReport::deletions_per_object)
      .def_readonly("watchdog_expired", &harness::RunReport::watchdog_expired)
      .def_readonly("lock_order_violations", &harness::RunReport::lock_order_violations)
      .def_readonly("abort_witnesses", &harness::RunReport::abort_witnesses)
      .def_readonly("verdict", &harness::RunReport::verdict)
      .def_readonly("history", &harness::RunReport::history)
      .def_property_readonly("wall_time", [](const harness::RunReport& r) { return r.wall_time.count(); })
      .def_property_readonly("ok", &harness::RunReport::ok)
      .def("to_text", &harness::RunReport::to_text)
      .def("to_key_values", &harness::RunReport::to_key_values);

  m.def(
      "run_stress",
      [](std::uint32_t threads, std::uint32_t txs, std::uint32_t objects, std::string reads, std::string writes,
         double ro_frac, std::optional<std::size_t> gc_threshold, std::uint64_t seed, double watchdog) {
        harness::WorkloadConfig c;
        c.threads = threads;
        c.transactions_per_thread = txs;
        c.objects = objects;
        c.reads = harness::parse_range(reads);
        c.writes = harness::parse_range(writes);
        c.read_only_fraction = ro_frac;
        c.gc_threshold = gc_threshold;
        c.seed = seed;
        c.watchdog = std::chrono::milliseconds(static_cast<long long>(watchdog * 1000));
        py::gil_scoped_release release;
        return harness::run(c);
      },
      py::arg("threads") = 4, py::arg("txs") = 50, py::arg("objects") = 8, py::arg("reads") = "1..4",
      py::arg("writes") = "1..3", py::arg("ro_frac") = 0.25, py::arg("gc_threshold") = 8, py::arg("seed") = 1,
      py::arg("watchdog") = 30.0);

  m.def(
      "replay",
      [](const std::string& script, std::optional<std::size_t> object_count,
         std::optional<std::size_t> gc_threshold) {
        auto steps = harness::parse_script(script, object_count);
        py::gil_scoped_release release;
        return harness::replay(steps, harness::ReplayOptions{object_count, gc_threshold});
      },
      py::arg("script"), py::arg("object_count") = py::none(), py::arg("gc_threshold") = py::none());
}
