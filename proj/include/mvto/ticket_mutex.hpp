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

#pragma once

#include <atomic>
#include <cstdint>

namespace mvto {

/// FIFO mutex. Waiters are served strictly in arrival order, so no thread
/// can be overtaken indefinitely. Meets the Lockable requirements.
class TicketMutex {
 public:
  TicketMutex() = default;
  TicketMutex(const TicketMutex&) = delete;
  TicketMutex& operator=(const TicketMutex&) = delete;

  void lock() noexcept {
    const std::uint32_t ticket = next_.fetch_add(1, std::memory_order_relaxed);
    std::uint32_t serving = serving_.load(std::memory_order_acquire);
    while (serving != ticket) {
      serving_.wait(serving, std::memory_order_acquire);
      serving = serving_.load(std::memory_order_acquire);
    }
  }

  bool try_lock() noexcept {
    std::uint32_t serving = serving_.load(std::memory_order_acquire);
    std::uint32_t expected = serving;
    return next_.compare_exchange_strong(expected, serving + 1, std::memory_order_acquire,
                                         std::memory_order_relaxed);
  }

  void unlock() noexcept {
    serving_.fetch_add(1, std::memory_order_release);
    serving_.notify_all();
  }

 private:
  std::atomic<std::uint32_t> next_{0};
  std::atomic<std::uint32_t> serving_{0};
};

}  // namespace mvto
