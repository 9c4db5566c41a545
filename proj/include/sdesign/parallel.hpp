// Copyright 2026 The sdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDESIGN_PARALLEL_HPP
#define SDESIGN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sdesign {

inline constexpr std::uint64_t kDefaultBlock = 1024;

/// Splits [0, total) into fixed blocks of `block` items and evaluates
/// fn(begin, end) for each on up to `workers` threads. Results come back in
/// block order, so folding them left to right gives the same answer for any
/// worker count.
template <typename Fn>
auto run_blocks(std::uint64_t total, int workers, Fn&& fn, std::uint64_t block = kDefaultBlock) {
    using Acc = decltype(fn(std::uint64_t{0}, std::uint64_t{0}));
    const std::uint64_t blocks = total == 0 ? 0 : (total + block - 1) / block;
    std::vector<Acc> out(blocks);
    auto run = [&](std::uint64_t b) { out[b] = fn(b * block, std::min(total, (b + 1) * block)); };
    const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
    if (threads == 1 || blocks <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) {
            run(b);
        }
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < std::min(threads, blocks); ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t b = next++; b < blocks; b = next++) {
                try {
                    run(b);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

}  // namespace sdesign

#endif  // SDESIGN_PARALLEL_HPP
