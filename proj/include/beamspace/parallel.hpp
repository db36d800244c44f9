// SPDX-License-Identifier: Apache-2.0
//
// beamspace-lab: beamspace dimension reduction analysis for massive MU-MIMO
// Copyright (C) 2026 the beamspace-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSPACE_PARALLEL_HPP
#define BEAMSPACE_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace beamspace {

// 0 means "use hardware concurrency"; anything else is clamped to >= 1.
inline int resolve_thread_count(int requested)
{
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, n_items) into fixed-size chunks, evaluates per_chunk(chunk_idx,
// begin, end) -> T on a worker pool, and folds the partial results in chunk
// order. The chunk grid depends only on n_items and chunk_size, and each
// chunk derives its own RNG stream from its index, so the result is
// byte-identical for every thread count.
template <typename T, typename PerChunk, typename Combine>
T chunked_reduce(std::int64_t n_items, std::int64_t chunk_size, int threads, T init,
                 PerChunk per_chunk, Combine combine)
{
    if (n_items <= 0)
        return init;
    if (chunk_size <= 0)
        chunk_size = n_items;
    const std::int64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    std::vector<T> partial(static_cast<std::size_t>(n_chunks), init);

    const int n_threads = std::min<std::int64_t>(resolve_thread_count(threads), n_chunks);
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks || failed.load())
                return;
            const std::int64_t begin = c * chunk_size;
            const std::int64_t end = std::min(begin + chunk_size, n_items);
            try {
                partial[static_cast<std::size_t>(c)] = per_chunk(c, begin, end);
            } catch (...) {
                if (!failed.exchange(true))
                    error = std::current_exception();
                return;
            }
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);

    T acc = init;
    for (std::int64_t c = 0; c < n_chunks; ++c)
        acc = combine(std::move(acc), std::move(partial[static_cast<std::size_t>(c)]));
    return acc;
}

} // namespace beamspace

#endif
