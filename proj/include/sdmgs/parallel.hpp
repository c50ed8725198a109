/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "sdmgs/model.hpp"

namespace sdmgs {

/// Static block -> worker map, round-robin by block index.
struct WorkerPartition {
    std::vector<std::size_t> worker_of;
    std::size_t workers = 1;

    static WorkerPartition round_robin(std::size_t block_count, std::size_t workers);
    std::vector<std::size_t> blocks_of(std::size_t worker) const;
};

/// One block's contribution to a reduce-sum. Every packet of a reduce has the
/// same width.
struct ReducePacket {
    std::size_t block = 0;
    Vector values;
};

/// Sums packets in ascending block order whatever order they arrive in, so
/// totals are bitwise identical for every worker count. Throws
/// Error(missing_packet) unless each block in [0, block_count) appears once.
Vector deterministic_reduce_sum(std::span<const ReducePacket> packets, std::size_t block_count);

/// Runs per-block tasks on a fixed pool of worker threads and performs the
/// reduce-sum synchronizations. With one worker everything runs inline on the
/// calling thread.
class BlockExecutor {
public:
    BlockExecutor(std::size_t block_count, std::size_t workers);
    ~BlockExecutor();

    BlockExecutor(const BlockExecutor&) = delete;
    BlockExecutor& operator=(const BlockExecutor&) = delete;

    std::size_t block_count() const noexcept { return partition_.worker_of.size(); }
    std::size_t workers() const noexcept { return partition_.workers; }
    const WorkerPartition& partition() const noexcept { return partition_; }

    /// Calls task(i) once for every block; each worker visits its own blocks
    /// in ascending order. A failure is rethrown after all workers finish: an
    /// sdmgs::Error keeps its code, anything else becomes worker_failure. The
    /// lowest failing block index is named in the message.
    void for_each_block(const std::function<void(std::size_t)>& task);

    /// Reduce-sum of one packet per block, counted as one synchronization.
    Vector reduce_sum(std::span<const ReducePacket> packets);

    std::size_t reduce_count() const noexcept { return reduce_count_; }
    /// Largest reduced vector broadcast so far, in bytes. This is the state
    /// every worker holds beyond its own blocks.
    std::size_t replicated_bytes() const noexcept { return replicated_bytes_; }

private:
    void worker_loop(std::size_t worker);
    void run_blocks(std::size_t worker);

    WorkerPartition partition_;
    std::vector<std::vector<std::size_t>> assigned_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stopping_ = false;
    std::vector<std::exception_ptr> failures_;
    std::size_t reduce_count_ = 0;
    std::size_t replicated_bytes_ = 0;
};

}  // namespace sdmgs
