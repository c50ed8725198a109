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

#include "sdmgs/parallel.hpp"

#include <algorithm>
#include <string>

#include "sdmgs/error.hpp"

namespace sdmgs {

WorkerPartition WorkerPartition::round_robin(std::size_t block_count, std::size_t workers) {
    if (workers == 0) throw Error(ErrorCode::invalid_argument, "worker count must be at least 1");
    WorkerPartition p;
    p.workers = workers;
    p.worker_of.resize(block_count);
    for (std::size_t i = 0; i < block_count; ++i) p.worker_of[i] = i % workers;
    return p;
}

std::vector<std::size_t> WorkerPartition::blocks_of(std::size_t worker) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < worker_of.size(); ++i) {
        if (worker_of[i] == worker) out.push_back(i);
    }
    return out;
}

Vector deterministic_reduce_sum(std::span<const ReducePacket> packets, std::size_t block_count) {
    std::vector<const ReducePacket*> by_block(block_count, nullptr);
    for (const auto& p : packets) {
        if (p.block >= block_count) throw Error(ErrorCode::missing_packet, "packet for unknown block " + std::to_string(p.block));
        if (by_block[p.block] != nullptr) throw Error(ErrorCode::missing_packet, "duplicate packet for block " + std::to_string(p.block));
        by_block[p.block] = &p;
    }
    if (block_count == 0) return {};
    for (std::size_t i = 0; i < block_count; ++i) {
        if (by_block[i] == nullptr) throw Error(ErrorCode::missing_packet, "no packet from block " + std::to_string(i));
    }
    const std::size_t width = by_block[0]->values.size();
    Vector total(width, 0.0);
    for (std::size_t i = 0; i < block_count; ++i) {
        const Vector& v = by_block[i]->values;
        if (v.size() != width) throw Error(ErrorCode::dimension_mismatch, "packet width differs for block " + std::to_string(i));
        for (std::size_t j = 0; j < width; ++j) total[j] += v[j];
    }
    return total;
}

BlockExecutor::BlockExecutor(std::size_t block_count, std::size_t workers)
    : partition_(WorkerPartition::round_robin(block_count, workers)) {
    assigned_.resize(workers);
    for (std::size_t w = 0; w < workers; ++w) assigned_[w] = partition_.blocks_of(w);
    failures_.resize(block_count);
    if (workers > 1) {
        threads_.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

BlockExecutor::~BlockExecutor() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void BlockExecutor::run_blocks(std::size_t worker) {
    for (std::size_t i : assigned_[worker]) {
        try {
            (*task_)(i);
        } catch (...) {
            failures_[i] = std::current_exception();
        }
    }
}

void BlockExecutor::worker_loop(std::size_t worker) {
    std::size_t seen = 0;
    while (true) {
        {
            std::unique_lock<std::mutex> lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
            if (stopping_) return;
            seen = generation_;
        }
        run_blocks(worker);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (--pending_ == 0) done_cv_.notify_one();
        }
    }
}

void BlockExecutor::for_each_block(const std::function<void(std::size_t)>& task) {
    std::fill(failures_.begin(), failures_.end(), nullptr);
    task_ = &task;
    if (threads_.empty()) {
        run_blocks(0);
    } else {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            pending_ = threads_.size();
            ++generation_;
        }
        start_cv_.notify_all();
        std::unique_lock<std::mutex> lock(mutex_);
        done_cv_.wait(lock, [&] { return pending_ == 0; });
    }
    task_ = nullptr;

    for (std::size_t i = 0; i < failures_.size(); ++i) {
        if (!failures_[i]) continue;
        const std::string where = "block " + std::to_string(i) + ": ";
        try {
            std::rethrow_exception(failures_[i]);
        } catch (const Error& e) {
            throw Error(e.code(), where + e.detail());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::worker_failure, where + e.what());
        } catch (...) {
            throw Error(ErrorCode::worker_failure, where + "unknown exception");
        }
    }
}

Vector BlockExecutor::reduce_sum(std::span<const ReducePacket> packets) {
    Vector total = deterministic_reduce_sum(packets, block_count());
    ++reduce_count_;
    replicated_bytes_ = std::max(replicated_bytes_, total.size() * sizeof(double));
    return total;
}

}  // namespace sdmgs
