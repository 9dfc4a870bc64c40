#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace boardcore {

// Runs fn(i) for i in [0, n). Each index owns its output slot, so results are
// identical for any worker count; only wall time changes.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), n);
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Deterministic reduction: rows are cut into fixed blocks, each block is
// accumulated sequentially, and block results are combined in block order.
// Bit-identical for any worker count.
template <typename Acc, typename BlockFn, typename CombineFn>
Acc block_reduce(size_t n_rows, size_t block_size, int workers, Acc zero, BlockFn&& block_fn,
                 CombineFn&& combine) {
    if (n_rows == 0) return zero;
    size_t nblocks = (n_rows + block_size - 1) / block_size;
    std::vector<Acc> partial(nblocks, zero);
    parallel_for(nblocks, workers, [&](size_t b) {
        size_t lo = b * block_size;
        size_t hi = std::min(n_rows, lo + block_size);
        partial[b] = block_fn(lo, hi);
    });
    Acc total = zero;
    for (size_t b = 0; b < nblocks; ++b) combine(total, partial[b]);
    return total;
}

}  // namespace boardcore
