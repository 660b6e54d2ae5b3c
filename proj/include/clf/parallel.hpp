#pragma once

#include <cstdint>
#include <functional>

namespace clf::par {

/// Worker cap: CEGIS_CLF_THREADS when set (minimum 1), else hardware
/// concurrency.
int thread_cap();

/// Runs fn(k) for k in [0, n_chunks). Chunk indices, not thread identity,
/// must drive all observable results: callers write per-chunk slots and
/// merge by index so outputs are identical for any worker count.
void for_each_chunk(std::int64_t n_chunks, const std::function<void(std::int64_t)>& fn);

}  // namespace clf::par
