#pragma once

#include <cstdint>
#include <functional>

namespace srn {

// Fixed chunking of [0, n_items) into blocks of chunk_size.  Workers pull
// chunks from an atomic counter; the caller stores per-chunk results by
// chunk index and reduces them sequentially, so results do not depend on
// the thread count.  threads == 0 selects hardware concurrency.
void parallel_chunks(std::uint64_t n_items, std::uint64_t chunk_size,
                     unsigned threads,
                     const std::function<void(std::uint64_t chunk_index,
                                              std::uint64_t begin,
                                              std::uint64_t end)>& body);

// Chunk size shared by all path-parallel drivers.  Part of the
// reproducibility contract: changing it changes merge order.
inline constexpr std::uint64_t kPathChunk = 4096;

}  // namespace srn
