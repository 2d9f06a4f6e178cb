#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cvqc::detail {

/// SHAKE256 over the concatenation of `parts`, squeezing `out_bytes` bytes.
std::vector<std::uint8_t> shake256(std::span<const std::span<const std::uint8_t>> parts,
                                   std::size_t out_bytes);

}  // namespace cvqc::detail
