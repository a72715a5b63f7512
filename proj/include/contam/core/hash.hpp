#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace contam {

/// Incremental FNV-1a 64; used for content fingerprints, not security.
class Fnv64 {
public:
    Fnv64& bytes(const void* data, std::size_t size);
    Fnv64& text(std::string_view s) { return bytes(s.data(), s.size()); }
    Fnv64& doubles(std::span<const double> v) { return bytes(v.data(), v.size_bytes()); }
    Fnv64& ints(std::span<const int> v) { return bytes(v.data(), v.size_bytes()); }
    std::uint64_t value() const { return h_; }
    std::string hex() const;

private:
    std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

}  // namespace contam
