#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace altersim {

// Plain SHA-256, used for request digests and config digests. Self-contained
// so digests are identical on every platform without linking a crypto library.
class Sha256 {
public:
    Sha256();

    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }

    // Finalizes and returns the digest as lowercase hex. The object must not
    // be updated afterwards.
    std::string hex_digest();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
    std::uint64_t total_len_ = 0;
};

inline std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data);
    return h.hex_digest();
}

} // namespace altersim
