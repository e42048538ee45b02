#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecds/bitword.hpp"

namespace ecds {

enum class ContainerKind : uint8_t { membership = 1, polyeval = 2, raw = 3 };

/// Serialized word container shared by all structures.
///
/// Layout: magic "ECDS", 1-byte version (=1), 1-byte kind, 4-byte LE metadata
/// byte length, metadata as UTF-8 key=value lines, 8-byte LE bit length N,
/// then ceil(N/8) payload bytes with bit j at byte j/8, position j%8, LSB
/// first.
struct Container {
    ContainerKind kind = ContainerKind::raw;
    std::vector<std::pair<std::string, std::string>> metadata;  // ordered key=value lines
    BitWord word;

    std::string meta(const std::string& key) const;
    bool has_meta(const std::string& key) const;
    void put(const std::string& key, const std::string& value);
    void put_u64(const std::string& key, uint64_t value);
    uint64_t meta_u64(const std::string& key) const;

    std::vector<uint8_t> serialize() const;
    static Container deserialize(const std::vector<uint8_t>& bytes);

    void save(const std::string& path) const;
    static Container load(const std::string& path);
};

}  // namespace ecds
