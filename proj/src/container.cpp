#include "ecds/container.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ecds {

namespace {
constexpr char kMagic[4] = {'E', 'C', 'D', 'S'};
constexpr uint8_t kVersion = 1;

void put_le32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
void put_le64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
uint32_t get_le32(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
    return v;
}
uint64_t get_le64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
    return v;
}
}  // namespace

std::string Container::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return v;
    throw std::out_of_range("container metadata key missing: " + key);
}

bool Container::has_meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return true;
    return false;
}

void Container::put(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
}

void Container::put_u64(const std::string& key, uint64_t value) { put(key, std::to_string(value)); }

uint64_t Container::meta_u64(const std::string& key) const { return std::stoull(meta(key)); }

std::vector<uint8_t> Container::serialize() const {
    std::string meta_text;
    for (const auto& [k, v] : metadata) {
        meta_text += k;
        meta_text += '=';
        meta_text += v;
        meta_text += '\n';
    }
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(uint8_t(kind));
    put_le32(out, uint32_t(meta_text.size()));
    out.insert(out.end(), meta_text.begin(), meta_text.end());
    put_le64(out, word.size());
    auto payload = word.to_bytes();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Container Container::deserialize(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 18 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("container: bad magic");
    if (bytes[4] != kVersion) throw std::runtime_error("container: unsupported format version");
    uint8_t kind = bytes[5];
    if (kind < 1 || kind > 3) throw std::runtime_error("container: unknown structure kind");
    uint32_t meta_len = get_le32(bytes.data() + 6);
    std::size_t pos = 10;
    if (pos + meta_len + 8 > bytes.size()) throw std::runtime_error("container: truncated metadata");
    std::string meta_text(bytes.begin() + pos, bytes.begin() + pos + meta_len);
    pos += meta_len;
    uint64_t nbits = get_le64(bytes.data() + pos);
    pos += 8;
    std::size_t payload_len = std::size_t((nbits + 7) / 8);
    if (pos + payload_len != bytes.size()) throw std::runtime_error("container: payload length mismatch");

    Container c;
    c.kind = ContainerKind(kind);
    std::size_t line = 0;
    while (line < meta_text.size()) {
        std::size_t nl = meta_text.find('\n', line);
        if (nl == std::string::npos) throw std::runtime_error("container: unterminated metadata line");
        std::string entry = meta_text.substr(line, nl - line);
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos) throw std::runtime_error("container: malformed metadata line");
        c.metadata.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
        line = nl + 1;
    }
    c.word = BitWord::from_bytes(std::vector<uint8_t>(bytes.begin() + pos, bytes.end()), nbits);
    return c;
}

void Container::save(const std::string& path) const {
    auto bytes = serialize();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Container Container::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace ecds
