#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ecds/bitword.hpp"

namespace ecds {

/// Tracks the distinct bit positions read during one decode call.
/// Repeated reads of the same position count once.
class ProbeSession {
  public:
    explicit ProbeSession(const BitWord& w) : word_(&w), stamps_(w.size(), 0) {}

    void begin_call() {
        if (epoch_ == 0xff) {
            std::fill(stamps_.begin(), stamps_.end(), 0);
            epoch_ = 0;
        }
        ++epoch_;
        distinct_ = 0;
    }

    bool read(std::size_t pos) {
        if (stamps_[pos] != epoch_) {
            stamps_[pos] = epoch_;
            ++distinct_;
        }
        return word_->get(pos);
    }

    uint64_t distinct_probes() const { return distinct_; }
    std::size_t length() const { return word_->size(); }
    const BitWord& word() const { return *word_; }

  private:
    const BitWord* word_;
    std::vector<uint8_t> stamps_;
    uint8_t epoch_ = 0;
    uint64_t distinct_ = 0;
};

/// Window onto a probe session. Decoders only see words through views, so
/// every read is counted against the probe budget.
class ProbeView {
  public:
    ProbeView(ProbeSession& s, std::size_t offset, std::size_t length)
        : session_(&s), offset_(offset), length_(length) {
        if (offset + length > s.length()) throw std::out_of_range("ProbeView: window past end of word");
    }

    explicit ProbeView(ProbeSession& s) : ProbeView(s, 0, s.length()) {}

    bool read(std::size_t i) const {
        if (i >= length_) throw std::out_of_range("ProbeView: probe out of range");
        return session_->read(offset_ + i);
    }

    uint64_t read_span(std::size_t pos, unsigned len) const {
        uint64_t v = 0;
        for (unsigned j = 0; j < len; ++j) v |= uint64_t(read(pos + j)) << j;
        return v;
    }

    std::size_t size() const { return length_; }

    ProbeView subview(std::size_t offset, std::size_t length) const {
        if (offset + length > length_) throw std::out_of_range("ProbeView: subview past end");
        return ProbeView(*session_, offset_ + offset, length);
    }

  private:
    ProbeSession* session_;
    std::size_t offset_;
    std::size_t length_;
};

}  // namespace ecds
