#pragma once

// Little-endian byte writer/reader shared by the snapshot and wire codecs.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/error.hpp"

namespace trustgate {

using Bytes = std::vector<std::uint8_t>;

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void boolean(bool v) { u8(v ? 1 : 0); }

    // u16 length prefix.
    void str(std::string_view s);
    void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }

    std::size_t size() const { return out_.size(); }
    Bytes& bytes() { return out_; }
    Bytes take() { return std::move(out_); }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    Bytes out_;
};

// Every read is bounds checked; a short buffer raises `Error(fail_code)`.
class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> data, Errc fail_code) : data_(data), fail_(fail_code) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    bool boolean();
    std::string str();
    std::span<const std::uint8_t> raw(std::size_t n);

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

    [[noreturn]] void fail(const std::string& why) const;

private:
    std::uint64_t get(int width);

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    Errc fail_;
};

} // namespace trustgate
