#include <limits>

#include "trustgate/bytes.hpp"
#include "trustgate/error.hpp"

namespace trustgate {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::EmptyLedger: return "EmptyLedger";
        case Errc::InvalidWeight: return "InvalidWeight";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::InvalidThresholds: return "InvalidThresholds";
        case Errc::RemovedPrincipal: return "RemovedPrincipal";
        case Errc::CorruptSnapshot: return "CorruptSnapshot";
        case Errc::MalformedEnvelope: return "MalformedEnvelope";
        case Errc::SealViolation: return "SealViolation";
        case Errc::IncompleteTrace: return "IncompleteTrace";
        case Errc::MalformedTrace: return "MalformedTrace";
        case Errc::UnknownEndpoint: return "UnknownEndpoint";
        case Errc::Busy: return "Busy";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::InvalidScenario: return "InvalidScenario";
    }
    return "Unknown";
}

void ByteWriter::str(std::string_view s) {
    if (s.size() > std::numeric_limits<std::uint16_t>::max())
        throw Error(Errc::InvalidArgument, "string too long for u16 length prefix");
    u16(static_cast<std::uint16_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
}

bool ByteReader::boolean() {
    const auto v = u8();
    if (v > 1) fail("boolean byte out of range");
    return v == 1;
}

std::string ByteReader::str() {
    const auto n = u16();
    const auto span = raw(n);
    return std::string(span.begin(), span.end());
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
    if (remaining() < n) fail("truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

void ByteReader::fail(const std::string& why) const {
    throw Error(fail_, why + " at offset " + std::to_string(pos_));
}

std::uint64_t ByteReader::get(int width) {
    if (remaining() < static_cast<std::size_t>(width)) fail("truncated input");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
}

} // namespace trustgate
