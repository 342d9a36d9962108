#include "trustgate/trust/database.hpp"

#include <zlib.h>

#include <array>
#include <cstring>

#include "trustgate/error.hpp"

namespace trustgate::trust {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'T', 'G', 'D', 'B'};

std::uint32_t crc_of(std::span<const std::uint8_t> data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
    return static_cast<std::uint32_t>(crc);
}

void write_record(ByteWriter& body, const std::string& id, const PrincipalRecord& rec) {
    body.str(id);
    body.u64(rec.ledger.negatives());
    body.u64(rec.ledger.total());
    for (const auto& a : rec.ledger.history()) {
        body.u8(static_cast<std::uint8_t>(a.kind));
        body.f64(a.weight);
        body.u64(a.seq);
    }
    body.f64(rec.state.value);
    body.u8(static_cast<std::uint8_t>(rec.state.cls));
    body.u32(rec.state.malicious_streak);
    body.boolean(rec.state.removed);
}

PrincipalRecord read_record(ByteReader& in) {
    const auto negatives = in.u64();
    const auto total = in.u64();
    // Each history entry occupies 17 bytes; reject impossible counts before allocating.
    if (total > in.remaining() / 17) in.fail("history length exceeds record");

    std::vector<ActionRecord> history;
    history.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        ActionRecord a;
        const auto kind = in.u8();
        if (kind > 2) in.fail("action kind out of range");
        a.kind = static_cast<ActionKind>(kind);
        a.weight = in.f64();
        a.seq = in.u64();
        history.push_back(a);
    }

    PrincipalRecord rec;
    try {
        rec.ledger = TrustLedger::from_history(std::move(history));
    } catch (const Error& e) {
        in.fail(std::string("inconsistent ledger: ") + e.what());
    }
    if (rec.ledger.negatives() != negatives) in.fail("negatives counter disagrees with history");

    rec.state.value = in.f64();
    if (!(rec.state.value >= 0.0 && rec.state.value <= 1.0)) in.fail("trust value outside [0, 1]");
    const auto cls = in.u8();
    if (cls > 2) in.fail("trust class out of range");
    rec.state.cls = static_cast<TrustClass>(cls);
    rec.state.malicious_streak = in.u32();
    rec.state.removed = in.boolean();
    if (rec.state.removed && rec.state.cls != TrustClass::NonTrusted) in.fail("removed principal not NonTrusted");
    return rec;
}

} // namespace

PrincipalRecord& TrustDatabase::touch(const std::string& id, const TrustParams& params) {
    auto it = records_.find(id);
    if (it == records_.end())
        it = records_.emplace(id, PrincipalRecord{TrustLedger{}, TrustState::initial(params)}).first;
    return it->second;
}

const PrincipalRecord* TrustDatabase::find(const std::string& id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

PrincipalRecord* TrustDatabase::find(const std::string& id) {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

Bytes save_db(const TrustDatabase& db) {
    ByteWriter out;
    out.raw(kMagic);
    out.u16(kSnapshotVersion);
    out.u32(static_cast<std::uint32_t>(db.size()));
    for (const auto& [id, rec] : db.records()) {
        ByteWriter body;
        write_record(body, id, rec);
        out.u32(static_cast<std::uint32_t>(body.size()));
        out.raw(body.bytes());
    }
    out.u32(crc_of(out.bytes()));
    return out.take();
}

TrustDatabase load_db(std::span<const std::uint8_t> snapshot) {
    if (snapshot.size() < kMagic.size() + 2 + 4 + 4)
        throw Error(Errc::CorruptSnapshot, "snapshot shorter than header");

    const auto payload = snapshot.first(snapshot.size() - 4);
    ByteReader trailer(snapshot.last(4), Errc::CorruptSnapshot);
    if (trailer.u32() != crc_of(payload)) throw Error(Errc::CorruptSnapshot, "crc mismatch");

    ByteReader in(payload, Errc::CorruptSnapshot);
    if (std::memcmp(in.raw(4).data(), kMagic.data(), kMagic.size()) != 0) in.fail("bad magic");
    const auto version = in.u16();
    if (version != kSnapshotVersion) in.fail("unsupported snapshot version " + std::to_string(version));

    TrustDatabase db;
    const auto count = in.u32();
    std::string previous;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto len = in.u32();
        ByteReader rec_in(in.raw(len), Errc::CorruptSnapshot);
        auto id = rec_in.str();
        if (i > 0 && id <= previous) rec_in.fail("record ids not strictly ascending");
        auto rec = read_record(rec_in);
        if (!rec_in.done()) rec_in.fail("trailing bytes in record");
        previous = id;
        db.put(id, std::move(rec));
    }
    if (!in.done()) in.fail("trailing bytes after records");
    return db;
}

} // namespace trustgate::trust
