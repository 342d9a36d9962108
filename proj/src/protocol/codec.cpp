#include "trustgate/protocol/codec.hpp"

#include <algorithm>

#include "trustgate/error.hpp"

namespace trustgate::protocol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void put(ByteWriter& w, const PrincipalId& p) {
    w.str(p.user_id);
    w.str(p.domain_id);
}

void put(ByteWriter& w, trust::ActionKind k) { w.u8(static_cast<std::uint8_t>(k)); }

void put(ByteWriter& w, const ServiceRequest& r) {
    w.str(r.service_key);
    put(w, r.conduct);
}

void put(ByteWriter& w, const MobileAgentState& m) {
    w.u64(m.ma_id);
    put(w, m.principal);
    w.str(m.origin_proxy);
    w.u64(m.session_id);
    put(w, m.request);
}

void put(ByteWriter& w, const Assessment& a) {
    put(w, a.observed);
    w.boolean(a.breach_reported);
}

PrincipalId get_principal(ByteReader& r) {
    PrincipalId p;
    p.user_id = r.str();
    p.domain_id = r.str();
    return p;
}

trust::ActionKind get_kind(ByteReader& r) {
    const auto v = r.u8();
    if (v > 2) r.fail("action kind out of range");
    return static_cast<trust::ActionKind>(v);
}

ServiceRequest get_request(ByteReader& r) {
    ServiceRequest req;
    req.service_key = r.str();
    req.conduct = get_kind(r);
    return req;
}

MobileAgentState get_agent(ByteReader& r) {
    MobileAgentState m;
    m.ma_id = r.u64();
    m.principal = get_principal(r);
    m.origin_proxy = r.str();
    m.session_id = r.u64();
    m.request = get_request(r);
    return m;
}

Assessment get_assessment(ByteReader& r) {
    Assessment a;
    a.observed = get_kind(r);
    a.breach_reported = r.boolean();
    return a;
}

void encode_body(ByteWriter& w, const Body& body) {
    std::visit(overloaded{
                   [&](const AuthSubmit& b) {
                       put(w, b.principal);
                       w.str(b.password);
                       put(w, b.request);
                   },
                   [&](const AuthResult& b) { w.u64(b.session_id); },
                   [&](const TrustQueryUser& b) { put(w, b.principal); },
                   [&](const TrustReplyUser& b) {
                       put(w, b.principal);
                       w.boolean(b.trusted);
                   },
                   [&](const MigrateOut& b) { put(w, b.agent); },
                   [&](const DomainTrustQuery& b) {
                       put(w, b.principal);
                       w.u64(b.ma_id);
                   },
                   [&](const DomainTrustReply& b) {
                       put(w, b.principal);
                       w.boolean(b.trusted);
                   },
                   [&](const ServiceCall& b) {
                       put(w, b.principal);
                       put(w, b.request);
                       w.boolean(b.user_trusted);
                       w.boolean(b.domain_trusted);
                   },
                   [&](const ServiceResult& b) {
                       w.str(b.result);
                       put(w, b.assessment);
                   },
                   [&](const MigrateBack& b) {
                       put(w, b.agent);
                       w.str(b.result);
                       put(w, b.assessment);
                   },
                   [&](const BreachNotice& b) {
                       put(w, b.principal);
                       put(w, b.severity);
                       w.u8(static_cast<std::uint8_t>(b.source));
                   },
                   [&](const DeliverResult& b) { w.str(b.result); },
                   [&](const Reject& b) { w.u8(static_cast<std::uint8_t>(b.reason)); },
                   [&](const TrustUpdate& b) {
                       put(w, b.principal);
                       put(w, b.assessment);
                   },
               },
               body);
}

Body decode_body(MsgType type, ByteReader& r) {
    switch (type) {
        case MsgType::AuthSubmit: {
            AuthSubmit b;
            b.principal = get_principal(r);
            b.password = r.str();
            b.request = get_request(r);
            return b;
        }
        case MsgType::AuthResult: return AuthResult{r.u64()};
        case MsgType::TrustQueryUser: return TrustQueryUser{get_principal(r)};
        case MsgType::TrustReplyUser: {
            TrustReplyUser b;
            b.principal = get_principal(r);
            b.trusted = r.boolean();
            return b;
        }
        case MsgType::MigrateOut: return MigrateOut{get_agent(r)};
        case MsgType::DomainTrustQuery: {
            DomainTrustQuery b;
            b.principal = get_principal(r);
            b.ma_id = r.u64();
            return b;
        }
        case MsgType::DomainTrustReply: {
            DomainTrustReply b;
            b.principal = get_principal(r);
            b.trusted = r.boolean();
            return b;
        }
        case MsgType::ServiceCall: {
            ServiceCall b;
            b.principal = get_principal(r);
            b.request = get_request(r);
            b.user_trusted = r.boolean();
            b.domain_trusted = r.boolean();
            return b;
        }
        case MsgType::ServiceResult: {
            ServiceResult b;
            b.result = r.str();
            b.assessment = get_assessment(r);
            return b;
        }
        case MsgType::MigrateBack: {
            MigrateBack b;
            b.agent = get_agent(r);
            b.result = r.str();
            b.assessment = get_assessment(r);
            return b;
        }
        case MsgType::BreachNotice: {
            BreachNotice b;
            b.principal = get_principal(r);
            b.severity = get_kind(r);
            const auto src = r.u8();
            if (src > 1) r.fail("notice source out of range");
            b.source = static_cast<NoticeSource>(src);
            return b;
        }
        case MsgType::DeliverResult: return DeliverResult{r.str()};
        case MsgType::Reject: {
            const auto reason = r.u8();
            if (reason > static_cast<std::uint8_t>(RejectReason::SessionExpired)) r.fail("reject reason out of range");
            return Reject{static_cast<RejectReason>(reason)};
        }
        case MsgType::TrustUpdate: {
            TrustUpdate b;
            b.principal = get_principal(r);
            b.assessment = get_assessment(r);
            return b;
        }
    }
    r.fail("unknown msg_type");
}

void encode_unsealed(ByteWriter& w, const Envelope& e) {
    w.u8(kWireVersion);
    w.u8(static_cast<std::uint8_t>(e.type()));
    w.u64(e.seq);
    w.u64(e.req_id);
    w.u64(e.key_id);
    w.str(e.sender);
    w.str(e.receiver);
    ByteWriter body;
    encode_body(body, e.body);
    w.u32(static_cast<std::uint32_t>(body.size()));
    w.raw(body.bytes());
}

// Parses the header up to and including body_len; returns the body length.
std::uint32_t read_header(ByteReader& r, Envelope* out, MsgType* type) {
    if (r.u8() != kWireVersion) r.fail("unsupported wire version");
    const auto t = r.u8();
    if (t == 0 || t > kMsgTypeCount) r.fail("msg_type out of range");
    *type = static_cast<MsgType>(t);
    out->seq = r.u64();
    out->req_id = r.u64();
    out->key_id = r.u64();
    out->sender = r.str();
    out->receiver = r.str();
    return r.u32();
}

} // namespace

Bytes encode(const Envelope& envelope) {
    ByteWriter w;
    encode_unsealed(w, envelope);
    w.raw(envelope.seal);
    return w.take();
}

Bytes sealed_bytes(const Envelope& envelope) {
    ByteWriter w;
    encode_unsealed(w, envelope);
    return w.take();
}

Envelope decode(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes, Errc::MalformedEnvelope);
    Envelope e;
    MsgType type{};
    const auto body_len = read_header(r, &e, &type);
    ByteReader body(r.raw(body_len), Errc::MalformedEnvelope);
    e.body = decode_body(type, body);
    if (!body.done()) body.fail("trailing bytes in body");
    const auto tag = r.raw(kSealSize);
    std::copy(tag.begin(), tag.end(), e.seal.begin());
    if (!r.done()) r.fail("trailing bytes after seal");
    return e;
}

std::optional<std::string> peek_sender(std::span<const std::uint8_t> bytes) {
    try {
        ByteReader r(bytes, Errc::MalformedEnvelope);
        Envelope scratch;
        MsgType type{};
        read_header(r, &scratch, &type);
        return scratch.sender;
    } catch (const Error&) {
        return std::nullopt;
    }
}

Region body_region(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes, Errc::MalformedEnvelope);
    Envelope scratch;
    MsgType type{};
    const auto body_len = read_header(r, &scratch, &type);
    return Region{r.offset(), body_len};
}

} // namespace trustgate::protocol
