#include "trustgate/agents/directory.hpp"

#include <sodium.h>

#include <stdexcept>

namespace trustgate::agents {

DomainDirectory::Digest DomainDirectory::digest(const std::string& user_id, const std::string& password) const {
    // Salt is derived from the principal so enrolment stays deterministic.
    Digest salt{};
    const std::string salt_input = "salt/" + domain_ + "/" + user_id;
    crypto_generichash(salt.data(), salt.size(), reinterpret_cast<const unsigned char*>(salt_input.data()),
                       salt_input.size(), nullptr, 0);
    Digest out{};
    crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(password.data()),
                       password.size(), salt.data(), salt.size());
    return out;
}

void DomainDirectory::enroll(const std::string& user_id, const std::string& password) {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    credentials_[user_id] = digest(user_id, password);
    members_.insert(user_id);
}

AuthOutcome DomainDirectory::authenticate(const std::string& user_id, const std::string& password) const {
    auto it = credentials_.find(user_id);
    if (it == credentials_.end()) return AuthOutcome::UnknownUser;
    const auto presented = digest(user_id, password);
    if (sodium_memcmp(presented.data(), it->second.data(), presented.size()) != 0) return AuthOutcome::BadPassword;
    if (!members_.contains(user_id)) return AuthOutcome::Removed;
    return AuthOutcome::Ok;
}

} // namespace trustgate::agents
