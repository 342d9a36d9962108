#pragma once

#include <array>
#include <map>
#include <set>
#include <string>

namespace trustgate::agents {

enum class AuthOutcome { Ok, UnknownUser, BadPassword, Removed };

// A domain's user directory: salted password digests plus the membership
// set. The domain's proxy authenticates against it and the domain's trust
// agent removes members from it.
class DomainDirectory {
public:
    explicit DomainDirectory(std::string domain) : domain_(std::move(domain)) {}

    void enroll(const std::string& user_id, const std::string& password);
    AuthOutcome authenticate(const std::string& user_id, const std::string& password) const;

    void remove(const std::string& user_id) { members_.erase(user_id); }
    bool is_member(const std::string& user_id) const { return members_.contains(user_id); }
    const std::set<std::string>& members() const { return members_; }
    const std::string& domain() const { return domain_; }

private:
    using Digest = std::array<unsigned char, 32>;

    Digest digest(const std::string& user_id, const std::string& password) const;

    std::string domain_;
    std::map<std::string, Digest> credentials_;
    std::set<std::string> members_;
};

} // namespace trustgate::agents
