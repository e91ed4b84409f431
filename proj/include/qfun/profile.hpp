#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfun {

// Composition (c1,...,ck) up to cyclic rotation; the canonical representative
// is the lexicographically greatest rotation.
struct Profile {
    std::vector<int> parts;

    Profile() = default;
    explicit Profile(std::vector<int> p) : parts(std::move(p)) {
        if (parts.empty()) throw std::domain_error("profile must have length >= 1");
        for (int c : parts)
            if (c < 0) throw std::domain_error("profile entries must be nonnegative");
        canonicalize();
    }

    int length() const { return (int)parts.size(); }
    int size() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int level() const { return length() + size(); }

    void canonicalize() {
        std::vector<int> best = parts;
        std::vector<int> cur = parts;
        for (std::size_t r = 1; r < parts.size(); ++r) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            if (cur > best) best = cur;
        }
        parts = best;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts[i]);
        }
        return s + ")";
    }

    friend bool operator==(const Profile& a, const Profile& b) { return a.parts == b.parts; }
    friend bool operator<(const Profile& a, const Profile& b) { return a.parts < b.parts; }
};

} // namespace qfun
