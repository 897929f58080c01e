#include "l2lab/group_ring.hpp"

#include "l2lab/folner.hpp"

#include <algorithm>
#include <sstream>

namespace l2lab {

GroupRingElement::GroupRingElement(Terms terms) {
    for (auto& [g, c] : terms)
        if (c != 0) terms_.emplace(g, c);
}

GroupRingElement GroupRingElement::monomial(const GroupElement& g, std::int64_t coeff) {
    GroupRingElement r;
    r.add_term(g, coeff);
    return r;
}

std::int64_t GroupRingElement::coefficient(const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? 0 : it->second;
}

void GroupRingElement::add_term(const GroupElement& g, std::int64_t coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(g, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& other) {
    for (const auto& [g, c] : other.terms_) add_term(g, c);
    return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& other) {
    for (const auto& [g, c] : other.terms_) add_term(g, -c);
    return *this;
}

GroupRingElement GroupRingElement::operator-() const {
    GroupRingElement r;
    for (const auto& [g, c] : terms_) r.terms_.emplace(g, -c);
    return r;
}

GroupRingElement multiply(const GroupSpec& spec, const GroupRingElement& a, const GroupRingElement& b) {
    GroupRingElement r;
    for (const auto& [g, x] : a.terms())
        for (const auto& [h, y] : b.terms()) r.add_term(multiply(spec, g, h), x * y);
    return r;
}

GroupRingElement translate(const GroupSpec& spec, const GroupElement& g, const GroupRingElement& a) {
    return multiply(spec, GroupRingElement::monomial(g), a);
}

std::string format_group_ring(const GroupSpec& spec, const GroupRingElement& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [g, c] : a.terms()) {
        if (first)
            out << (c < 0 ? "-" : "");
        else
            out << (c < 0 ? " - " : " + ");
        out << (c < 0 ? -c : c) << "*g" << format_element(spec, g);
        first = false;
    }
    return out.str();
}

int support_radius(const GroupSpec& spec, const GroupRingElement& a) {
    int r = 0;
    const GroupElement e = identity(spec);
    for (const auto& [g, c] : a.terms()) r = std::max(r, word_distance(spec, e, g));
    return r;
}

}  // namespace l2lab
