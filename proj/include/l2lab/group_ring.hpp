#pragma once

#include "l2lab/groups.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace l2lab {

/// Element of the integral group ring: a finite integer combination of
/// group elements. Zero coefficients are never stored.
class GroupRingElement {
public:
    using Terms = std::map<GroupElement, std::int64_t>;

    GroupRingElement() = default;
    explicit GroupRingElement(Terms terms);
    static GroupRingElement monomial(const GroupElement& g, std::int64_t coeff = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::int64_t coefficient(const GroupElement& g) const;

    void add_term(const GroupElement& g, std::int64_t coeff);
    GroupRingElement& operator+=(const GroupRingElement& other);
    GroupRingElement& operator-=(const GroupRingElement& other);
    GroupRingElement operator-() const;

    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
    friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

private:
    Terms terms_;
};

/// Convolution product; g*h is formed with the left factor's element first.
GroupRingElement multiply(const GroupSpec& spec, const GroupRingElement& a, const GroupRingElement& b);

/// Left translation g*a.
GroupRingElement translate(const GroupSpec& spec, const GroupElement& g, const GroupRingElement& a);

/// "1*g(0,0) - 1*g(1,0)"; "0" for the zero element.
std::string format_group_ring(const GroupSpec& spec, const GroupRingElement& a);

/// Maximum word length over the support (0 for the zero element).
int support_radius(const GroupSpec& spec, const GroupRingElement& a);

}  // namespace l2lab
