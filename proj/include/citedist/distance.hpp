#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace citedist {

/**
 * Hop count between two author sets in a collaboration network.
 *
 * Besides a finite value, a distance can be INFINITE (no path exists) or
 * EXCEEDS_CAP(k), meaning a capped search stopped after k levels without
 * reaching the target and could not prove that no path exists.
 */
class Distance {
public:
    enum class Kind : std::uint8_t { Finite, Infinite, ExceedsCap };

    constexpr Distance() = default;

    static constexpr Distance finite(std::uint32_t hops) { return {Kind::Finite, hops}; }
    static constexpr Distance infinite() { return {Kind::Infinite, 0}; }
    static constexpr Distance exceeds_cap(std::uint32_t cap) { return {Kind::ExceedsCap, cap}; }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_infinite() const { return kind_ == Kind::Infinite; }
    constexpr bool is_exceeds_cap() const { return kind_ == Kind::ExceedsCap; }

    /// Finite hop count; meaningless unless is_finite().
    constexpr std::uint32_t hops() const { return value_; }
    /// The cap that was exceeded; meaningless unless is_exceeds_cap().
    constexpr std::uint32_t cap() const { return value_; }

    /// "3", "INF" or ">6".
    std::string to_string() const {
        switch (kind_) {
        case Kind::Finite: return std::to_string(value_);
        case Kind::Infinite: return "INF";
        case Kind::ExceedsCap: return ">" + std::to_string(value_);
        }
        return {};
    }

    friend constexpr bool operator==(const Distance&, const Distance&) = default;

private:
    constexpr Distance(Kind kind, std::uint32_t value) : kind_(kind), value_(value) {}

    Kind kind_ = Kind::Finite;
    std::uint32_t value_ = 0;
};

} // namespace citedist
