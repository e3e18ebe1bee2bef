#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dtnsim {

using NodeId = std::uint32_t;

/// 1-based interest category index, as used in message classification.
using Category = std::size_t;

/// Binary interest declaration of one node over the scenario's categories.
class InterestVector {
public:
    InterestVector() = default;
    explicit InterestVector(std::size_t n) : bits_(n, 0) {}
    /// Throws std::invalid_argument if any component is not 0 or 1.
    InterestVector(std::initializer_list<int> bits);
    explicit InterestVector(std::vector<std::uint8_t> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    /// 0-based component access.
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }

    /// 1-based category test, matching message classification indices.
    bool has(Category k) const { return k >= 1 && k <= bits_.size() && bits_[k - 1] != 0; }

    std::size_t count() const noexcept;

    /// Truncates or zero-pads to exactly `n` components.
    InterestVector resized(std::size_t n) const;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::string to_string() const;

    friend bool operator==(const InterestVector&, const InterestVector&) = default;
    friend auto operator<=>(const InterestVector&, const InterestVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Cluster mean over interest vectors; components lie in [0, 1].
struct Centroid {
    std::vector<double> components;

    std::size_t size() const noexcept { return components.size(); }
    double operator[](std::size_t i) const { return components[i]; }

    static Centroid from(const InterestVector& v);

    friend bool operator==(const Centroid&, const Centroid&) = default;
};

} // namespace dtnsim
