#include "dtnsim/interest.hpp"

#include <algorithm>
#include <stdexcept>

namespace dtnsim {

InterestVector::InterestVector(std::initializer_list<int> bits)
{
    bits_.reserve(bits.size());
    for (int b : bits) {
        if (b != 0 && b != 1)
            throw std::invalid_argument("interest components must be 0 or 1");
        bits_.push_back(static_cast<std::uint8_t>(b));
    }
}

InterestVector::InterestVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; }))
        throw std::invalid_argument("interest components must be 0 or 1");
}

std::size_t InterestVector::count() const noexcept
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

InterestVector InterestVector::resized(std::size_t n) const
{
    std::vector<std::uint8_t> out(n, 0);
    std::copy_n(bits_.begin(), std::min(n, bits_.size()), out.begin());
    return InterestVector(std::move(out));
}

std::string InterestVector::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (i)
            s += ' ';
        s += bits_[i] ? '1' : '0';
    }
    return s;
}

Centroid Centroid::from(const InterestVector& v)
{
    Centroid c;
    c.components.reserve(v.size());
    for (std::uint8_t b : v.bits())
        c.components.push_back(b ? 1.0 : 0.0);
    return c;
}

} // namespace dtnsim
