#include "fracbern/grid.hpp"

#include "fracbern/errors.hpp"

namespace fracbern {

Grid::Grid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
    if (!(b > a))
        throw InvalidParams("grid requires b > a");
    if (n < 4)
        throw InvalidParams("grid requires N >= 4");
    h_ = (b - a) / static_cast<double>(n + 1);
    nodes_.resize(n + 2);
    for (std::size_t i = 0; i <= n + 1; ++i)
        nodes_[i] = a + static_cast<double>(i) * h_;
    nodes_.back() = b;  // pin the right endpoint against accumulation drift
}

Grid Grid::refined(std::size_t refinement) const {
    if (refinement <= 1) return *this;
    return Grid(a_, b_, (n_ + 1) * refinement - 1);
}

} // namespace fracbern
