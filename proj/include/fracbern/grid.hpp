#ifndef FRACBERN_GRID_HPP
#define FRACBERN_GRID_HPP

#include <cstddef>
#include <vector>

namespace fracbern {

// Uniform mesh: the interval [a, b] divided into N+1 equal subintervals,
// nodes t_i = a + i*h for i = 0..N+1 with h = (b-a)/(N+1).
class Grid {
public:
    Grid(double a, double b, std::size_t n);

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t n() const { return n_; }
    double h() const { return h_; }
    std::size_t size() const { return nodes_.size(); }  // N + 2
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    // Same interval with (refinement) times as many subintervals.
    Grid refined(std::size_t refinement) const;

private:
    double a_, b_, h_;
    std::size_t n_;
    std::vector<double> nodes_;
};

} // namespace fracbern

#endif // FRACBERN_GRID_HPP
