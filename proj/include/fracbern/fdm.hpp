#ifndef FRACBERN_FDM_HPP
#define FRACBERN_FDM_HPP

#include "fracbern/bernoulli.hpp"
#include "fracbern/grid.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace fracbern {

enum class Bootstrap { ForwardEuler, BackwardEuler };
enum class MidScheme { Midpoint3, Backward3, StayAtBootstrap };
enum class MainScheme { Backward5, StayAtMid };

// Node provenance tags stored in Trajectory::scheme_tags.
enum SchemeTag : int {
    TagInitial = 0,
    TagForwardEuler = 1,
    TagBackwardEuler = 2,
    TagMidpoint3 = 3,
    TagBackward3 = 4,
    TagBackward5 = 5,
};

struct SchemeConfig {
    Bootstrap bootstrap = Bootstrap::BackwardEuler;
    MidScheme mid = MidScheme::Backward3;
    MainScheme main = MainScheme::Backward5;
    double newton_tol = 1e-12;
    int newton_maxit = 50;
    // Substeps used to produce the starting values y_1..y_3. 0 picks enough
    // substeps to keep the startup error at the main scheme's order; 1 is the
    // literal single-step startup (one two-point step, then two three-point
    // steps), whose O(h^2) startup error caps the composite's global order.
    std::size_t startup_substeps = 0;
    // Runs the three-point backward step with prefactor h instead of the
    // consistent 2h. Inconsistent with the derivative formula (it integrates
    // the half-speed equation); kept for side-by-side comparisons.
    bool backward3_h_prefactor = false;
};

// Scalar Newton iteration with |g(x)| <= tol as the success test; falls back
// to geometric bracket expansion plus bisection when the derivative vanishes
// or the iteration diverges. Throws RootNotFound with the last iterate.
double newton_scalar(const std::function<double(double)>& g,
                     const std::function<double(double)>& g_prime,
                     double x0, double tol = 1e-12, int maxit = 50);

// One step of each scheme. Forward/midpoint return the next value; the
// backward (implicit) ones solve for the value at node i.
double step_euler_forward(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                          double y_i);
double step_euler_backward(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                           double y_prev, const SchemeConfig& cfg = {});
double step_midpoint3(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_i, double y_im1);
double step_backward3(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_im1, double y_im2, const SchemeConfig& cfg = {});
double step_backward5(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_im1, double y_im2, double y_im3, double y_im4,
                      const SchemeConfig& cfg = {});

// Composite driver: y_0 from the initial condition, y_1 from the bootstrap
// scheme, y_2 and y_3 from the mid scheme, the rest from the main scheme.
Trajectory solve_fdm(const BernoulliProblem& prob, const Grid& grid,
                     const SchemeConfig& cfg = {});

struct ConvergenceRow {
    std::size_t n;
    double h;
    double endpoint_error;
    double estimated_order;  // NaN on the first row
};

// Endpoint-error sweep over ascending Ns (at least 3), with
// order_k = log(e_k/e_{k+1}) / log(h_k/h_{k+1}) between consecutive rows.
std::vector<ConvergenceRow> convergence_study(const BernoulliProblem& prob,
                                              const std::function<double(double)>& reference,
                                              const std::vector<std::size_t>& ns,
                                              const SchemeConfig& cfg = {});
std::vector<ConvergenceRow> convergence_study(const BernoulliProblem& prob,
                                              const Trajectory& reference,
                                              const std::vector<std::size_t>& ns,
                                              const SchemeConfig& cfg = {});

} // namespace fracbern

#endif // FRACBERN_FDM_HPP
