#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hmsim/geometry.hpp"
#include "hmsim/random.hpp"

namespace hmsim
{
//---------------------------------------------------------------------------//
/*!
 * Two sphere models joined by a rigid rod through their centers.
 *
 * Both particles start at the centers (no surface position). The first
 * single-side measurement localizes the measured particle on its sphere and
 * the rod drags the partner to the antipodal point.
 */
class EntangledPair
{
  public:
    bool localized() const { return left_.has_value(); }
    std::optional<Direction> const& left() const { return left_; }
    std::optional<Direction> const& right() const { return right_; }

    // Left measurement on the central particle (axis coordinate 0)
    Outcome measure_left(Direction const& a, ElasticSpec const& e, RandomStream& rng);
    // Requires a localized pair
    Outcome measure_right(Direction const& b, ElasticSpec const& e, RandomStream& rng);

  private:
    std::optional<Direction> left_;
    std::optional<Direction> right_;
};

// Elastic for each wing; the left (source) wing must have d = 0
struct WingSpecs
{
    ElasticSpec left;
    ElasticSpec right;

    WingSpecs(ElasticSpec const& both) : WingSpecs(both, both) {}
    WingSpecs(ElasticSpec const& l, ElasticSpec const& r);
};

struct PairOutcome
{
    Outcome left{Outcome::O1};
    Outcome right{Outcome::O1};
};

/*!
 * Left-first pair measurement on a fresh pair.
 *
 * Draw layout on \c rng: 0-1 left wing (break point, tie coin), 2-3 right
 * wing.
 */
PairOutcome
measure_pair(Direction const& a, Direction const& b, WingSpecs const& specs, RandomStream& rng);

// Right wing measured first; same joint distribution
PairOutcome measure_pair_right_first(Direction const& a,
                                     Direction const& b,
                                     WingSpecs const& specs,
                                     RandomStream& rng);

/*!
 * Rod severed: each trial prepares the product state (w, -w) with w uniform
 * on the sphere and measures the wings independently.
 */
PairOutcome measure_pair_severed(Direction const& a,
                                 Direction const& b,
                                 ElasticSpec const& e,
                                 RandomStream& rng);

// E(a,b) = -clamp(a.b / eps, -1, 1); -sign(a.b) when eps = 0
double correlation_analytic(Direction const& a, Direction const& b, WingSpecs const& specs);

//! Joint outcome counts; index [left][right] with O1 = 0.
struct JointCounts
{
    std::array<std::array<std::uint64_t, 2>, 2> counts{};

    std::uint64_t total() const;
    double correlation() const;
    double left_frequency_o1() const;
    double right_frequency_o1() const;
    JointCounts& operator+=(JointCounts const& other);
    bool operator==(JointCounts const&) const = default;
};

enum class PairModel
{
    rod,
    rod_right_first,
    severed,
};

struct PairTrialOptions
{
    std::uint64_t n{1};
    std::uint64_t seed{0};
    unsigned workers{1};
    PairModel model{PairModel::rod};
};

JointCounts run_pair_trials(Direction const& a,
                            Direction const& b,
                            WingSpecs const& specs,
                            PairTrialOptions const& opts);

//---------------------------------------------------------------------------//
// CHSH
//---------------------------------------------------------------------------//
struct ChshSetting
{
    Direction a;
    Direction a_prime;
    Direction b;
    Direction b_prime;
};

// Coplanar (x-z plane) setting from four angles in degrees
ChshSetting chsh_setting_deg(double a, double a_prime, double b, double b_prime);

// S = E(a,b) + E(a,b') + E(a',b) - E(a',b')
double chsh_combination(double e_ab, double e_abp, double e_apb, double e_apbp);
// Largest |S| over the four placements of the minus sign
double chsh_max_placement(double e_ab, double e_abp, double e_apb, double e_apbp);

double chsh_analytic(ChshSetting const& s, WingSpecs const& specs);

struct ChshEstimate
{
    double s{0};
    double std_error{0};
    std::array<double, 4> correlations{};  //!< ab, ab', a'b, a'b'
};

// Each correlation uses n trials under its own derived seed; n = 0 rejected
ChshEstimate chsh_monte_carlo(ChshSetting const& s,
                              WingSpecs const& specs,
                              PairTrialOptions const& opts);

struct ChshOptimum
{
    double max_abs_s{0};
    // Coplanar angles, degrees
    double a_deg{0};
    double a_prime_deg{0};
    double b_deg{0};
    double b_prime_deg{0};
};

/*!
 * Maximize |S| over coplanar settings.
 *
 * a is pinned at 0 deg (correlations depend only on a.b); a', b, b' are
 * searched on a grid of \c resolution_deg, then refined by compass search
 * down to \c refine_tol_deg. Every sign placement is tried.
 */
ChshOptimum chsh_optimize_coplanar(ElasticSpec const& e,
                                   double resolution_deg = 1.0,
                                   double refine_tol_deg = 1e-6);

// Multistart compass search over four unrestricted directions
double chsh_optimize_sphere(ElasticSpec const& e, int restarts, std::uint64_t seed);

struct ChshSweepRow
{
    double epsilon{0};
    ChshOptimum optimum;
};

std::vector<ChshSweepRow>
chsh_sweep(std::vector<double> const& epsilons, double resolution_deg = 1.0);

}  // namespace hmsim
